#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ctscope/graphs.hpp"
#include "ctscope/ingest.hpp"

namespace ctscope::pipeline {

namespace fs = std::filesystem;

struct PipelineConfig {
  // Inputs; relative paths resolve against the config file's directory.
  fs::path tweets;
  fs::path keywords;
  std::optional<fs::path> spam_templates;
  std::optional<fs::path> precomputed_vectors;
  std::optional<fs::path> precomputed_sentiment;
  std::optional<fs::path> lexicon;

  bool strict = false;
  ingest::MatchMode keyword_match = ingest::MatchMode::kToken;

  std::string embedding_provider = "hashed";  // hashed | precomputed
  std::size_t embedding_dim = 256;
  std::uint64_t embedding_seed = 0;

  std::size_t latent_dim = 32;
  std::string cluster_space = "latent";  // latent | raw
  std::size_t k = 6;
  std::uint64_t seed = 42;
  double tol = 1e-6;
  int max_iter = 300;
  std::vector<int> subcluster_ids;
  std::size_t subcluster_k = 3;

  std::size_t keywords_n = 10;

  std::string sentiment_provider = "lexicon";  // lexicon | precomputed
  double pos_threshold = 0.15;
  double neg_threshold = -0.15;
  bool sentiment_raw_text = false;

  std::int64_t bin_width_ms = ingest::kTwelveHoursMs;
  std::size_t top_components = 5;
  std::int64_t curve_resample_ms = 0;  // 0: event timestamps
  graphs::BotThresholds bot;

  fs::path output_dir = "out";

  /// The configuration as read, before path resolution; recorded in the manifest.
  nlohmann::ordered_json snapshot;

  static PipelineConfig from_json(const nlohmann::json& j, const fs::path& base_dir);
  static PipelineConfig load(const fs::path& path);
  /// Throws ConfigError for out-of-range values or missing input files.
  void validate() const;
};

enum class Stage { kIngest, kEmbed, kReduce, kCluster, kTopics, kSentiment, kGraphs, kReport };

const std::vector<Stage>& all_stages();
std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view s);
/// Comma-separated stage names; "all" selects every stage.
std::vector<Stage> parse_stages(std::string_view list);

struct StageRecord {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;   // path -> sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // path relative to output_dir -> sha256
  double duration_ms = 0.0;
};

struct Counts {
  std::size_t raw = 0;  // loaded, de-duplicated
  std::size_t keyword_kept = 0;
  std::size_t spam_removed = 0;
  std::size_t final_count = 0;
};

struct RunManifest {
  nlohmann::ordered_json config;
  std::vector<StageRecord> stages;
  Counts counts;

  const StageRecord* stage(std::string_view name) const;
  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::ordered_json& j);
};

inline constexpr int kSchemaVersion = 1;

/// Runs the selected stages in pipeline order. Each stage reads the persisted
/// artifacts of earlier stages and throws DependencyError when they are absent.
RunManifest run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages);

RunManifest load_manifest(const fs::path& output_dir);

// Artifact paths relative to the output directory.
namespace paths {
inline const fs::path kManifest = "manifest.json";
inline const fs::path kTweets = "ingest/tweets.jsonl";
inline const fs::path kStatus = "ingest/status.csv";
inline const fs::path kVolumeRaw = "ingest/volume_raw.csv";
inline const fs::path kVolumeClean = "ingest/volume_clean.csv";
inline const fs::path kSpamReport = "ingest/spam_report.csv";
inline const fs::path kIngestReport = "ingest/ingest_report.json";
inline const fs::path kEmbeddings = "embed/embeddings.emb";
inline const fs::path kEmbedReport = "embed/embed_report.json";
inline const fs::path kReducer = "reduce/reducer.rdm";
inline const fs::path kLatent = "reduce/latent.emb";
inline const fs::path kReduceReport = "reduce/reduce_report.json";
inline const fs::path kClusterModel = "cluster/clusters.clm";
inline const fs::path kAssignments = "cluster/assignments.csv";
inline const fs::path kClusterReport = "cluster/cluster_report.json";
inline const fs::path kVocabulary = "topics/vocabulary.tsv";
inline const fs::path kKeywordsCsv = "topics/keywords.csv";
inline const fs::path kKeywordsJson = "topics/keywords.json";
inline const fs::path kLabels = "sentiment/labels.csv";
inline const fs::path kTimelineOverall = "sentiment/timeline_overall.csv";
inline const fs::path kSentimentKeywordsCsv = "report/sentiment_keywords.csv";
inline const fs::path kSentimentKeywordsJson = "report/sentiment_keywords.json";
inline const fs::path kClustersSummary = "report/clusters.json";
inline const fs::path kSummary = "report/summary.json";

fs::path timeline_cluster(int cluster);
fs::path graph_dir(const graphs::GraphType& t);
}  // namespace paths

// Loaders shared by the stages and the HTTP service.
std::vector<ingest::CleanTweet> load_clean_tweets(const fs::path& output_dir);
/// tweet_id -> (cluster, optional subcluster), in file order.
struct Assignment {
  std::string tweet_id;
  int cluster = -1;
  std::optional<int> subcluster;
};
std::vector<Assignment> load_assignments(const fs::path& path);
std::vector<std::pair<std::string, sentiment::SentimentLabel>> load_labels(const fs::path& path);

}  // namespace ctscope::pipeline
