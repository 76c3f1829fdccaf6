#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctscope/ingest.hpp"
#include "ctscope/polarity.hpp"
#include "ctscope/sentiment.hpp"

namespace ctscope::graphs {

enum class NodeKind { kTweet, kUser };
enum class EdgeKind { kReply, kQuote };

struct GraphType {
  NodeKind node_kind;
  EdgeKind edge_kind;
  std::string str() const;  // "tweet-quote", "user-reply", ...
  static std::optional<GraphType> parse(std::string_view s);
  bool operator==(const GraphType&) const = default;
};

inline const std::vector<GraphType>& all_graph_types() {
  static const std::vector<GraphType> types = {{NodeKind::kTweet, EdgeKind::kQuote},
                                               {NodeKind::kTweet, EdgeKind::kReply},
                                               {NodeKind::kUser, EdgeKind::kQuote},
                                               {NodeKind::kUser, EdgeKind::kReply}};
  return types;
}

struct NodeAttrs {
  std::string id;
  std::optional<Polarity> sentiment;
  std::optional<double> sentiment_score;
  std::int64_t interaction_count = 0;
  std::optional<std::int64_t> friends;
  std::optional<std::int64_t> followers;
  bool external = false;  // referenced but not present in the corpus
  bool operator==(const NodeAttrs&) const = default;
};

struct Edge {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::int64_t timestamp_ms = 0;
  std::string tweet_id;  // the interacting tweet
  bool operator==(const Edge&) const = default;
};

struct EdgeSpec {
  std::string src;
  std::string dst;
  std::int64_t timestamp_ms = 0;
  std::string tweet_id;
};

/// Directed multigraph. Nodes are kept sorted by id, so node index order is
/// id order.
class InteractionGraph {
 public:
  InteractionGraph() = default;
  /// Endpoints missing from `nodes` are created with default attributes.
  InteractionGraph(GraphType type, std::vector<NodeAttrs> nodes, const std::vector<EdgeSpec>& edges);

  GraphType type() const { return type_; }
  const std::vector<NodeAttrs>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::optional<std::size_t> find(const std::string& id) const;
  /// Out-neighbors with multiplicity.
  const std::vector<std::size_t>& out(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& in(std::size_t v) const { return in_[v]; }

  bool operator==(const InteractionGraph& o) const {
    return type_ == o.type_ && nodes_ == o.nodes_ && edges_ == o.edges_;
  }

 private:
  GraphType type_{NodeKind::kTweet, EdgeKind::kReply};
  std::vector<NodeAttrs> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_, in_;
};

/// Same nodes with parallel edges collapsed (first occurrence kept).
InteractionGraph simple_projection(const InteractionGraph& g);

/// retweet + favorite + reply + quote counts.
std::int64_t interaction_count(const ingest::RawTweet& t);

struct BuildReport {
  std::size_t retweets_skipped = 0;
  std::size_t malformed_references = 0;  // status id without user id
  std::size_t self_references = 0;       // tweet referencing itself
  std::size_t external_targets = 0;
};

/// Tweet graphs: edge interacting tweet -> referenced tweet. User graphs:
/// edge referenced author -> interacting author. Only nodes incident to an
/// edge are included. Retweets are skipped. `labels`, when non-empty, is
/// parallel to `tweets` and supplies node sentiment.
InteractionGraph build_graph(const std::vector<ingest::CleanTweet>& tweets, GraphType type,
                             const std::vector<sentiment::SentimentLabel>& labels = {},
                             BuildReport* report = nullptr);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population
  std::int64_t median = 0;  // lower median
  std::int64_t max = 0;
};

struct DegreeStats {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  Summary degree, in_degree, out_degree;
  bool empty = false;
};

/// Parallel edges each count; a self-loop adds one in and one out.
DegreeStats degree_stats(const InteractionGraph& g);

enum class ComponentKind { kWcc, kScc };
std::string_view to_string(ComponentKind k);
std::optional<ComponentKind> parse_component_kind(std::string_view s);

struct Component {
  ComponentKind kind = ComponentKind::kWcc;
  std::size_t rank = 0;            // 1-based, size descending, ties by smallest member id
  std::vector<std::size_t> nodes;  // ascending node index (= ascending id)
  std::size_t size() const { return nodes.size(); }
};

std::vector<Component> weakly_connected_components(const InteractionGraph& g);
/// Iterative Tarjan, linear time.
std::vector<Component> strongly_connected_components(const InteractionGraph& g);

/// Forward closure from the seeds, excluding the seeds. Ascending indices.
std::vector<std::size_t> reachable_set(const InteractionGraph& g, std::span<const std::size_t> seeds);
/// Throws DataError on an unknown seed id.
std::vector<std::size_t> reachable_set(const InteractionGraph& g, const std::vector<std::string>& seed_ids);

struct MetaStats {
  std::size_t count = 0;    // nodes with friends and followers present
  std::size_t missing = 0;  // nodes lacking metadata
  // Rounded half-up.
  std::int64_t mean_friends = 0, median_friends = 0, mean_followers = 0, median_followers = 0;
  double mean_friends_exact = 0.0, mean_followers_exact = 0.0;
  bool empty = true;
};

MetaStats meta_stats(const InteractionGraph& g, std::span<const std::size_t> nodes);
std::int64_t round_half_up(double v);

enum class BotFlag { kLinearGrowth, kFlatWithinVsReachable, kZeroMetadata, kShortBurst };
std::string_view to_string(BotFlag f);

struct BotThresholds {
  double linear_min_score = 0.98;
  std::size_t linear_min_points = 20;
  double flat_tolerance = 0.5;  // |within - reachable| <= tol * max(within, 1)
  std::int64_t burst_max_span_ms = 24LL * 3600 * 1000;
  std::size_t burst_min_interactions = 50;
};

using Curve = std::vector<std::pair<std::int64_t, std::size_t>>;

struct Linearity {
  double score = 0.0;
  bool flagged = false;  // degenerate: constant counts or a single time value
};

/// R^2 of the least-squares line count ~ time, clamped to [0,1]. A constant
/// curve scores 1 (flagged). Throws DataError with fewer than 3 points.
Linearity linearity_score(const Curve& curve);

/// Samples a cumulative curve on a fixed grid from its first timestamp.
Curve resample_curve(const Curve& curve, std::int64_t step_ms);

struct ComponentProfile {
  Component component;
  MetaStats within;
  MetaStats reachable;
  std::size_t reachable_set_size = 0;
  Curve temporal_curve;
  std::size_t interactions = 0;
  std::int64_t activity_span_ms = 0;
  std::optional<Linearity> linearity;  // absent with fewer than 3 curve points
  std::set<BotFlag> bot_flags;
};

/// Throws DataError for an empty component.
ComponentProfile profile_component(const InteractionGraph& g, const Component& c, const BotThresholds& thresholds = {});

struct ExportOptions {
  std::optional<ComponentKind> component_kind;  // annotate with this kind's ranks
  std::optional<std::size_t> only_rank;         // restrict to one component of that kind
};

std::string to_graphml(const InteractionGraph& g, const ExportOptions& opts = {});
std::string to_dot(const InteractionGraph& g, const ExportOptions& opts = {});

struct ParsedGraph {
  InteractionGraph graph;
  // Per node index; absent when the export was not annotated.
  std::vector<std::optional<std::pair<ComponentKind, std::size_t>>> components;
};

ParsedGraph parse_graphml(std::string_view xml);

std::string profile_csv_header();
std::string profile_csv_row(const GraphType& type, const ComponentProfile& p);
std::string curve_csv(const Curve& curve);
std::string degree_stats_json(const GraphType& type, const DegreeStats& s);
std::string profiles_json(const GraphType& type, const InteractionGraph& g, const std::vector<ComponentProfile>& profiles);
/// node_id,kind,rank for every node of every component.
std::string membership_csv(const InteractionGraph& g, const std::vector<Component>& components);

}  // namespace ctscope::graphs
