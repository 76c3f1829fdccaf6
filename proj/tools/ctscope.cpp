// ctscope command-line entry point.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <optional>
#include <string>

#include "ctscope/api.hpp"
#include "ctscope/error.hpp"
#include "ctscope/fixture.hpp"
#include "ctscope/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ctscope;

namespace {

struct Options {
  std::string config;
  std::string stages = "all";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string bind = "127.0.0.1:8080";
};

pipeline::PipelineConfig load_config(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  auto cfg = pipeline::PipelineConfig::load(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.snapshot["cluster"]["seed"] = *o.seed;
  }
  if (!o.out.empty()) {
    cfg.output_dir = o.out;
    cfg.snapshot["output_dir"] = o.out;
  }
  return cfg;
}

void print_manifest(const pipeline::RunManifest& m, const std::vector<pipeline::Stage>& ran) {
  for (auto s : ran) {
    if (const auto* r = m.stage(pipeline::to_string(s))) {
      std::printf("%-10s %4zu outputs  %9.1f ms\n", r->name.c_str(), r->outputs.size(), r->duration_ms);
    }
  }
  std::printf("counts: raw=%zu keyword_kept=%zu spam_removed=%zu final=%zu\n", m.counts.raw, m.counts.keyword_kept,
              m.counts.spam_removed, m.counts.final_count);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctscope: crypto-twitter corpus analysis"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "pipeline configuration (JSON)");
    sub->add_option("--seed", o.seed, "override the clustering seed");
    sub->add_option("--out", o.out, "override the output directory");
  };

  std::vector<std::pair<CLI::App*, pipeline::Stage>> stage_cmds;
  for (auto s : pipeline::all_stages()) {
    auto* sub = app.add_subcommand(std::string(pipeline::to_string(s)), fmt::format("run the {} stage", pipeline::to_string(s)));
    add_common(sub);
    stage_cmds.emplace_back(sub, s);
  }
  auto* run = app.add_subcommand("run", "run the pipeline");
  add_common(run);
  run->add_option("--stages", o.stages, "comma-separated stages, or 'all'");

  auto* serve = app.add_subcommand("serve", "serve a completed run over HTTP");
  serve->add_option("--config", o.config, "configuration naming the output directory");
  serve->add_option("--out", o.out, "artifact directory");
  serve->add_option("--bind", o.bind, "host:port");

  auto* fix = app.add_subcommand("fixture", "write the synthetic fixture corpus");
  fix->add_option("--out", o.out, "destination directory")->required();
  fix->add_option("--seed", o.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kConfig);
  }

  try {
    for (const auto& [sub, stage] : stage_cmds) {
      if (!sub->parsed()) continue;
      auto cfg = load_config(o);
      print_manifest(pipeline::run_pipeline(cfg, {stage}), {stage});
      return 0;
    }
    if (run->parsed()) {
      auto cfg = load_config(o);
      auto stages = pipeline::parse_stages(o.stages);
      print_manifest(pipeline::run_pipeline(cfg, stages), stages);
      return 0;
    }
    if (serve->parsed()) {
      fs::path dir = o.out;
      if (dir.empty()) dir = load_config(o).output_dir;
      std::fprintf(stderr, "serving %s on http://%s\n", dir.string().c_str(), o.bind.c_str());
      api::serve(dir, o.bind);
      return 0;
    }
    if (fix->parsed()) {
      fixture::FixtureOptions fo;
      if (o.seed) fo.seed = *o.seed;
      auto f = fixture::make_fixture(fo);
      fixture::write_fixture(f, o.out);
      std::printf("wrote %zu lines to %s\n", f.lines.size(), (fs::path(o.out) / "tweets.jsonl").string().c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::kData);
  }
  return 0;
}
