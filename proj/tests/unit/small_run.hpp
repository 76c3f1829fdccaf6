#pragma once

#include <filesystem>

#include "ctscope/fixture.hpp"
#include "ctscope/pipeline.hpp"

namespace testing_support {

/// A reduced fixture run through every stage once per test process.
struct SmallRun {
  std::filesystem::path dir;
  ctscope::fixture::Fixture fixture;
  ctscope::pipeline::PipelineConfig config;
  ctscope::pipeline::RunManifest manifest;
};

inline const SmallRun& small_run() {
  static const SmallRun run = [] {
    SmallRun r;
    r.dir = std::filesystem::temp_directory_path() / "ctscope_unit_small_run";
    std::filesystem::remove_all(r.dir);
    ctscope::fixture::FixtureOptions o;
    o.background_tweets = 1500;
    o.spam_copies = 100;
    o.noise_tweets = 100;
    r.fixture = ctscope::fixture::make_fixture(o);
    ctscope::fixture::write_fixture(r.fixture, r.dir);
    r.config = ctscope::pipeline::PipelineConfig::load(r.dir / "config.json");
    r.manifest = ctscope::pipeline::run_pipeline(r.config, ctscope::pipeline::all_stages());
    return r;
  }();
  return run;
}

}  // namespace testing_support
