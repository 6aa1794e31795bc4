// tests/test_eval.cc

// Copyright 2026  The sepkit project authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "sepkit/common.h"
#include "sepkit/evaluate.h"
#include "sepkit/metrics.h"
#include "sepkit/report_render.h"
#include "sepkit/toy_corpus.h"
#include "testing_util.h"

using namespace sepkit;
using testing::ChainOracle;
using testing::MakeTempDir;
using testing::SlurpFile;

namespace {

struct EvalFixture {
  std::filesystem::path root;
  std::filesystem::path test_manifest;       // 1sp+n and 2sp entries
  std::filesystem::path noisy_manifest;      // 2sp+n entries
  std::filesystem::path clean_manifest;      // derived twins

  EvalFixture() : root(MakeTempDir("eval")) {
    const ToyPools pools = MakeToyCorpus(root / "toy", 3, 4, 17);
    test_manifest = GenerateCorpus(pools.speech, pools.noise,
                                   {{TaskConfig::FromTag(TaskTag::k1spN), 4},
                                    {TaskConfig::FromTag(TaskTag::k2sp), 4}},
                                   root / "test_corpus", 19);
    noisy_manifest = GenerateCorpus(pools.speech, pools.noise,
                                    {{TaskConfig::FromTag(TaskTag::k2spN), 5}},
                                    root / "noisy_corpus", 23);
    clean_manifest = DeriveCleanCorpus(noisy_manifest, root / "clean_corpus");
  }

  std::vector<MixtureSample> LoadAll(const std::filesystem::path& manifest) {
    std::vector<MixtureSample> out;
    for (const ManifestEntry& e : ReadManifest(manifest))
      out.push_back(LoadPremixedSample(manifest.parent_path(), e));
    return out;
  }
};

EvalFixture& Fixture() {
  static EvalFixture f;
  return f;
}

SeparatorFn NullSystem() {
  return [](const Waveform& w) {
    SeparationOutput out;
    out.extracted = w;
    out.residual = w;
    return out;
  };
}

}  // namespace

TEST_CASE("null system scores exactly zero improvement everywhere") {
  auto& f = Fixture();
  const EvalReport report = Evaluate(NullSystem(), f.test_manifest);
  REQUIRE(report.records.size() == 8);
  for (const UtteranceRecord& r : report.records) {
    for (double v : r.per_source_si_snri) CHECK(v == 0.0);
    CHECK(r.mean_si_snri == 0.0);
  }
  for (const auto& [tag, stats] : report.per_task) CHECK(stats.mean == 0.0);
}

TEST_CASE("oracle estimates hit the saturation ceiling") {
  auto& f = Fixture();
  ChainOracle oracle(f.LoadAll(f.test_manifest));
  const EvalReport report = Evaluate(oracle.Fn(), f.test_manifest);
  const auto samples = f.LoadAll(f.test_manifest);
  REQUIRE(report.records.size() == samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    const UtteranceRecord& r = report.records[i];
    double expected = 0.0;
    const size_t n_refs = samples[i].sources.size();
    if (n_refs == 1) {
      expected = kSiSnrCapDb - SiSnr(samples[i].mixture, samples[i].sources[0]);
    } else {
      for (size_t k = 0; k < n_refs; ++k)
        expected +=
            kSiSnrCapDb - SiSnr(samples[i].mixture, samples[i].sources[k]);
      expected /= static_cast<double>(n_refs);
    }
    CHECK(r.mean_si_snri == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("permutation-matched scoring is order independent") {
  auto& f = Fixture();
  const auto samples = f.LoadAll(f.test_manifest);
  for (const MixtureSample& sample : samples) {
    if (sample.sources.size() < 2) continue;
    Rng rng(71);
    std::vector<Waveform> estimates;
    for (const Waveform& s : sample.sources) {
      Waveform e = s;
      for (double& v : e.samples) v += 0.05 * rng.Gaussian();
      estimates.push_back(std::move(e));
    }
    const UtteranceScore forward = ScoreEstimates(estimates, sample);
    std::vector<Waveform> shuffled = {estimates[1], estimates[0]};
    const UtteranceScore reversed = ScoreEstimates(shuffled, sample);
    CHECK(forward.mean_si_snri ==
          doctest::Approx(reversed.mean_si_snri).epsilon(1e-12));
    for (size_t k = 0; k < forward.per_source_si_snri.size(); ++k)
      CHECK(forward.per_source_si_snri[k] ==
            doctest::Approx(reversed.per_source_si_snri[k]).epsilon(1e-12));
  }
}

TEST_CASE("aggregation equals the mean of per-utterance records") {
  auto& f = Fixture();
  ChainOracle oracle(f.LoadAll(f.test_manifest));
  EvalReport report = Evaluate(oracle.Fn(), f.test_manifest);
  for (const auto& [tag, stats] : report.per_task) {
    double acc = 0.0;
    int n = 0;
    for (const UtteranceRecord& r : report.records)
      if (r.tag == tag) {
        acc += r.mean_si_snri;
        ++n;
      }
    REQUIRE(n == stats.count);
    CHECK(std::abs(stats.mean - acc / n) < 1e-9);
  }
}

TEST_CASE("degradation is exactly zero when the noisy run is the clean run") {
  auto& f = Fixture();
  ChainOracle oracle(f.LoadAll(f.clean_manifest));
  const DegradationStats stats =
      DegradationAnalysis(oracle.Fn(), f.clean_manifest, f.clean_manifest);
  CHECK(stats.count == 5);
  for (const DegradationRecord& r : stats.records) {
    CHECK(r.ch1_delta_db == 0.0);
    CHECK(r.ch2_delta_db == 0.0);
  }
}

TEST_CASE("oracle with noise routed to the residual degrades channel 2 only") {
  auto& f = Fixture();
  // The oracle knows both the clean and the noisy chains; in both runs it
  // returns the true first source, so the noise ends up in the residual.
  std::vector<MixtureSample> all = f.LoadAll(f.clean_manifest);
  for (MixtureSample& s : f.LoadAll(f.noisy_manifest))
    all.push_back(std::move(s));
  ChainOracle oracle(std::move(all));
  const DegradationStats stats =
      DegradationAnalysis(oracle.Fn(), f.clean_manifest, f.noisy_manifest);
  REQUIRE(stats.count == 5);
  for (const DegradationRecord& r : stats.records) {
    CHECK(r.ch1_delta_db == 0.0);          // clean source both times
    CHECK(r.ch2_delta_db < 0.0);           // residual picked up the noise
  }
  CHECK(std::abs(stats.ch1_mean) < std::abs(stats.ch2_mean));
}

TEST_CASE("report json round trip") {
  auto& f = Fixture();
  ChainOracle oracle(f.LoadAll(f.test_manifest));
  EvalReport report = Evaluate(oracle.Fn(), f.test_manifest);
  report.metadata["strategy"] = "saddel";
  const std::string text = ReportToJson(report);
  const EvalReport back = ReportFromJson(text);
  CHECK(ReportToJson(back) == text);
}

TEST_CASE("report csv round trip preserves everything") {
  auto& f = Fixture();
  ChainOracle oracle(f.LoadAll(f.test_manifest));
  EvalReport report = Evaluate(oracle.Fn(), f.test_manifest);
  report.metadata["strategy"] = "saddel";
  ChainOracle oracle2(f.LoadAll(f.clean_manifest));
  report.degradation =
      DegradationAnalysis(oracle2.Fn(), f.clean_manifest, f.clean_manifest);

  const EvalReport back = ReportFromCsv(ReportToCsv(report));
  REQUIRE(back.records.size() == report.records.size());
  for (size_t i = 0; i < report.records.size(); ++i) {
    CHECK(back.records[i].id == report.records[i].id);
    CHECK(back.records[i].tag == report.records[i].tag);
    CHECK(back.records[i].matching == report.records[i].matching);
    CHECK(back.records[i].per_source_si_snr ==
          report.records[i].per_source_si_snr);
    CHECK(back.records[i].per_source_si_snri ==
          report.records[i].per_source_si_snri);
    CHECK(back.records[i].mean_si_snri == report.records[i].mean_si_snri);
  }
  CHECK(back.metadata == report.metadata);
  REQUIRE(back.degradation.has_value());
  CHECK(back.degradation->ch1_mean == report.degradation->ch1_mean);
  CHECK(back.degradation->records.size() ==
        report.degradation->records.size());
  for (const auto& [tag, stats] : report.per_task) {
    CHECK(back.per_task.at(tag).mean == stats.mean);
    CHECK(back.per_task.at(tag).count == stats.count);
  }
}

TEST_CASE("table text mirrors the json numbers at two decimals") {
  auto& f = Fixture();
  ChainOracle oracle(f.LoadAll(f.test_manifest));
  EvalReport report = Evaluate(oracle.Fn(), f.test_manifest);
  report.metadata["strategy"] = "saddel";
  const std::string table = RenderTableText({{"saddel", report}});
  for (const auto& [tag, stats] : report.per_task) {
    char cell[32];
    std::snprintf(cell, sizeof(cell), "%.2f", stats.mean);
    CHECK(table.find(cell) != std::string::npos);
  }
  // Tasks with no records render as dashes.
  CHECK(table.find('-') != std::string::npos);
}

TEST_CASE("render report writes the requested files and rejects junk") {
  auto& f = Fixture();
  const auto out = MakeTempDir("render");
  EvalReport report;  // empty is valid
  report.metadata["strategy"] = "empty";
  RenderReport(report, out, {"json", "csv", "table", "plot"});
  CHECK(std::filesystem::exists(out / "report.json"));
  CHECK(std::filesystem::exists(out / "report.csv"));
  CHECK(std::filesystem::exists(out / "table.txt"));
  CHECK(std::filesystem::exists(out / "degradation.png"));
  const std::string png = SlurpFile(out / "degradation.png");
  REQUIRE(png.size() > 8);
  CHECK(png.substr(1, 3) == "PNG");
  const EvalReport parsed =
      ReportFromCsv(SlurpFile(out / "report.csv"));
  CHECK(parsed.records.empty());
  CHECK_THROWS_AS(RenderReport(report, out, {"yaml"}), ContractViolation);
}

TEST_CASE("table merge renders one row per strategy") {
  auto& f = Fixture();
  ChainOracle oracle(f.LoadAll(f.test_manifest));
  EvalReport a = Evaluate(oracle.Fn(), f.test_manifest);
  const EvalReport b = Evaluate(NullSystem(), f.test_manifest);
  const std::string table =
      RenderTableText({{"saddel", a}, {"bl_ss", b}});
  CHECK(table.find("saddel") != std::string::npos);
  CHECK(table.find("bl_ss") != std::string::npos);
  CHECK(table.find("1sp+n") != std::string::npos);
  CHECK(table.find("3sp+n") != std::string::npos);
}
