// Copyright 2026 The pipecache Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "pipecache/errors.hpp"
#include "pipecache/replay.hpp"
#include "pipecache/synth.hpp"
#include "support/fixtures.hpp"

using namespace pipecache;
using pipecache::testing::make_trace;
using pipecache::testing::worked_example;

namespace {

Strategy strategy(StrategyKind kind, bool adaptive = false) { return {kind, adaptive}; }

}  // namespace

TEST_CASE("metric formulas on reference counts") {
  CHECK(lr(264, 508).value == doctest::Approx(51.97).epsilon(0.0002));
  CHECK(psrr(157, 7165).value == doctest::Approx(2.19).epsilon(0.002));
  CHECK(psrr(71, 159).value == doctest::Approx(44.65).epsilon(0.0002));
  CHECK(frsr(264, 49).value == doctest::Approx(5.3878).epsilon(0.0001));
  CHECK(frsr(261, 159).value == doctest::Approx(1.6415).epsilon(0.0001));
  CHECK(pisrs(49, 7165).value == doctest::Approx(0.684).epsilon(0.001));
  CHECK(pisrs(7165, 7165).value == 100.0);
  CHECK(pisrs(61, 8510).value == doctest::Approx(0.7168).epsilon(0.0002));
  // 200 of 534 is 37.45%; the 39.76% reported alongside it is 200 of 503.
  CHECK(lr(200, 534).value == doctest::Approx(37.4532).epsilon(0.0001));
  CHECK(lr(200, 503).value == doctest::Approx(39.7614).epsilon(0.0001));
}

TEST_CASE("zero numerators and undefined ratios") {
  CHECK(lr(0, 10) == Ratio{0.0, false});
  CHECK(psrr(0, 3) == Ratio{0.0, false});
  CHECK(frsr(0, 3) == Ratio{0.0, false});
  CHECK(lr(0, 0).undefined);
  CHECK(psrr(0, 0).undefined);
  CHECK(frsr(5, 0).undefined);
  CHECK(pisrs(0, 0).undefined);
  CHECK(pisrs(0, 0).value == 0.0);
}

TEST_CASE("time gain of reusing a prefix") {
  auto t = make_trace("W", "D", {"M1", "M2"});
  t.modules[0].exec_time_s = 1163.7;
  t.modules[0].store_time_s = 35.7;
  t.modules[0].load_time_s = 175.9;
  CHECK(time_gain(t, 1) + t.modules[0].load_time_s == doctest::Approx(1199.4));
  CHECK(time_gain(t, 1) == doctest::Approx(1023.5));
  CHECK(time_gain(t, 0) == 0.0);
  CHECK_THROWS_AS(time_gain(t, 3), ContractError);

  auto u = make_trace("U", "D", {"M1", "M2"});
  u.modules[0].exec_time_s = 10;
  u.modules[1].exec_time_s = 20;
  u.modules[1].store_time_s = 5;
  u.modules[1].load_time_s = 3;
  CHECK(time_gain(u, 2) == 32.0);
}

TEST_CASE("total time with reuse is total without minus gain") {
  ReplayReport r;
  r.time_without_reuse_s = 23865;
  r.time_with_reuse_s = 6145;
  finalize(r);
  CHECK(r.total_gain_s == 17720);
  CHECK(r.total_gain_s / r.time_without_reuse_s == doctest::Approx(0.74).epsilon(0.01));
}

TEST_CASE("PT replay of the worked example") {
  const ReplayResult res = replay_with_state(worked_example(), strategy(StrategyKind::kPt));
  const ReplayReport& r = res.report;
  CHECK(r.strategy == "PT");
  CHECK(r.total_pipelines == 4);
  CHECK(r.reuse_pipelines == 0);
  CHECK(r.stored_count == 4);
  CHECK(r.total_intermediate_states == 15);
  CHECK(r.unique_dataset_full_stores == 2);
  CHECK(r.pisrs_pct.value == doctest::Approx(100.0 * 4 / 15));
  CHECK(r.psrr_pct == Ratio{0.0, false});
  REQUIRE(res.catalog.size() == 4);
  CHECK(to_string(res.catalog.journal()[0].key) == "(D1, [M1, M2, M3, M4])");
  CHECK(to_string(res.catalog.journal()[1].key) == "(D2, [M2, M5, M8])");
  CHECK(to_string(res.catalog.journal()[2].key) == "(D1, [M1, M2, M3])");
  CHECK(to_string(res.catalog.journal()[3].key) == "(D1, [M1, M2])");
  CHECK(res.catalog.journal()[3].stored_at_pipeline == 4);
  CHECK(res.index.pipeline_count() == 4);
}

TEST_CASE("baselines on the worked example") {
  const Corpus c = worked_example();
  const ReplayReport tsar = replay(c, strategy(StrategyKind::kTsar));
  CHECK(tsar.stored_count == 10);
  CHECK(tsar.reuse_pipelines == 2);
  CHECK(tsar.reused_distinct == 2);
  CHECK(tsar.reuse_events == 2);
  CHECK(tsar.skipped_modules == 5);  // W3 reuses 3 modules, W4 reuses 2
  CHECK(tsar.pisrs_pct.value == doctest::Approx(100.0 * 10 / 15));
  CHECK(tsar.lr_pct.value == 50.0);

  const ReplayReport tspar = replay(c, strategy(StrategyKind::kTspar));
  CHECK(tspar.stored_count == 2);
  CHECK(tspar.reuse_pipelines == 0);

  const ReplayReport tsfr = replay(c, strategy(StrategyKind::kTsfr));
  CHECK(tsfr.stored_count == 4);
  CHECK(tsfr.reuse_pipelines == 0);
}

TEST_CASE("TSFR on one trace repeated three times") {
  auto t = make_trace("A", "D", {"M1", "M2"});
  t.modules[0].exec_time_s = 10;
  t.modules[1].exec_time_s = 20;
  t.modules[0].store_time_s = 1;
  t.modules[1].store_time_s = 5;
  t.modules[0].load_time_s = 2;
  t.modules[1].load_time_s = 3;
  Corpus c{{t, t, t}};
  c.traces[1].workflow_id = "B";
  c.traces[2].workflow_id = "C";
  const ReplayReport r = replay(c, strategy(StrategyKind::kTsfr));
  CHECK(r.reuse_pipelines == 2);
  CHECK(r.reuse_events == 2);
  CHECK(r.stored_count == 1);
  CHECK(r.reused_distinct == 1);
  CHECK(r.frsr.value == 2.0);
  // First run: 30 exec + 5 store. Repeats: 35 without reuse, 3 (load) with.
  CHECK(r.time_without_reuse_s == 105.0);
  CHECK(r.time_with_reuse_s == 41.0);
  CHECK(r.total_gain_s == 64.0);
  CHECK(r.per_pipeline_gain_s == std::vector<double>{0.0, 32.0, 32.0});
}

TEST_CASE("replay matches the brute-force reference") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.n_pipelines = 150;
    spec.n_datasets = 4 + seed;
    spec.module_vocab_size = 6;
    spec.repeat_bias = 0.6;
    spec.config_variation = 0.2;
    const Corpus corpus = generate(spec);
    for (const auto& s : comparison_strategies()) {
      for (auto scope : {ConfidenceScope::kInclusive, ConfidenceScope::kExclusive}) {
        for (bool beneficial : {false, true}) {
          const ReplayOptions options{scope, beneficial};
          const ReplayReport fast = replay(corpus, s, options);
          const ReplayReport slow = brute_replay(corpus, s, options);
          INFO("seed ", seed, " ", s.name());
          REQUIRE(fast == slow);
        }
      }
    }
  }
}

TEST_CASE("counter identities and dominance") {
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.n_pipelines = 200;
    const Corpus corpus = generate(spec);
    const auto reports = compare(corpus);
    REQUIRE(reports.size() == 5);
    const auto& tsar = reports[2];
    REQUIRE(tsar.strategy == "TSAR");
    for (const auto& r : reports) {
      REQUIRE(tsar.reuse_pipelines >= r.reuse_pipelines);
      REQUIRE(tsar.stored_count >= r.stored_count);
      REQUIRE(r.reuse_events == r.reuse_pipelines);
      REQUIRE(r.reused_distinct <= r.stored_count);
      REQUIRE(std::llround(r.frsr.value * static_cast<double>(r.stored_count)) ==
              static_cast<long long>(r.reuse_events));
      REQUIRE(r.time_without_reuse_s - r.time_with_reuse_s == r.total_gain_s);
      const double summed = std::accumulate(r.per_pipeline_gain_s.begin(),
                                            r.per_pipeline_gain_s.end(), 0.0);
      REQUIRE(summed == doctest::Approx(r.total_gain_s).epsilon(1e-9));
    }
    CHECK(tsar.pisrs_pct.value == 100.0 * static_cast<double>(tsar.stored_count) /
                                      static_cast<double>(tsar.total_intermediate_states));
  }
}

TEST_CASE("compare is deterministic") {
  GenSpec spec;
  spec.seed = 77;
  spec.n_pipelines = 300;
  const Corpus corpus = generate(spec);
  const auto a = compare(corpus);
  const auto b = compare(corpus);
  CHECK(a == b);
  CHECK(reports_to_csv(a) == reports_to_csv(b));
  CHECK(reports_to_json(a).dump() == reports_to_json(b).dump());
}

TEST_CASE("no shared datasets means no reuse") {
  GenSpec spec;
  spec.seed = 3;
  spec.n_pipelines = 40;
  spec.n_datasets = 40;
  spec.repeat_bias = 0.0;
  const Corpus corpus = generate(spec);
  for (const auto& r : compare(corpus)) {
    CHECK(r.reuse_pipelines == 0);
    CHECK(r.lr_pct == Ratio{0.0, false});
    CHECK(r.total_gain_s == 0.0);
  }
  const auto pt = replay(corpus, strategy(StrategyKind::kPt));
  CHECK(pt.unique_dataset_full_stores == 40);
  CHECK(pt.stored_count == 40);
}

TEST_CASE("empty corpus gives undefined ratios") {
  const ReplayReport r = replay(Corpus{}, strategy(StrategyKind::kPt));
  CHECK(r.total_pipelines == 0);
  CHECK(r.lr_pct.undefined);
  CHECK(r.pisrs_pct.undefined);
}

TEST_CASE("report serialization") {
  const auto reports = compare(worked_example());
  const std::string csv = reports_to_csv(reports);
  CHECK(csv.rfind("name,total,reuse_pipelines,stored,reused_distinct,reuse_events,lr,psrr,"
                  "frsr,pisrs,time_without,time_with,gain\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(csv.find("\nTSAR,4,2,10,2,2,50.000000,20.000000,0.200000,66.666667,") !=
        std::string::npos);
  const auto doc = reports_to_json(reports);
  REQUIRE(doc["reports"].size() == 5);
  CHECK(doc["reports"][0]["strategy"] == "PT");
  CHECK(doc["reports"][0]["stored_count"] == 4);
  CHECK(reports_to_table(reports).find("PT-adaptive") != std::string::npos);
}
