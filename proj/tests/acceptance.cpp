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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pipecache/cli.hpp"
#include "pipecache/replay.hpp"
#include "pipecache/rule_miner.hpp"
#include "pipecache/strategies.hpp"
#include "pipecache/synth.hpp"
#include "support/fixtures.hpp"

using namespace pipecache;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  bool known_gap = false;  // failure documented as unattainable
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

PrefixRule rule(const std::string& d, const std::vector<std::string>& m) {
  return state_key_of(testing::make_trace("r", d, m), m.size(), KeyMode::kBase);
}

std::vector<std::string> module_ids(const StateKey& key) {
  std::vector<std::string> out;
  for (const auto& s : key.prefix) out.push_back(s.module_id);
  return out;
}

HistoryIndex index_of(const Corpus& c, KeyMode mode) {
  HistoryIndex index(mode);
  for (const auto& t : c.traces) index.ingest(t);
  return index;
}

GenSpec corpus_spec(std::uint64_t seed) {
  GenSpec spec;
  spec.seed = seed;
  spec.n_pipelines = 200 + 4 * seed;
  spec.n_datasets = 5 + seed % 11;
  spec.module_vocab_size = 4 + seed % 9;
  spec.max_len = 4 + seed % 7;
  spec.repeat_bias = 0.3 + 0.01 * static_cast<double>(seed % 60);
  spec.config_variation = 0.05 * static_cast<double>(seed % 5);
  return spec;
}

const std::vector<Corpus>& property_corpora() {
  static const std::vector<Corpus> corpora = [] {
    std::vector<Corpus> out;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) out.push_back(generate(corpus_spec(seed)));
    return out;
  }();
  return corpora;
}

Outcome worked_example_fidelity() {
  Outcome o;
  const auto start = Clock::now();
  const Corpus c = testing::worked_example();
  const HistoryIndex index = index_of(c, KeyMode::kBase);
  o.expect(index.rules().size() == 10, "distinct rules != 10");
  o.expect(index.support(rule("D1", {"M1"})) == 3, "support(D1=>M1) != 3");
  o.expect(index.confidence(rule("D1", {"M1"})) == 1.0, "confidence(D1=>M1) != 1");
  o.expect(std::abs(*index.confidence(rule("D1", {"M1", "M2", "M3"})) - 2.0 / 3.0) < 1e-12,
           "confidence(D1=>[M1,M2,M3]) != 2/3");
  const auto& w4 = c.traces[3];
  const std::vector<double> want = {1.0, 1.0, 1.0 / 3.0, 1.0 / 3.0};
  const auto rules = derive_rules(w4, KeyMode::kBase);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    o.expect(std::abs(*index.confidence(rules[i]) - want[i]) < 1e-12,
             "W4 rule " + std::to_string(i + 1) + " confidence");
  }
  const auto d = decide_pt(w4, index);
  o.expect(d.keys_to_store.size() == 1 &&
               module_ids(d.keys_to_store[0]) == std::vector<std::string>{"M1", "M2"},
           "PT does not store the output of M2");
  const double t = seconds_since(start);
  o.expect(t < 1.0, "runtime " + fmt("%.3f s", t));
  if (o.pass) o.detail = "PT stores " + to_string(d.keys_to_store[0]) + ", " + fmt("%.4f s", t);
  return o;
}

Outcome adaptive_fidelity() {
  Outcome o;
  const Corpus prime = testing::adaptive_example(true);
  const auto pick = [](const Corpus& c, KeyMode mode) {
    return module_ids(decide_pt(c.traces[3], index_of(c, mode)).keys_to_store.at(0));
  };
  const auto adaptive_prime = pick(prime, KeyMode::kAdaptive);
  o.expect(adaptive_prime == std::vector<std::string>{"M1", "M2"},
           "adaptive with C3' does not store the output of M2");
  const Corpus same = testing::adaptive_example(false);
  o.expect(pick(same, KeyMode::kAdaptive) == pick(same, KeyMode::kBase),
           "adaptive with C3 differs from base mode");
  if (o.pass) o.detail = "C3' -> [M1, M2]; C3 -> same as base ([M1, M2, M3])";
  return o;
}

Outcome metric_spot_checks() {
  Outcome o;
  auto near = [&](const char* name, double got, double want, double tol) {
    o.expect(std::abs(got - want) <= tol,
             std::string(name) + " = " + fmt("%.4f", got) + ", expected " + fmt("%.4f", want));
  };
  near("lr(264,508)", lr(264, 508).value, 51.97, 0.01);
  near("frsr(264,49)", frsr(264, 49).value, 5.388, 0.001);
  near("pisrs(49,7165)", pisrs(49, 7165).value, 0.684, 0.001);
  near("pisrs(61,8510)", pisrs(61, 8510).value, 0.717, 0.001);
  const bool others = o.pass;
  near("lr(200,534)", lr(200, 534).value, 39.76, 0.01);
  if (!o.pass && others) {
    // 100 * 200 / 534 = 37.45; the expected 39.76 is 100 * 200 / 503.
    o.known_gap = true;
    o.detail += " (unattainable: 39.76 is 100*200/503, not 100*200/534)";
  }
  return o;
}

Outcome counter_identities() {
  Outcome o;
  std::size_t rows = 0;
  for (const auto& corpus : property_corpora()) {
    for (const auto& r : compare(corpus)) {
      ++rows;
      o.expect(std::llround(r.frsr.value * static_cast<double>(r.stored_count)) ==
                   static_cast<long long>(r.reuse_events),
               r.strategy + ": frsr x stored != reuse_events");
      o.expect(r.time_without_reuse_s - r.time_with_reuse_s == r.total_gain_s,
               r.strategy + ": time identity");
    }
  }
  if (o.pass) o.detail = std::to_string(rows) + " reports over 50 corpora";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t checks = 0;
  for (const auto& corpus : property_corpora()) {
    for (const auto& s : comparison_strategies()) {
      for (auto scope : {ConfidenceScope::kInclusive, ConfidenceScope::kExclusive}) {
        const ReplayOptions options{scope, false};
        o.expect(replay(corpus, s, options) == brute_replay(corpus, s, options),
                 s.name() + " replay differs from brute force");
      }
    }
    for (KeyMode mode : {KeyMode::kBase, KeyMode::kAdaptive}) {
      HistoryIndex index(mode);
      std::vector<WorkflowTrace> history;
      for (std::size_t n = 0; n < corpus.size(); ++n) {
        index.ingest(corpus.traces[n]);
        history.push_back(corpus.traces[n]);
        for (const auto& r : derive_rules(corpus.traces[n], mode)) {
          ++checks;
          if (index.support(r) != brute_support(history, r)) {
            o.expect(false, "support mismatch for " + to_string(r));
          }
        }
        if (n % 25 == 24 || n + 1 == corpus.size()) {
          const auto brute = brute_rule_counts(history, mode);
          const auto rules = index.rules();
          bool same = rules.size() == brute.size();
          for (const auto& rc : rules) {
            auto it = brute.find(rc.rule);
            same = same && it != brute.end() && it->second == rc.support;
          }
          o.expect(same, "rule table differs from brute recount");
          checks += rules.size();
        }
      }
    }
  }
  const double t = seconds_since(start);
  o.expect(t < 60.0, "runtime " + fmt("%.1f s", t));
  if (o.pass) o.detail = std::to_string(checks) + " support checks, " + fmt("%.2f s", t);
  return o;
}

Outcome dominance() {
  Outcome o;
  for (const auto& corpus : property_corpora()) {
    const auto reports = compare(corpus);
    const auto& tsar = reports[2];
    for (const auto& r : reports) {
      o.expect(tsar.reuse_pipelines >= r.reuse_pipelines,
               r.strategy + " reuses more than TSAR");
    }
    HistoryIndex index;
    for (const auto& t : corpus.traces) {
      index.ingest(t);
      const auto tsar_keys = decide_tsar(t, KeyMode::kBase).keys_to_store;
      for (const auto& k : decide_pt(t, index).keys_to_store) {
        o.expect(std::find(tsar_keys.begin(), tsar_keys.end(), k) != tsar_keys.end(),
                 "PT key outside TSAR keys");
      }
    }
  }
  if (o.pass) o.detail = "50 corpora";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string run_cli_out(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = run_cli(args, out, err);
  return out.str();
}

Outcome determinism() {
  Outcome o;
  const auto root = testing::scratch_dir("acceptance_determinism");
  std::vector<std::string> dumps;
  for (const char* name : {"a", "b"}) {
    int code = 0;
    run_cli_out({"gen", "--seed", "11", "--pipelines", "300", "-o", (root / name).string()},
                code);
    o.expect(code == 0, "gen failed");
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    ++files;
    o.expect(slurp(entry.path()) == slurp(root / "b" / entry.path().filename()),
             "gen output differs in " + entry.path().filename().string());
  }
  o.expect(files == 300, "gen wrote " + std::to_string(files) + " files");
  std::string first;
  for (int i = 0; i < 2; ++i) {
    int code = 0;
    const std::string out =
        run_cli_out({"compare", (root / "a").string(), "--emit", "both"}, code);
    o.expect(code == 0, "compare failed");
    if (i == 0) first = out;
    else o.expect(out == first, "compare output differs between runs");
  }
  if (o.pass) o.detail = "gen --seed 11 (300 files) and compare output byte-identical";
  return o;
}

Outcome performance() {
  Outcome o;
  GenSpec spec;
  spec.seed = 2024;
  spec.n_pipelines = 10000;
  spec.n_datasets = 200;
  spec.module_vocab_size = 40;
  spec.max_len = 15;
  spec.repeat_bias = 0.5;
  const Corpus corpus = generate(spec);
  std::size_t states = 0;
  for (const auto& t : corpus.traces) states += t.length();
  const double avg = static_cast<double>(states) / static_cast<double>(corpus.size());
  o.expect(avg >= 7.5 && avg <= 8.5, "average length " + fmt("%.2f", avg));
  const auto start = Clock::now();
  const ReplayReport r = replay(corpus, {StrategyKind::kPt, false});
  const double t = seconds_since(start);
  o.expect(r.total_pipelines == 10000, "pipeline count");
  o.expect(t < 5.0, "PT replay took " + fmt("%.2f s", t));
  if (o.pass) {
    o.detail = "10000 pipelines, avg length " + fmt("%.2f", avg) + ", PT replay " +
               fmt("%.3f s", t);
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"worked-example fidelity", worked_example_fidelity},
      {"adaptive-example fidelity", adaptive_fidelity},
      {"metric formula spot checks", metric_spot_checks},
      {"counter identities", counter_identities},
      {"oracle equivalence", oracle_equivalence},
      {"dominance properties", dominance},
      {"determinism", determinism},
      {"performance sanity", performance},
  };
  int hard_failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    if (!o.pass && !o.known_gap) ++hard_failures;
  }
  std::fflush(stdout);
  return hard_failures == 0 ? 0 : 1;
}
