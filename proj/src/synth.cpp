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

#include "pipecache/synth.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "pipecache/errors.hpp"

namespace pipecache {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, n) by rejection on the raw 64-bit stream.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  // Multiple of 0.1 in [lo, hi].
  double tenths(const TimeRange& r) {
    const auto lo = static_cast<std::uint64_t>(std::llround(r.min_s * 10.0));
    const auto hi = static_cast<std::uint64_t>(std::llround(r.max_s * 10.0));
    return static_cast<double>(lo + below(hi - lo + 1)) / 10.0;
  }

 private:
  std::mt19937_64 engine_;
};

ConfigSet draw_config(Rng& rng, double variation) {
  std::uint64_t v = 0;
  if (rng.chance(variation)) v = 1 + rng.below(3);
  return {{"param", "v" + std::to_string(v)}};
}

ModuleInvocation fresh_module(Rng& rng, const GenSpec& spec) {
  ModuleInvocation m;
  m.module_id = "M" + std::to_string(rng.below(spec.module_vocab_size));
  m.config = draw_config(rng, spec.config_variation);
  m.exec_time_s = rng.tenths(spec.exec);
  m.store_time_s = rng.tenths(spec.store);
  m.load_time_s = rng.tenths(spec.load);
  return m;
}

void check_range(const TimeRange& r, const char* name) {
  if (!(r.min_s >= 0.0) || !(r.max_s >= r.min_s) || !std::isfinite(r.max_s)) {
    throw ValidationError(std::string("gen spec: invalid ") + name + " range");
  }
}

bool leading_modules_match(const WorkflowTrace& trace, const PrefixRule& rule) {
  if (trace.dataset != rule.dataset || trace.length() < rule.length()) return false;
  for (std::size_t i = 0; i < rule.length(); ++i) {
    const auto& m = trace.modules[i];
    const auto& step = rule.prefix[i];
    if (m.module_id != step.module_id) return false;
    if (step.config && fingerprint(m.config) != *step.config) return false;
  }
  return true;
}

// Whether the first `len` modules of a and b are identical under `mode`.
bool same_prefix(const WorkflowTrace& a, const WorkflowTrace& b, std::size_t len,
                 KeyMode mode) {
  if (a.dataset != b.dataset || a.length() < len || b.length() < len) return false;
  for (std::size_t i = 0; i < len; ++i) {
    if (a.modules[i].module_id != b.modules[i].module_id) return false;
    if (is_adaptive(mode) && a.modules[i].config != b.modules[i].config) return false;
  }
  return true;
}

// A stored state in the oracle: the pipeline that produced it plus a length.
struct FlatState {
  std::size_t trace_pos;
  std::size_t len;
};

}  // namespace

void validate(const GenSpec& spec) {
  if (spec.n_datasets < 1) throw ValidationError("gen spec: n_datasets must be >= 1");
  if (spec.module_vocab_size < 1) {
    throw ValidationError("gen spec: module_vocab_size must be >= 1");
  }
  if (spec.max_len < 1) throw ValidationError("gen spec: max_len must be >= 1");
  if (!(spec.repeat_bias >= 0.0 && spec.repeat_bias <= 1.0)) {
    throw ValidationError("gen spec: repeat_bias must be in [0, 1]");
  }
  if (!(spec.config_variation >= 0.0 && spec.config_variation <= 1.0)) {
    throw ValidationError("gen spec: config_variation must be in [0, 1]");
  }
  check_range(spec.exec, "exec");
  check_range(spec.store, "store");
  check_range(spec.load, "load");
}

Corpus generate(const GenSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);

  std::vector<std::size_t> dataset_order(spec.n_datasets);
  std::iota(dataset_order.begin(), dataset_order.end(), std::size_t{0});
  for (std::size_t i = dataset_order.size(); i > 1; --i) {
    std::swap(dataset_order[i - 1], dataset_order[rng.below(i)]);
  }

  Corpus corpus;
  corpus.traces.reserve(spec.n_pipelines);
  std::size_t fresh_count = 0;
  for (std::size_t n = 0; n < spec.n_pipelines; ++n) {
    WorkflowTrace trace;
    trace.workflow_id = "W" + std::to_string(n + 1);
    const std::size_t target = 1 + rng.below(spec.max_len);

    if (!corpus.traces.empty() && rng.chance(spec.repeat_bias)) {
      const auto& base = corpus.traces[rng.below(corpus.traces.size())];
      trace.dataset = base.dataset;
      const std::size_t copy = std::min<std::size_t>(1 + rng.below(base.length()), target);
      for (std::size_t i = 0; i < copy; ++i) {
        ModuleInvocation m = base.modules[i];
        if (rng.chance(spec.config_variation)) m.config = draw_config(rng, 1.0);
        trace.modules.push_back(std::move(m));
      }
    } else {
      trace.dataset.value =
          "D" + std::to_string(dataset_order[fresh_count % spec.n_datasets]);
      ++fresh_count;
    }
    while (trace.modules.size() < target) {
      trace.modules.push_back(fresh_module(rng, spec));
    }
    corpus.traces.push_back(std::move(trace));
  }
  return corpus;
}

std::uint64_t brute_support(const std::vector<WorkflowTrace>& history,
                            const PrefixRule& rule) {
  if (rule.prefix.empty()) return 0;
  std::uint64_t count = 0;
  for (const auto& trace : history) {
    if (leading_modules_match(trace, rule)) ++count;
  }
  return count;
}

std::map<PrefixRule, std::uint64_t> brute_rule_counts(
    const std::vector<WorkflowTrace>& history, KeyMode mode) {
  std::map<PrefixRule, std::uint64_t> counts;
  for (const auto& trace : history) {
    for (std::size_t len = 1; len <= trace.length(); ++len) {
      PrefixRule rule{trace.dataset, {}};
      for (std::size_t i = 0; i < len; ++i) {
        const auto& m = trace.modules[i];
        rule.prefix.push_back({m.module_id, is_adaptive(mode)
                                                ? std::optional(fingerprint(m.config))
                                                : std::nullopt});
      }
      ++counts[rule];
    }
  }
  return counts;
}

std::uint64_t brute_dataset_support(const std::vector<WorkflowTrace>& history,
                                    const DatasetId& dataset) {
  std::uint64_t count = 0;
  for (const auto& trace : history) {
    if (trace.dataset == dataset) ++count;
  }
  return count;
}

ReplayReport brute_replay(const Corpus& corpus, const Strategy& strategy,
                          const ReplayOptions& options) {
  const KeyMode mode = strategy.mode();
  const auto& traces = corpus.traces;
  std::vector<FlatState> stored;
  std::vector<bool> stored_reused;

  ReplayReport report;
  report.strategy = strategy.name();

  // Pipelines in traces[0, upto) generating the first `len` modules of t.
  auto support_of = [&](const WorkflowTrace& t, std::size_t len, std::size_t upto) {
    std::uint64_t count = 0;
    for (std::size_t j = 0; j < upto; ++j) {
      if (same_prefix(traces[j], t, len, mode)) ++count;
    }
    return count;
  };

  for (std::size_t n = 0; n < traces.size(); ++n) {
    const WorkflowTrace& trace = traces[n];

    // Reuse: scan every stored state, keep the longest that prefixes trace.
    std::size_t k = 0;
    std::size_t hit = 0;
    for (std::size_t s = 0; s < stored.size(); ++s) {
      const FlatState& st = stored[s];
      if (st.len > k && same_prefix(traces[st.trace_pos], trace, st.len, mode)) {
        k = st.len;
        hit = s;
      }
    }
    if (k > 0) {
      ++report.reuse_pipelines;
      ++report.reuse_events;
      report.skipped_modules += k;
      stored_reused[hit] = true;
    }

    bool first_seen = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (traces[j].dataset == trace.dataset) first_seen = false;
    }

    // Decision as a list of prefix lengths.
    std::vector<std::size_t> lengths;
    switch (strategy.kind) {
      case StrategyKind::kPt: {
        const bool inclusive = options.scope == ConfidenceScope::kInclusive;
        const std::size_t upto = inclusive ? n + 1 : n;
        std::uint64_t uses = 0;
        for (std::size_t j = 0; j < upto; ++j) {
          if (traces[j].dataset == trace.dataset) ++uses;
        }
        if (uses == 0) break;
        double best = -1.0;
        std::size_t best_len = 0;
        for (std::size_t len = 1; len <= trace.length(); ++len) {
          const double conf = static_cast<double>(support_of(trace, len, upto)) /
                              static_cast<double>(uses);
          if (conf >= best) {
            best = conf;
            best_len = len;
          }
        }
        if (best > 0.0) lengths.push_back(best_len);
        break;
      }
      case StrategyKind::kTsar:
        for (std::size_t len = 1; len <= trace.length(); ++len) lengths.push_back(len);
        break;
      case StrategyKind::kTspar:
        for (std::size_t len = trace.length(); len >= 1; --len) {
          if (support_of(trace, len, n) >= 1) {
            lengths.push_back(len);
            break;
          }
        }
        break;
      case StrategyKind::kTsfr:
        lengths.push_back(trace.length());
        break;
    }

    double stores = 0.0;
    for (std::size_t len : lengths) {
      const auto& last = trace.modules[len - 1];
      double t1 = 0.0;
      for (std::size_t i = 0; i < len; ++i) t1 += trace.modules[i].exec_time_s;
      t1 += last.store_time_s;
      if (options.beneficial_only && !(t1 > last.load_time_s)) continue;

      bool present = false;
      for (const FlatState& st : stored) {
        if (st.len == len && same_prefix(traces[st.trace_pos], trace, len, mode)) {
          present = true;
          break;
        }
      }
      if (!present) {
        stored.push_back({n, len});
        stored_reused.push_back(false);
        stores += last.store_time_s;
      }
      if (strategy.kind == StrategyKind::kPt && first_seen && len == trace.length()) {
        ++report.unique_dataset_full_stores;
      }
    }

    double full_exec = 0.0;
    for (const auto& m : trace.modules) full_exec += m.exec_time_s;
    double skipped_exec = 0.0;
    for (std::size_t i = 0; i < k; ++i) skipped_exec += trace.modules[i].exec_time_s;
    double gain = 0.0;
    double reused_store = 0.0;
    double reused_load = 0.0;
    if (k > 0) {
      reused_store = trace.modules[k - 1].store_time_s;
      reused_load = trace.modules[k - 1].load_time_s;
      gain = (skipped_exec + reused_store) - reused_load;
    }
    report.time_without_reuse_s += full_exec + stores + reused_store;
    report.time_with_reuse_s += full_exec - skipped_exec + reused_load + stores;
    report.per_pipeline_gain_s.push_back(gain);

    ++report.total_pipelines;
    report.total_intermediate_states += trace.length();
  }

  report.stored_count = stored.size();
  for (bool r : stored_reused) report.reused_distinct += r ? 1 : 0;
  finalize(report);
  return report;
}

}  // namespace pipecache
