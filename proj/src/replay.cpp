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

#include "pipecache/replay.hpp"

#include <future>
#include <set>

#include "pipecache/errors.hpp"
#include "pipecache/state_catalog.hpp"

namespace pipecache {

namespace {

Ratio ratio(std::uint64_t num, std::uint64_t den, double scale) {
  if (den == 0) return {0.0, true};
  return {scale * static_cast<double>(num) / static_cast<double>(den), false};
}

StoreDecision decide(const Strategy& strategy, const ReplayOptions& options,
                     const WorkflowTrace& trace, HistoryIndex& index) {
  switch (strategy.kind) {
    case StrategyKind::kPt:
      if (options.scope == ConfidenceScope::kInclusive) {
        index.ingest(trace);
        return decide_pt(trace, index, ConfidenceScope::kInclusive);
      } else {
        auto d = decide_pt(trace, index, ConfidenceScope::kExclusive);
        index.ingest(trace);
        return d;
      }
    case StrategyKind::kTspar: {
      auto d = decide_tspar(trace, index);
      index.ingest(trace);
      return d;
    }
    case StrategyKind::kTsar:
      index.ingest(trace);
      return decide_tsar(trace, strategy.mode());
    case StrategyKind::kTsfr:
      index.ingest(trace);
      return decide_tsfr(trace, strategy.mode());
  }
  throw ContractError("unknown strategy kind");
}

}  // namespace

Ratio lr(std::uint64_t reuse_pipelines, std::uint64_t total_pipelines) {
  return ratio(reuse_pipelines, total_pipelines, 100.0);
}

Ratio psrr(std::uint64_t reused_distinct, std::uint64_t stored_count) {
  return ratio(reused_distinct, stored_count, 100.0);
}

Ratio frsr(std::uint64_t reuse_events, std::uint64_t stored_count) {
  return ratio(reuse_events, stored_count, 1.0);
}

Ratio pisrs(std::uint64_t stored_count, std::uint64_t total_intermediate_states) {
  return ratio(stored_count, total_intermediate_states, 100.0);
}

double time_gain(const WorkflowTrace& trace, std::size_t matched_len) {
  if (matched_len > trace.length()) {
    throw ContractError("time_gain: matched length " +
                        std::to_string(matched_len) + " exceeds trace length " +
                        std::to_string(trace.length()));
  }
  if (matched_len == 0) return 0.0;
  double t1 = 0.0;
  for (std::size_t i = 0; i < matched_len; ++i) t1 += trace.modules[i].exec_time_s;
  const auto& last = trace.modules[matched_len - 1];
  t1 += last.store_time_s;
  return t1 - last.load_time_s;
}

void finalize(ReplayReport& report) {
  report.lr_pct = lr(report.reuse_pipelines, report.total_pipelines);
  report.psrr_pct = psrr(report.reused_distinct, report.stored_count);
  report.frsr = frsr(report.reuse_events, report.stored_count);
  report.pisrs_pct = pisrs(report.stored_count, report.total_intermediate_states);
  report.total_gain_s = report.time_without_reuse_s - report.time_with_reuse_s;
}

ReplayReport replay(const Corpus& corpus, const Strategy& strategy,
                    const ReplayOptions& options) {
  return replay_with_state(corpus, strategy, options).report;
}

ReplayResult replay_with_state(const Corpus& corpus, const Strategy& strategy,
                               const ReplayOptions& options) {
  const KeyMode mode = strategy.mode();
  ReplayResult result{{}, HistoryIndex(mode), Catalog(mode)};
  HistoryIndex& index = result.index;
  Catalog& catalog = result.catalog;
  std::set<std::size_t> reused;

  ReplayReport& report = result.report;
  report.strategy = strategy.name();
  report.per_pipeline_gain_s.reserve(corpus.size());

  std::size_t ordinal = 0;
  for (const auto& trace : corpus.traces) {
    ++ordinal;
    const auto match = catalog.longest_match(trace);
    const std::size_t k = match ? match->matched_len : 0;
    if (match) {
      ++report.reuse_pipelines;
      ++report.reuse_events;
      report.skipped_modules += k;
      reused.insert(match->journal_pos);
    }

    const bool first_seen = index.dataset_support(trace.dataset) == 0;
    StoreDecision decision = decide(strategy, options, trace, index);
    if (options.beneficial_only) decision = beneficial_only(trace, std::move(decision));

    double stores = 0.0;
    for (const auto& key : decision.keys_to_store) {
      StoredState state = stored_state_of(trace, key.length(), mode, ordinal);
      if (catalog.store(state)) stores += state.store_time_s;
      if (strategy.kind == StrategyKind::kPt && first_seen &&
          key.length() == trace.length()) {
        ++report.unique_dataset_full_stores;
      }
    }

    double full_exec = 0.0;
    double skipped_exec = 0.0;
    for (std::size_t i = 0; i < trace.length(); ++i) {
      full_exec += trace.modules[i].exec_time_s;
      if (i < k) skipped_exec += trace.modules[i].exec_time_s;
    }
    const double reused_store = k ? trace.modules[k - 1].store_time_s : 0.0;
    const double reused_load = k ? trace.modules[k - 1].load_time_s : 0.0;
    report.time_without_reuse_s += full_exec + stores + reused_store;
    report.time_with_reuse_s += full_exec - skipped_exec + reused_load + stores;
    report.per_pipeline_gain_s.push_back(time_gain(trace, k));

    ++report.total_pipelines;
    report.total_intermediate_states += trace.length();
  }

  report.stored_count = catalog.size();
  report.reused_distinct = reused.size();
  finalize(report);
  return result;
}

std::vector<ReplayReport> compare(const Corpus& corpus, const ReplayOptions& options) {
  std::vector<std::future<ReplayReport>> jobs;
  for (const auto& strategy : comparison_strategies()) {
    jobs.push_back(std::async(std::launch::async, [&corpus, strategy, options] {
      return replay(corpus, strategy, options);
    }));
  }
  std::vector<ReplayReport> reports;
  reports.reserve(jobs.size());
  for (auto& job : jobs) reports.push_back(job.get());
  return reports;
}

}  // namespace pipecache
