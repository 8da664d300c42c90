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

#ifndef PIPECACHE_REPLAY_HPP
#define PIPECACHE_REPLAY_HPP

// Trace-driven replay of a storage strategy over an execution history.
//
// Pipelines are visited in corpus order. For pipeline n:
//   1. the longest stored prefix (stored by pipelines 1..n-1) is reused, if
//      any; at most one reuse per pipeline;
//   2. the history index ingests the pipeline (TSPAR and exclusive-scope PT
//      decide before this step, inclusive PT after it);
//   3. the strategy's store decision is applied to the catalog.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pipecache/corpus_io.hpp"
#include "pipecache/state_catalog.hpp"
#include "pipecache/strategies.hpp"

namespace pipecache {

struct ReplayOptions {
  ConfidenceScope scope = ConfidenceScope::kInclusive;
  bool beneficial_only = false;

  friend bool operator==(const ReplayOptions&, const ReplayOptions&) = default;
};

/// A percentage or ratio whose denominator may be zero. Undefined ratios
/// carry value 0.
struct Ratio {
  double value = 0.0;
  bool undefined = false;

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

Ratio lr(std::uint64_t reuse_pipelines, std::uint64_t total_pipelines);
Ratio psrr(std::uint64_t reused_distinct, std::uint64_t stored_count);
Ratio frsr(std::uint64_t reuse_events, std::uint64_t stored_count);
Ratio pisrs(std::uint64_t stored_count, std::uint64_t total_intermediate_states);

/// T1 - T2 for reusing the result after `matched_len` modules, where
/// T1 = exec(1..k) + store(k) and T2 = load(k). Zero when matched_len is 0.
double time_gain(const WorkflowTrace& trace, std::size_t matched_len);

struct ReplayReport {
  std::string strategy;
  std::uint64_t total_pipelines = 0;
  std::uint64_t reuse_pipelines = 0;
  std::uint64_t stored_count = 0;
  std::uint64_t reused_distinct = 0;
  std::uint64_t reuse_events = 0;
  std::uint64_t total_intermediate_states = 0;
  std::uint64_t skipped_modules = 0;
  std::uint64_t unique_dataset_full_stores = 0;
  Ratio lr_pct;
  Ratio psrr_pct;
  Ratio frsr;
  Ratio pisrs_pct;
  double time_without_reuse_s = 0.0;
  double time_with_reuse_s = 0.0;
  double total_gain_s = 0.0;  // time_without_reuse_s - time_with_reuse_s
  std::vector<double> per_pipeline_gain_s;

  friend bool operator==(const ReplayReport&, const ReplayReport&) = default;
};

/// Fills the four measures and total_gain_s from the counters and times.
void finalize(ReplayReport& report);

ReplayReport replay(const Corpus& corpus, const Strategy& strategy,
                    const ReplayOptions& options = {});

/// Replay that also hands back the final history index and catalog.
struct ReplayResult {
  ReplayReport report;
  HistoryIndex index;
  Catalog catalog;
};
ReplayResult replay_with_state(const Corpus& corpus, const Strategy& strategy,
                               const ReplayOptions& options = {});

/// Replays every strategy of comparison_strategies() (concurrently, each on
/// its own state). Row order is fixed.
std::vector<ReplayReport> compare(const Corpus& corpus,
                                  const ReplayOptions& options = {});

nlohmann::json report_to_json(const ReplayReport& report);
nlohmann::json reports_to_json(const std::vector<ReplayReport>& reports);

/// name,total,reuse_pipelines,stored,reused_distinct,reuse_events,lr,psrr,
/// frsr,pisrs,time_without,time_with,gain
std::string reports_to_csv(const std::vector<ReplayReport>& reports);

/// Aligned plain-text table for terminals.
std::string reports_to_table(const std::vector<ReplayReport>& reports);

}  // namespace pipecache

#endif  // PIPECACHE_REPLAY_HPP
