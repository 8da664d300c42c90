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

#ifndef PIPECACHE_SYNTH_HPP
#define PIPECACHE_SYNTH_HPP

// Deterministic synthetic corpora and brute-force reference implementations.
//
// The oracles below rescan the raw history on every query and share no code
// with the prefix-tree index or the catalog; tests compare the two paths.

#include <cstdint>
#include <map>
#include <vector>

#include "pipecache/corpus_io.hpp"
#include "pipecache/replay.hpp"
#include "pipecache/rule_miner.hpp"

namespace pipecache {

struct TimeRange {
  double min_s = 0.0;
  double max_s = 0.0;
};

struct GenSpec {
  std::uint64_t seed = 1;
  std::size_t n_pipelines = 100;
  std::size_t n_datasets = 10;
  std::size_t module_vocab_size = 20;
  std::size_t max_len = 8;
  double repeat_bias = 0.5;       // P(new pipeline replays a historical prefix)
  double config_variation = 0.1;  // P(a module's config departs from the default)
  TimeRange exec{1.0, 100.0};
  TimeRange store{0.1, 5.0};
  TimeRange load{0.1, 5.0};
};

/// Throws ValidationError on out-of-range fields.
void validate(const GenSpec& spec);

/// Same spec, same corpus, on every platform: the generator consumes raw
/// std::mt19937_64 output only.
///
/// Each pipeline draws a target length uniformly from [1, max_len]. With
/// probability repeat_bias (and a non-empty history) it copies the dataset
/// and a random-length leading prefix of a random earlier pipeline, then
/// extends with fresh modules; otherwise it takes the next dataset of a
/// seeded permutation (so datasets are unique while fresh pipelines <=
/// n_datasets). Timings are quantized to 0.1 s.
Corpus generate(const GenSpec& spec);

/// Number of traces in `history` over rule.dataset whose leading modules
/// equal the rule's consequent.
std::uint64_t brute_support(const std::vector<WorkflowTrace>& history,
                            const PrefixRule& rule);

/// Support of every rule derivable from `history`, recounted from scratch
/// with a flat map (no prefix tree).
std::map<PrefixRule, std::uint64_t> brute_rule_counts(
    const std::vector<WorkflowTrace>& history, KeyMode mode);

/// Number of traces in `history` over `dataset`.
std::uint64_t brute_dataset_support(const std::vector<WorkflowTrace>& history,
                                    const DatasetId& dataset);

/// Quadratic re-derivation of replay(): keeps the raw history and a flat
/// list of stored keys, recounting support for every decision.
ReplayReport brute_replay(const Corpus& corpus, const Strategy& strategy,
                          const ReplayOptions& options = {});

}  // namespace pipecache

#endif  // PIPECACHE_SYNTH_HPP
