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

#ifndef PIPECACHE_STRATEGIES_HPP
#define PIPECACHE_STRATEGIES_HPP

// Storage-decision strategies.
//
//   PT     store the longest of the trace's highest-confidence rules
//   TSAR   store every prefix of every pipeline
//   TSPAR  store the longest prefix that appeared at least once before
//   TSFR   store the final result only
//
// PT-adaptive is PT over config-qualified rules.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "pipecache/model.hpp"
#include "pipecache/rule_miner.hpp"

namespace pipecache {

enum class StrategyKind { kPt, kTsar, kTspar, kTsfr };

struct Strategy {
  StrategyKind kind = StrategyKind::kPt;
  bool adaptive = false;

  KeyMode mode() const { return key_mode(adaptive); }
  /// "PT", "PT-adaptive", "TSAR", ... Baselines in adaptive key mode get an
  /// "-adaptive" suffix too.
  std::string name() const;

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Parses the CLI spelling: pt, pt-adaptive, tsar, tspar, tsfr.
Strategy parse_strategy(std::string_view text, bool adaptive = false);

/// The five configurations compared side by side.
std::array<Strategy, 5> comparison_strategies();

struct StoreDecision {
  std::vector<StateKey> keys_to_store;

  bool empty() const { return keys_to_store.empty(); }
  friend bool operator==(const StoreDecision&, const StoreDecision&) = default;
};

enum class ConfidenceScope {
  kInclusive,  // index already holds the current pipeline
  kExclusive,  // index holds only the previous pipelines
};

/// PT. With kInclusive, `index` must already include `trace`. With
/// kExclusive the decision is empty when no rule of the trace has prior
/// evidence.
StoreDecision decide_pt(const WorkflowTrace& trace, const HistoryIndex& index,
                        ConfidenceScope scope = ConfidenceScope::kInclusive);

StoreDecision decide_tsar(const WorkflowTrace& trace, KeyMode mode);

/// `index_before` must not include `trace`.
StoreDecision decide_tspar(const WorkflowTrace& trace,
                           const HistoryIndex& index_before);

StoreDecision decide_tsfr(const WorkflowTrace& trace, KeyMode mode);

/// True when storing the prefix of length `prefix_len` can pay off:
/// exec(1..k) + store(k) > load(k).
bool is_beneficial(const WorkflowTrace& trace, std::size_t prefix_len);

/// Drops keys that fail is_beneficial.
StoreDecision beneficial_only(const WorkflowTrace& trace, StoreDecision decision);

}  // namespace pipecache

#endif  // PIPECACHE_STRATEGIES_HPP
