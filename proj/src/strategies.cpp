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

#include "pipecache/strategies.hpp"

#include <algorithm>

#include "pipecache/errors.hpp"

namespace pipecache {

std::string Strategy::name() const {
  std::string base;
  switch (kind) {
    case StrategyKind::kPt: base = "PT"; break;
    case StrategyKind::kTsar: base = "TSAR"; break;
    case StrategyKind::kTspar: base = "TSPAR"; break;
    case StrategyKind::kTsfr: base = "TSFR"; break;
  }
  return adaptive ? base + "-adaptive" : base;
}

Strategy parse_strategy(std::string_view text, bool adaptive) {
  if (text == "pt") return {StrategyKind::kPt, adaptive};
  if (text == "pt-adaptive") return {StrategyKind::kPt, true};
  if (text == "tsar") return {StrategyKind::kTsar, adaptive};
  if (text == "tspar") return {StrategyKind::kTspar, adaptive};
  if (text == "tsfr") return {StrategyKind::kTsfr, adaptive};
  throw ValidationError("unknown strategy '" + std::string(text) +
                        "' (expected pt, pt-adaptive, tsar, tspar or tsfr)");
}

std::array<Strategy, 5> comparison_strategies() {
  return {{{StrategyKind::kPt, false},
           {StrategyKind::kPt, true},
           {StrategyKind::kTsar, false},
           {StrategyKind::kTspar, false},
           {StrategyKind::kTsfr, false}}};
}

StoreDecision decide_pt(const WorkflowTrace& trace, const HistoryIndex& index,
                        ConfidenceScope scope) {
  StoreDecision decision;
  if (trace.modules.empty()) return decision;
  // All rules of one trace share the denominator support(D), so comparing
  // confidences reduces to comparing integer supports.
  const auto supports = index.prefix_supports(trace);
  const auto best = *std::max_element(supports.begin(), supports.end());
  if (best == 0) {
    if (scope == ConfidenceScope::kInclusive) {
      throw ContractError("decide_pt: index does not contain workflow '" +
                          trace.workflow_id + "'");
    }
    return decision;
  }
  std::size_t longest = 0;
  for (std::size_t k = 0; k < supports.size(); ++k) {
    if (supports[k] == best) longest = k + 1;
  }
  decision.keys_to_store.push_back(state_key_of(trace, longest, index.mode()));
  return decision;
}

StoreDecision decide_tsar(const WorkflowTrace& trace, KeyMode mode) {
  StoreDecision decision;
  for (std::size_t k = 1; k <= trace.length(); ++k) {
    decision.keys_to_store.push_back(state_key_of(trace, k, mode));
  }
  return decision;
}

StoreDecision decide_tspar(const WorkflowTrace& trace,
                           const HistoryIndex& index_before) {
  StoreDecision decision;
  const auto supports = index_before.prefix_supports(trace);
  // Supports are non-increasing along the prefix, so the last non-zero entry
  // is the unique longest previously seen rule.
  std::size_t longest = 0;
  for (std::size_t k = 0; k < supports.size(); ++k) {
    if (supports[k] >= 1) longest = k + 1;
  }
  if (longest > 0) {
    decision.keys_to_store.push_back(
        state_key_of(trace, longest, index_before.mode()));
  }
  return decision;
}

StoreDecision decide_tsfr(const WorkflowTrace& trace, KeyMode mode) {
  return {{state_key_of(trace, trace.length(), mode)}};
}

bool is_beneficial(const WorkflowTrace& trace, std::size_t prefix_len) {
  if (prefix_len < 1 || prefix_len > trace.length()) {
    throw ContractError("is_beneficial: prefix length out of range");
  }
  double t1 = 0.0;
  for (std::size_t i = 0; i < prefix_len; ++i) t1 += trace.modules[i].exec_time_s;
  t1 += trace.modules[prefix_len - 1].store_time_s;
  return t1 > trace.modules[prefix_len - 1].load_time_s;
}

StoreDecision beneficial_only(const WorkflowTrace& trace, StoreDecision decision) {
  std::erase_if(decision.keys_to_store, [&](const StateKey& key) {
    return !is_beneficial(trace, key.length());
  });
  return decision;
}

}  // namespace pipecache
