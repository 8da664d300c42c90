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

#ifndef PIPECACHE_RULE_MINER_HPP
#define PIPECACHE_RULE_MINER_HPP

// Dataset => module-prefix association rules and their support index.
//
// A trace over dataset D with modules M1..Mn yields exactly n rules,
// D => [M1], D => [M1, M2], ..., D => [M1..Mn]. Support of a rule is the
// number of ingested pipelines that generate it; confidence divides that by
// the number of pipelines that used D.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "pipecache/model.hpp"

namespace pipecache {

/// Antecedent dataset => consequent module prefix. Same shape as StateKey.
using PrefixRule = StateKey;

std::vector<PrefixRule> derive_rules(const WorkflowTrace& trace, KeyMode mode);

/// Incremental support index: one prefix tree per dataset. Support lookups
/// and longest-prefix walks cost O(prefix length).
class HistoryIndex {
 public:
  explicit HistoryIndex(KeyMode mode = KeyMode::kBase) : mode_(mode) {}

  KeyMode mode() const { return mode_; }
  std::uint64_t pipeline_count() const { return pipeline_count_; }

  /// Adds one pipeline: its dataset and each of its prefix rules gain 1.
  void ingest(const WorkflowTrace& trace);

  std::uint64_t dataset_support(const DatasetId& dataset) const;
  std::uint64_t support(const PrefixRule& rule) const;

  /// support(rule) / dataset_support(antecedent); nullopt when the dataset
  /// was never seen.
  std::optional<double> confidence(const PrefixRule& rule) const;

  /// Supports of the trace's rules, entry k-1 for the rule of length k.
  /// Walks the tree once.
  std::vector<std::uint64_t> prefix_supports(const WorkflowTrace& trace) const;

  struct RuleCount {
    PrefixRule rule;
    std::uint64_t support;
  };
  /// Every rule with its support, datasets in id order, prefixes depth-first
  /// in step-key order.
  std::vector<RuleCount> rules() const;
  std::vector<DatasetId> datasets() const;

  nlohmann::json to_json() const;
  /// Throws ValidationError on schema or invariant violations.
  static HistoryIndex from_json(const nlohmann::json& doc);

  /// Same mode, pipeline count and rule supports (tree layout ignored).
  friend bool operator==(const HistoryIndex& a, const HistoryIndex& b);

 private:
  struct Node {
    std::uint64_t support = 0;
    std::map<StepKey, std::uint32_t> children;
  };

  std::uint32_t child(std::uint32_t node, const StepKey& step);
  std::optional<std::uint32_t> find_child(std::uint32_t node,
                                          const StepKey& step) const;
  std::optional<std::uint32_t> find_root(const DatasetId& dataset) const;

  KeyMode mode_;
  std::uint64_t pipeline_count_ = 0;
  std::map<DatasetId, std::uint32_t> roots_;  // root node support = dataset support
  std::vector<Node> nodes_;
};

}  // namespace pipecache

#endif  // PIPECACHE_RULE_MINER_HPP
