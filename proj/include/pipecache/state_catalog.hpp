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

#ifndef PIPECACHE_STATE_CATALOG_HPP
#define PIPECACHE_STATE_CATALOG_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "json.hpp"
#include "pipecache/model.hpp"
#include "pipecache/rule_miner.hpp"

namespace pipecache {

/// A stored state whose key is a prefix of a queried trace.
struct CatalogMatch {
  StateKey key;
  std::size_t matched_len = 0;
  std::size_t journal_pos = 0;  // insertion order

  friend bool operator==(const CatalogMatch&, const CatalogMatch&) = default;
};

struct ReuseCandidate {
  StateKey key;
  std::size_t matched_len = 0;
  std::optional<double> confidence;
  double load_time_s = 0.0;
  std::size_t journal_pos = 0;
  std::size_t stored_at_pipeline = 0;

  friend bool operator==(const ReuseCandidate&, const ReuseCandidate&) = default;
};

/// Orders candidates by matched length (desc), confidence (desc, undefined
/// last), then insertion order. Stable and total.
void rank_candidates(std::vector<ReuseCandidate>& candidates);

/// Registry of stored intermediate states (metadata only, no payloads),
/// deduplicated on StateKey and kept in insertion order.
class Catalog {
 public:
  explicit Catalog(KeyMode mode = KeyMode::kBase) : mode_(mode) {}

  KeyMode mode() const { return mode_; }
  std::size_t size() const { return journal_.size(); }
  bool empty() const { return journal_.empty(); }
  const std::vector<StoredState>& journal() const { return journal_; }

  /// Returns false (and leaves the catalog unchanged) if the key is already
  /// present. Throws ContractError when the key's mode differs from ours.
  bool store(const StoredState& state);

  bool contains(const StateKey& key) const;
  std::optional<std::size_t> find(const StateKey& key) const;

  /// Stored state covering the most leading modules of `trace`.
  std::optional<CatalogMatch> longest_match(const WorkflowTrace& trace) const;

  /// Every stored prefix of `trace`, shortest first.
  std::vector<CatalogMatch> matches(const WorkflowTrace& trace) const;

  /// All matches annotated with confidence from `index` and ranked.
  std::vector<ReuseCandidate> reuse_candidates(const WorkflowTrace& trace,
                                               const HistoryIndex& index) const;

  nlohmann::json to_json() const;
  static Catalog from_json(const nlohmann::json& doc);

  friend bool operator==(const Catalog& a, const Catalog& b) {
    return a.mode_ == b.mode_ && a.journal_ == b.journal_;
  }

 private:
  struct Node {
    std::optional<std::size_t> state;
    std::map<StepKey, std::uint32_t> children;
  };

  std::optional<std::uint32_t> node_of(const StateKey& key) const;

  KeyMode mode_;
  std::vector<StoredState> journal_;
  std::map<DatasetId, std::uint32_t> roots_;
  std::vector<Node> nodes_;
};

nlohmann::json state_key_to_json(const StateKey& key);
StateKey state_key_from_json(const nlohmann::json& doc);

}  // namespace pipecache

#endif  // PIPECACHE_STATE_CATALOG_HPP
