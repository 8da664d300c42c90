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

#include "pipecache/state_catalog.hpp"

#include <algorithm>

#include "pipecache/errors.hpp"

namespace pipecache {

using nlohmann::json;

void rank_candidates(std::vector<ReuseCandidate>& candidates) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ReuseCandidate& a, const ReuseCandidate& b) {
                     if (a.matched_len != b.matched_len) {
                       return a.matched_len > b.matched_len;
                     }
                     const double ca = a.confidence.value_or(-1.0);
                     const double cb = b.confidence.value_or(-1.0);
                     if (ca != cb) return ca > cb;
                     return a.journal_pos < b.journal_pos;
                   });
}

std::optional<std::uint32_t> Catalog::node_of(const StateKey& key) const {
  auto root = roots_.find(key.dataset);
  if (root == roots_.end()) return std::nullopt;
  std::uint32_t node = root->second;
  for (const auto& step : key.prefix) {
    auto it = nodes_[node].children.find(step);
    if (it == nodes_[node].children.end()) return std::nullopt;
    node = it->second;
  }
  return node;
}

bool Catalog::store(const StoredState& state) {
  if (state.key.prefix.empty()) {
    throw ContractError("cannot store a state with an empty prefix");
  }
  if (state.key.mode() != mode_) {
    throw ContractError("state key " + to_string(state.key) +
                        " does not match the catalog key mode");
  }
  auto [root, fresh] =
      roots_.emplace(state.key.dataset, static_cast<std::uint32_t>(nodes_.size()));
  if (fresh) nodes_.emplace_back();
  std::uint32_t node = root->second;
  for (const auto& step : state.key.prefix) {
    auto it = nodes_[node].children.find(step);
    if (it == nodes_[node].children.end()) {
      const auto id = static_cast<std::uint32_t>(nodes_.size());
      nodes_.emplace_back();
      nodes_[node].children.emplace(step, id);
      node = id;
    } else {
      node = it->second;
    }
  }
  if (nodes_[node].state) return false;
  nodes_[node].state = journal_.size();
  journal_.push_back(state);
  return true;
}

bool Catalog::contains(const StateKey& key) const { return find(key).has_value(); }

std::optional<std::size_t> Catalog::find(const StateKey& key) const {
  auto node = node_of(key);
  if (!node) return std::nullopt;
  return nodes_[*node].state;
}

std::vector<CatalogMatch> Catalog::matches(const WorkflowTrace& trace) const {
  std::vector<CatalogMatch> out;
  auto root = roots_.find(trace.dataset);
  if (root == roots_.end()) return out;
  std::uint32_t node = root->second;
  for (std::size_t i = 0; i < trace.length(); ++i) {
    auto it = nodes_[node].children.find(step_key_of(trace.modules[i], mode_));
    if (it == nodes_[node].children.end()) break;
    node = it->second;
    if (const auto& pos = nodes_[node].state) {
      out.push_back({journal_[*pos].key, i + 1, *pos});
    }
  }
  return out;
}

std::optional<CatalogMatch> Catalog::longest_match(const WorkflowTrace& trace) const {
  auto all = matches(trace);
  if (all.empty()) return std::nullopt;
  return std::move(all.back());
}

std::vector<ReuseCandidate> Catalog::reuse_candidates(
    const WorkflowTrace& trace, const HistoryIndex& index) const {
  std::vector<ReuseCandidate> out;
  for (auto& m : matches(trace)) {
    const StoredState& state = journal_[m.journal_pos];
    ReuseCandidate c;
    c.confidence = index.confidence(m.key);
    c.key = std::move(m.key);
    c.matched_len = m.matched_len;
    c.load_time_s = state.load_time_s;
    c.journal_pos = m.journal_pos;
    c.stored_at_pipeline = state.stored_at_pipeline;
    out.push_back(std::move(c));
  }
  rank_candidates(out);
  return out;
}

json state_key_to_json(const StateKey& key) {
  json doc;
  doc["dataset"] = key.dataset.value;
  json modules = json::array();
  json fps = json::array();
  for (const auto& step : key.prefix) {
    modules.push_back(step.module_id);
    if (step.config) fps.push_back(fingerprint_hex(*step.config));
  }
  doc["modules"] = std::move(modules);
  if (is_adaptive(key.mode())) doc["fingerprints"] = std::move(fps);
  return doc;
}

StateKey state_key_from_json(const json& doc) {
  StateKey key;
  key.dataset.value = doc.at("dataset").get<std::string>();
  const auto& modules = doc.at("modules");
  const json* fps = doc.contains("fingerprints") ? &doc["fingerprints"] : nullptr;
  if (key.dataset.value.empty() || modules.empty()) {
    throw ValidationError("state key needs a dataset and a non-empty prefix");
  }
  if (fps && fps->size() != modules.size()) {
    throw ValidationError("state key: fingerprints must cover every module");
  }
  for (std::size_t i = 0; i < modules.size(); ++i) {
    StepKey step{modules[i].get<std::string>(), std::nullopt};
    if (fps) step.config = parse_fingerprint_hex((*fps)[i].get<std::string>());
    key.prefix.push_back(std::move(step));
  }
  return key;
}

json Catalog::to_json() const {
  json doc;
  doc["mode"] = is_adaptive(mode_) ? "adaptive" : "base";
  json states = json::array();
  for (const auto& s : journal_) {
    json entry = state_key_to_json(s.key);
    entry["stored_at_pipeline"] = s.stored_at_pipeline;
    entry["load_time_s"] = s.load_time_s;
    entry["cumulative_exec_time_s"] = s.cumulative_exec_time_s;
    entry["store_time_s"] = s.store_time_s;
    states.push_back(std::move(entry));
  }
  doc["states"] = std::move(states);
  return doc;
}

Catalog Catalog::from_json(const json& doc) {
  try {
    const auto mode_name = doc.at("mode").get<std::string>();
    if (mode_name != "base" && mode_name != "adaptive") {
      throw ValidationError("catalog: unknown mode '" + mode_name + "'");
    }
    Catalog catalog(key_mode(mode_name == "adaptive"));
    for (const auto& entry : doc.at("states")) {
      StoredState s;
      s.key = state_key_from_json(entry);
      s.stored_at_pipeline = entry.at("stored_at_pipeline").get<std::size_t>();
      s.load_time_s = entry.at("load_time_s").get<double>();
      s.cumulative_exec_time_s = entry.at("cumulative_exec_time_s").get<double>();
      s.store_time_s = entry.at("store_time_s").get<double>();
      if (s.stored_at_pipeline < 1 || s.cumulative_exec_time_s < 0.0) {
        throw ValidationError("catalog: invalid state " + to_string(s.key));
      }
      if (s.key.mode() != catalog.mode()) {
        throw ValidationError("catalog: key mode mismatch for " + to_string(s.key));
      }
      if (!catalog.store(s)) {
        throw ValidationError("catalog: duplicate state " + to_string(s.key));
      }
    }
    return catalog;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("catalog: ") + e.what());
  }
}

}  // namespace pipecache
