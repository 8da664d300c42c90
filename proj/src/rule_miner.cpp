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

#include "pipecache/rule_miner.hpp"

#include <functional>

#include "pipecache/errors.hpp"

namespace pipecache {

using nlohmann::json;

std::vector<PrefixRule> derive_rules(const WorkflowTrace& trace, KeyMode mode) {
  std::vector<PrefixRule> rules;
  rules.reserve(trace.length());
  PrefixRule rule{trace.dataset, {}};
  for (const auto& module : trace.modules) {
    rule.prefix.push_back(step_key_of(module, mode));
    rules.push_back(rule);
  }
  return rules;
}

std::uint32_t HistoryIndex::child(std::uint32_t node, const StepKey& step) {
  auto it = nodes_[node].children.find(step);
  if (it != nodes_[node].children.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_[node].children.emplace(step, id);
  return id;
}

std::optional<std::uint32_t> HistoryIndex::find_child(std::uint32_t node,
                                                      const StepKey& step) const {
  auto it = nodes_[node].children.find(step);
  if (it == nodes_[node].children.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> HistoryIndex::find_root(const DatasetId& dataset) const {
  auto it = roots_.find(dataset);
  if (it == roots_.end()) return std::nullopt;
  return it->second;
}

void HistoryIndex::ingest(const WorkflowTrace& trace) {
  auto [it, fresh] =
      roots_.emplace(trace.dataset, static_cast<std::uint32_t>(nodes_.size()));
  if (fresh) nodes_.emplace_back();
  std::uint32_t node = it->second;
  ++nodes_[node].support;
  // Prefixes of one trace are distinct nodes, so each rule gains exactly 1.
  for (const auto& module : trace.modules) {
    node = child(node, step_key_of(module, mode_));
    ++nodes_[node].support;
  }
  ++pipeline_count_;
}

std::uint64_t HistoryIndex::dataset_support(const DatasetId& dataset) const {
  auto root = find_root(dataset);
  return root ? nodes_[*root].support : 0;
}

std::uint64_t HistoryIndex::support(const PrefixRule& rule) const {
  if (rule.prefix.empty()) return 0;
  if (rule.mode() != mode_) throw ContractError("rule key mode differs from index mode");
  auto node = find_root(rule.dataset);
  if (!node) return 0;
  for (const auto& step : rule.prefix) {
    node = find_child(*node, step);
    if (!node) return 0;
  }
  return nodes_[*node].support;
}

std::optional<double> HistoryIndex::confidence(const PrefixRule& rule) const {
  const auto total = dataset_support(rule.dataset);
  if (total == 0) return std::nullopt;
  return static_cast<double>(support(rule)) / static_cast<double>(total);
}

std::vector<std::uint64_t> HistoryIndex::prefix_supports(
    const WorkflowTrace& trace) const {
  std::vector<std::uint64_t> out(trace.length(), 0);
  auto node = find_root(trace.dataset);
  for (std::size_t i = 0; node && i < trace.length(); ++i) {
    node = find_child(*node, step_key_of(trace.modules[i], mode_));
    if (node) out[i] = nodes_[*node].support;
  }
  return out;
}

std::vector<DatasetId> HistoryIndex::datasets() const {
  std::vector<DatasetId> out;
  out.reserve(roots_.size());
  for (const auto& [id, root] : roots_) out.push_back(id);
  return out;
}

std::vector<HistoryIndex::RuleCount> HistoryIndex::rules() const {
  std::vector<RuleCount> out;
  for (const auto& [dataset, root] : roots_) {
    PrefixRule rule{dataset, {}};
    std::function<void(std::uint32_t)> walk = [&](std::uint32_t node) {
      for (const auto& [step, next] : nodes_[node].children) {
        rule.prefix.push_back(step);
        out.push_back({rule, nodes_[next].support});
        walk(next);
        rule.prefix.pop_back();
      }
    };
    walk(root);
  }
  return out;
}

bool operator==(const HistoryIndex& a, const HistoryIndex& b) {
  if (a.mode_ != b.mode_ || a.pipeline_count_ != b.pipeline_count_) return false;
  if (a.roots_.size() != b.roots_.size()) return false;
  for (const auto& [id, root] : a.roots_) {
    if (a.nodes_[root].support != b.dataset_support(id)) return false;
  }
  const auto ra = a.rules();
  const auto rb = b.rules();
  if (ra.size() != rb.size()) return false;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i].rule != rb[i].rule || ra[i].support != rb[i].support) return false;
  }
  return true;
}

json HistoryIndex::to_json() const {
  json doc;
  doc["pipeline_count"] = pipeline_count_;
  doc["mode"] = is_adaptive(mode_) ? "adaptive" : "base";
  json datasets = json::array();
  for (const auto& [dataset, root] : roots_) {
    json prefixes = json::array();
    std::vector<const StepKey*> path;
    std::function<void(std::uint32_t)> walk = [&](std::uint32_t node) {
      for (const auto& [step, next] : nodes_[node].children) {
        path.push_back(&step);
        json entry;
        json modules = json::array();
        json fps = json::array();
        for (const StepKey* s : path) {
          modules.push_back(s->module_id);
          if (s->config) fps.push_back(fingerprint_hex(*s->config));
        }
        entry["modules"] = std::move(modules);
        if (is_adaptive(mode_)) entry["fingerprints"] = std::move(fps);
        entry["support"] = nodes_[next].support;
        prefixes.push_back(std::move(entry));
        walk(next);
        path.pop_back();
      }
    };
    walk(root);
    datasets.push_back({{"id", dataset.value},
                        {"support", nodes_[root].support},
                        {"prefixes", std::move(prefixes)}});
  }
  doc["datasets"] = std::move(datasets);
  return doc;
}

HistoryIndex HistoryIndex::from_json(const json& doc) {
  auto fail = [](const std::string& msg) {
    throw ValidationError("index snapshot: " + msg);
  };
  if (!doc.is_object()) fail("expected object");
  KeyMode mode = KeyMode::kBase;
  if (doc.contains("mode")) {
    const auto m = doc["mode"].get<std::string>();
    if (m == "adaptive") {
      mode = KeyMode::kAdaptive;
    } else if (m != "base") {
      fail("unknown mode '" + m + "'");
    }
  }
  HistoryIndex index(mode);
  try {
    index.pipeline_count_ = doc.at("pipeline_count").get<std::uint64_t>();
    std::uint64_t total = 0;
    for (const auto& d : doc.at("datasets")) {
      DatasetId id{d.at("id").get<std::string>()};
      if (id.value.empty()) fail("empty dataset id");
      auto [it, fresh] =
          index.roots_.emplace(id, static_cast<std::uint32_t>(index.nodes_.size()));
      if (!fresh) fail("duplicate dataset '" + id.value + "'");
      index.nodes_.emplace_back();
      const std::uint64_t ds_support = d.at("support").get<std::uint64_t>();
      index.nodes_[it->second].support = ds_support;
      total += ds_support;
      for (const auto& p : d.at("prefixes")) {
        const auto& modules = p.at("modules");
        const json* fps = p.contains("fingerprints") ? &p["fingerprints"] : nullptr;
        if (modules.empty()) fail("empty prefix for dataset '" + id.value + "'");
        if (is_adaptive(mode) != (fps != nullptr) ||
            (fps && fps->size() != modules.size())) {
          fail("fingerprints do not match the snapshot mode");
        }
        std::uint32_t node = it->second;
        std::uint64_t parent_support = ds_support;
        for (std::size_t i = 0; i < modules.size(); ++i) {
          StepKey step{modules[i].get<std::string>(), std::nullopt};
          if (fps) step.config = parse_fingerprint_hex((*fps)[i].get<std::string>());
          const bool last = i + 1 == modules.size();
          auto existing = index.find_child(node, step);
          if (!existing && !last) fail("prefix listed before its parent");
          if (existing && last) fail("duplicate prefix");
          parent_support = index.nodes_[node].support;
          node = existing ? *existing : index.child(node, step);
        }
        const std::uint64_t s = p.at("support").get<std::uint64_t>();
        if (s == 0 || s > parent_support) {
          fail("support of a prefix must be in [1, support of its parent]");
        }
        index.nodes_[node].support = s;
      }
    }
    if (total != index.pipeline_count_) {
      fail("dataset supports do not sum to pipeline_count");
    }
  } catch (const json::exception& e) {
    fail(e.what());
  }
  return index;
}

}  // namespace pipecache
