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

// Galaxy workflow (.ga) adapter. Lossy: keeps tool ids, flattened tool state
// and the step order implied by input connections; no timings.

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "pipecache/corpus_io.hpp"
#include "pipecache/errors.hpp"

namespace pipecache {

using nlohmann::json;

namespace {

struct GalaxyStep {
  long id = 0;
  std::string type;
  std::string tool_id;
  std::string label;
  json tool_state;
  std::vector<long> sources;
};

bool is_input_type(const std::string& type) {
  return type == "data_input" || type == "data_collection_input" ||
         type == "parameter_input";
}

// Strings holding an encoded object, array or string are decoded; anything
// else (numbers, words) is kept verbatim.
json decode_nested(const json& v) {
  if (!v.is_string()) return v;
  const auto& s = v.get_ref<const std::string&>();
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return v;
  char c = s[first];
  if (c != '{' && c != '[' && c != '"') return v;
  json parsed = json::parse(s, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) return v;
  return decode_nested(parsed);
}

void flatten(const json& value, const std::string& key, ConfigSet& out) {
  json v = decode_nested(value);
  if (v.is_object()) {
    for (const auto& item : v.items()) {
      if (item.key().rfind("__", 0) == 0) continue;
      flatten(item.value(), key.empty() ? item.key() : key + "." + item.key(),
              out);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      flatten(v[i], key + "[" + std::to_string(i) + "]", out);
    }
  } else if (v.is_string()) {
    out[key] = v.get<std::string>();
  } else {
    out[key] = v.dump();
  }
}

std::string input_label(const GalaxyStep& step, const json& raw) {
  if (!step.label.empty()) return step.label;
  if (auto it = raw.find("inputs"); it != raw.end() && it->is_array() &&
                                    !it->empty()) {
    const json& first = (*it)[0];
    if (auto n = first.find("name"); n != first.end() && n->is_string() &&
                                     !n->get<std::string>().empty()) {
      return n->get<std::string>();
    }
  }
  json state = decode_nested(step.tool_state);
  if (state.is_object()) {
    if (auto n = state.find("name"); n != state.end() && n->is_string() &&
                                     !n->get<std::string>().empty()) {
      return n->get<std::string>();
    }
  }
  return "input_" + std::to_string(step.id);
}

void collect_sources(const json& conn, std::vector<long>& out,
                     const std::string& where) {
  if (conn.is_array()) {
    for (const auto& c : conn) collect_sources(c, out, where);
    return;
  }
  if (!conn.is_object() || !conn.contains("id") ||
      !conn["id"].is_number_integer()) {
    throw ValidationError(where + ": malformed input connection");
  }
  out.push_back(conn["id"].get<long>());
}

}  // namespace

WorkflowTrace import_galaxy_json(const json& doc, const std::string& fallback_id) {
  if (!doc.is_object() || !doc.contains("steps")) {
    throw ParseError(fallback_id, "steps", "missing step list");
  }
  const json& steps_json = doc["steps"];
  std::vector<std::pair<long, const json*>> raw_steps;
  if (steps_json.is_object()) {
    for (const auto& item : steps_json.items()) {
      long idx = 0;
      try {
        idx = std::stol(item.key());
      } catch (const std::exception&) {
        throw ParseError(fallback_id, "steps." + item.key(),
                         "step key is not an integer");
      }
      raw_steps.emplace_back(idx, &item.value());
    }
  } else if (steps_json.is_array()) {
    for (std::size_t i = 0; i < steps_json.size(); ++i) {
      raw_steps.emplace_back(static_cast<long>(i), &steps_json[i]);
    }
  } else {
    throw ParseError(fallback_id, "steps", "expected object or array");
  }

  std::map<long, GalaxyStep> steps;
  std::map<long, const json*> raw_by_id;
  for (const auto& [idx, raw] : raw_steps) {
    const std::string where = fallback_id + ": step " + std::to_string(idx);
    if (!raw->is_object()) throw ValidationError(where + ": expected object");
    GalaxyStep step;
    step.id = idx;
    if (auto it = raw->find("id"); it != raw->end() && it->is_number_integer()) {
      step.id = it->get<long>();
    }
    step.type = raw->value("type", std::string("tool"));
    if (auto it = raw->find("tool_id"); it != raw->end() && it->is_string()) {
      step.tool_id = it->get<std::string>();
    }
    if (auto it = raw->find("label"); it != raw->end() && it->is_string()) {
      step.label = it->get<std::string>();
    }
    if (auto it = raw->find("tool_state"); it != raw->end()) {
      step.tool_state = *it;
    }
    if (auto it = raw->find("input_connections");
        it != raw->end() && it->is_object()) {
      for (const auto& conn : it->items()) {
        collect_sources(conn.value(), step.sources, where);
      }
    }
    if (step.type == "subworkflow") {
      throw ValidationError(where + ": subworkflows are not supported");
    }
    if (!is_input_type(step.type) && step.tool_id.empty()) {
      throw ValidationError(where + ": tool step without tool_id");
    }
    const long step_id = step.id;
    if (!steps.emplace(step_id, std::move(step)).second) {
      throw ValidationError(where + ": duplicate step id");
    }
    raw_by_id[step_id] = raw;
  }

  std::vector<std::string> inputs;
  std::map<long, std::set<long>> tool_preds;
  std::map<long, std::set<long>> tool_succs;
  for (const auto& [id, step] : steps) {
    if (is_input_type(step.type)) {
      inputs.push_back(input_label(step, *raw_by_id.at(id)));
      continue;
    }
    tool_preds[id];
    tool_succs[id];
  }
  for (const auto& [id, step] : steps) {
    if (is_input_type(step.type)) continue;
    for (long src : step.sources) {
      auto it = steps.find(src);
      if (it == steps.end()) {
        throw ValidationError(fallback_id + ": step " + std::to_string(id) +
                              " connects to unknown step " + std::to_string(src));
      }
      if (is_input_type(it->second.type)) continue;
      tool_preds[id].insert(src);
      tool_succs[src].insert(id);
    }
  }
  if (tool_preds.empty()) {
    throw ValidationError(fallback_id + ": workflow has no tool steps");
  }
  if (inputs.empty()) {
    throw ValidationError(fallback_id + ": workflow has no input steps");
  }

  std::vector<long> sinks;
  for (const auto& [id, succ] : tool_succs) {
    if (succ.empty()) sinks.push_back(id);
  }

  // Kahn's algorithm; the smallest ready step index goes first.
  std::map<long, std::size_t> indegree;
  std::priority_queue<long, std::vector<long>, std::greater<>> ready;
  for (const auto& [id, preds] : tool_preds) {
    indegree[id] = preds.size();
    if (preds.empty()) ready.push(id);
  }
  std::vector<long> order;
  while (!ready.empty()) {
    long id = ready.top();
    ready.pop();
    order.push_back(id);
    for (long next : tool_succs[id]) {
      if (--indegree[next] == 0) ready.push(next);
    }
  }
  if (order.size() != tool_preds.size()) {
    throw ValidationError(fallback_id +
                          ": input connections contain a cycle");
  }
  if (sinks.size() > 1) {
    std::string list;
    for (long s : sinks) list += (list.empty() ? "" : ", ") + std::to_string(s);
    throw ValidationError(
        fallback_id + ": workflow branches into several final outputs (steps " +
        list + "); only pipelines with a single final step can be linearized");
  }

  std::sort(inputs.begin(), inputs.end());
  WorkflowTrace trace;
  trace.workflow_id = fallback_id;
  if (auto it = doc.find("name"); it != doc.end() && it->is_string() &&
                                  !it->get<std::string>().empty()) {
    trace.workflow_id = it->get<std::string>();
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    trace.dataset.value += (i ? "+" : "") + inputs[i];
  }
  for (long id : order) {
    const GalaxyStep& step = steps.at(id);
    ModuleInvocation inv;
    inv.module_id = step.tool_id;
    if (!step.tool_state.is_null()) flatten(step.tool_state, "", inv.config);
    trace.modules.push_back(std::move(inv));
  }
  validate(trace);
  return trace;
}

WorkflowTrace import_galaxy_subset(const std::filesystem::path& file) {
  return import_galaxy_json(read_json_file(file), file.stem().string());
}

}  // namespace pipecache
