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

#include "pipecache/model.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "pipecache/errors.hpp"

namespace pipecache {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, const std::string& bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

void check_time(double t, const std::string& what, const WorkflowTrace& trace,
                std::size_t pos) {
  if (!std::isfinite(t) || t < 0.0) {
    std::ostringstream msg;
    msg << "workflow '" << trace.workflow_id << "' module " << pos << ": "
        << what << " must be finite and >= 0 (got " << t << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace

ConfigFingerprint fingerprint(const ConfigSet& config) {
  std::uint64_t h = kFnvOffset;
  for (const auto& [key, value] : config) {
    fnv_mix(h, std::to_string(key.size()) + ":" + key);
    fnv_mix(h, std::to_string(value.size()) + ":" + value);
  }
  return h;
}

std::string fingerprint_hex(ConfigFingerprint fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

ConfigFingerprint parse_fingerprint_hex(const std::string& hex) {
  if (hex.size() != 16 ||
      hex.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw ValidationError("invalid config fingerprint '" + hex +
                          "' (expected 16 lowercase hex digits)");
  }
  return std::stoull(hex, nullptr, 16);
}

void validate(const WorkflowTrace& trace) {
  if (trace.workflow_id.empty()) {
    throw ValidationError("workflow_id must be non-empty");
  }
  if (trace.dataset.value.empty()) {
    throw ValidationError("workflow '" + trace.workflow_id +
                          "': dataset id must be non-empty");
  }
  if (trace.modules.empty()) {
    throw ValidationError("workflow '" + trace.workflow_id +
                          "': module list is empty");
  }
  for (std::size_t i = 0; i < trace.modules.size(); ++i) {
    const auto& m = trace.modules[i];
    if (m.module_id.empty()) {
      throw ValidationError("workflow '" + trace.workflow_id + "' module " +
                            std::to_string(i) + ": module_id is empty");
    }
    check_time(m.exec_time_s, "exec_time_s", trace, i);
    check_time(m.store_time_s, "store_time_s", trace, i);
    check_time(m.load_time_s, "load_time_s", trace, i);
  }
}

StepKey step_key_of(const ModuleInvocation& module, KeyMode mode) {
  StepKey step{module.module_id, std::nullopt};
  if (is_adaptive(mode)) step.config = fingerprint(module.config);
  return step;
}

KeyMode StateKey::mode() const {
  return !prefix.empty() && prefix.front().config ? KeyMode::kAdaptive
                                                  : KeyMode::kBase;
}

bool is_prefix_of(const StateKey& prefix, const StateKey& key) {
  if (prefix.dataset != key.dataset || prefix.length() > key.length()) {
    return false;
  }
  for (std::size_t i = 0; i < prefix.length(); ++i) {
    if (prefix.prefix[i] != key.prefix[i]) return false;
  }
  return true;
}

std::string to_string(const StateKey& key) {
  std::string out = "(" + key.dataset.value + ", [";
  for (std::size_t i = 0; i < key.prefix.size(); ++i) {
    if (i) out += ", ";
    out += key.prefix[i].module_id;
    if (key.prefix[i].config) {
      out += "@" + fingerprint_hex(*key.prefix[i].config);
    }
  }
  return out + "])";
}

StateKey state_key_of(const WorkflowTrace& trace, std::size_t prefix_len,
                      KeyMode mode) {
  if (prefix_len < 1 || prefix_len > trace.length()) {
    throw ContractError("prefix length " + std::to_string(prefix_len) +
                        " out of range [1, " +
                        std::to_string(trace.length()) + "] for workflow '" +
                        trace.workflow_id + "'");
  }
  StateKey key{trace.dataset, {}};
  key.prefix.reserve(prefix_len);
  for (std::size_t i = 0; i < prefix_len; ++i) {
    key.prefix.push_back(step_key_of(trace.modules[i], mode));
  }
  return key;
}

StoredState stored_state_of(const WorkflowTrace& trace, std::size_t prefix_len,
                            KeyMode mode, std::size_t pipeline_ordinal) {
  StoredState state;
  state.key = state_key_of(trace, prefix_len, mode);
  state.stored_at_pipeline = pipeline_ordinal;
  const auto& last = trace.modules[prefix_len - 1];
  state.load_time_s = last.load_time_s;
  state.store_time_s = last.store_time_s;
  for (std::size_t i = 0; i < prefix_len; ++i) {
    state.cumulative_exec_time_s += trace.modules[i].exec_time_s;
  }
  return state;
}

}  // namespace pipecache
