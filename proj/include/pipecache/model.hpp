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

#ifndef PIPECACHE_MODEL_HPP
#define PIPECACHE_MODEL_HPP

// Domain types: datasets, module invocations, linear workflow traces and the
// identity of an intermediate result (dataset + module prefix).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pipecache {

struct DatasetId {
  std::string value;

  friend auto operator<=>(const DatasetId&, const DatasetId&) = default;
};

/// Parameter name -> value. std::map keeps iteration canonical (sorted), so
/// equality is order-insensitive with respect to how the set was built.
using ConfigSet = std::map<std::string, std::string>;

/// 64-bit fingerprint of a ConfigSet. FNV-1a over the pairs in key order,
/// each serialized as "<len>:<key><len>:<value>".
using ConfigFingerprint = std::uint64_t;

ConfigFingerprint fingerprint(const ConfigSet& config);

/// Lowercase 16-digit hex form used in files.
std::string fingerprint_hex(ConfigFingerprint fp);
ConfigFingerprint parse_fingerprint_hex(const std::string& hex);

struct ModuleInvocation {
  std::string module_id;
  ConfigSet config;
  double exec_time_s = 0.0;
  double store_time_s = 0.0;
  double load_time_s = 0.0;
  std::optional<std::uint64_t> output_size_bytes;  // carried, never consumed

  friend bool operator==(const ModuleInvocation&,
                         const ModuleInvocation&) = default;
};

struct WorkflowTrace {
  std::string workflow_id;
  DatasetId dataset;
  std::vector<ModuleInvocation> modules;  // execution order

  std::size_t length() const { return modules.size(); }

  friend bool operator==(const WorkflowTrace&, const WorkflowTrace&) = default;
};

/// Throws ValidationError if the trace breaks an invariant (empty ids, no
/// modules, negative or non-finite times).
void validate(const WorkflowTrace& trace);

/// Whether rule/state identity includes per-module config fingerprints.
enum class KeyMode { kBase, kAdaptive };

inline bool is_adaptive(KeyMode mode) { return mode == KeyMode::kAdaptive; }
inline KeyMode key_mode(bool adaptive) {
  return adaptive ? KeyMode::kAdaptive : KeyMode::kBase;
}

/// One position of a module prefix.
struct StepKey {
  std::string module_id;
  std::optional<ConfigFingerprint> config;

  friend auto operator<=>(const StepKey&, const StepKey&) = default;
};

StepKey step_key_of(const ModuleInvocation& module, KeyMode mode);

struct StateKey {
  DatasetId dataset;
  std::vector<StepKey> prefix;

  std::size_t length() const { return prefix.size(); }
  KeyMode mode() const;

  friend auto operator<=>(const StateKey&, const StateKey&) = default;
};

/// True when `prefix` is a (not necessarily proper) prefix of `key` on the
/// same dataset.
bool is_prefix_of(const StateKey& prefix, const StateKey& key);

/// Human-readable form, e.g. "(D1, [M1, M2])"; adaptive keys append
/// "@<fingerprint>" to each module.
std::string to_string(const StateKey& key);

/// Key of the result produced after the first `prefix_len` modules of `trace`.
/// Throws ContractError unless 1 <= prefix_len <= trace.length().
StateKey state_key_of(const WorkflowTrace& trace, std::size_t prefix_len,
                      KeyMode mode);

struct StoredState {
  StateKey key;
  std::size_t stored_at_pipeline = 1;  // 1-based ordinal in the replay
  double load_time_s = 0.0;
  double cumulative_exec_time_s = 0.0;
  double store_time_s = 0.0;

  friend bool operator==(const StoredState&, const StoredState&) = default;
};

/// Builds the record for storing the result after `prefix_len` modules.
StoredState stored_state_of(const WorkflowTrace& trace, std::size_t prefix_len,
                            KeyMode mode, std::size_t pipeline_ordinal);

}  // namespace pipecache

#endif  // PIPECACHE_MODEL_HPP
