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

#ifndef PIPECACHE_TESTS_FIXTURES_HPP
#define PIPECACHE_TESTS_FIXTURES_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pipecache/corpus_io.hpp"
#include "pipecache/model.hpp"

namespace pipecache::testing {

/// Module "Mx" runs with config {"param": "Cx"} unless overridden by position.
inline WorkflowTrace make_trace(const std::string& id, const std::string& dataset,
                                const std::vector<std::string>& modules,
                                const std::map<std::size_t, std::string>& config_override = {}) {
  WorkflowTrace t;
  t.workflow_id = id;
  t.dataset.value = dataset;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    ModuleInvocation m;
    m.module_id = modules[i];
    auto it = config_override.find(i);
    m.config["param"] = it != config_override.end() ? it->second : "C" + modules[i].substr(1);
    t.modules.push_back(std::move(m));
  }
  return t;
}

/// Four-pipeline history shared by most tests.
inline Corpus worked_example() {
  return Corpus{{
      make_trace("W1", "D1", {"M1", "M2", "M3", "M4"}),
      make_trace("W2", "D2", {"M2", "M5", "M8"}),
      make_trace("W3", "D1", {"M1", "M2", "M3", "M6"}),
      make_trace("W4", "D1", {"M1", "M2", "M7", "M8"}),
  }};
}

/// Tool-state variant: W4 repeats M1, M2, M3 on D1 but runs M3 with C3'
/// (or with C3 when `c3_prime` is false).
inline Corpus adaptive_example(bool c3_prime) {
  Corpus c = worked_example();
  std::map<std::size_t, std::string> cfg;
  if (c3_prime) cfg[2] = "C3'";
  c.traces[3] = make_trace("W4", "D1", {"M1", "M2", "M3", "M8"}, cfg);
  return c;
}

inline std::filesystem::path data_dir() { return PIPECACHE_TEST_DATA_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pipecache_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pipecache::testing

#endif  // PIPECACHE_TESTS_FIXTURES_HPP
