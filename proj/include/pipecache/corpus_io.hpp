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

#ifndef PIPECACHE_CORPUS_IO_HPP
#define PIPECACHE_CORPUS_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pipecache/model.hpp"

namespace pipecache {

/// Chronological execution history.
struct Corpus {
  std::vector<WorkflowTrace> traces;

  std::size_t size() const { return traces.size(); }
  bool empty() const { return traces.empty(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Validates every trace and workflow_id uniqueness.
void validate(const Corpus& corpus);

struct ParseOptions {
  bool lenient = false;  // ignore unknown fields instead of rejecting them
};

/// A canonical trace file decoded, with its optional ordering index.
struct TraceRecord {
  WorkflowTrace trace;
  std::optional<std::int64_t> index;
};

/// `source` is used in error messages only.
TraceRecord trace_from_json(const nlohmann::json& doc, const std::string& source,
                            const ParseOptions& options = {});
nlohmann::json trace_to_json(const WorkflowTrace& trace,
                             std::optional<std::int64_t> index = std::nullopt);

TraceRecord load_trace_file(const std::filesystem::path& file,
                            const ParseOptions& options = {});

/// Loads a directory of canonical trace files (or a single file). Files with
/// an "index" field come first in index order, the rest follow in filename
/// order.
Corpus load_corpus(const std::filesystem::path& path,
                   const ParseOptions& options = {});

/// Writes one file per trace (trace_000000.json, ...) with an explicit index,
/// creating the directory if needed.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

/// Best-effort import of a Galaxy workflow definition (.ga). Input steps
/// collapse into the dataset id; tool steps are linearized by their input
/// connections. Timings are zero: workflow definitions carry none.
WorkflowTrace import_galaxy_subset(const std::filesystem::path& file);
WorkflowTrace import_galaxy_json(const nlohmann::json& doc,
                                 const std::string& fallback_id);

/// Serializes with 2-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& file,
                     const nlohmann::json& doc);
nlohmann::json read_json_file(const std::filesystem::path& file);

}  // namespace pipecache

#endif  // PIPECACHE_CORPUS_IO_HPP
