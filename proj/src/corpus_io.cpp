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

#include "pipecache/corpus_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "pipecache/errors.hpp"

namespace pipecache {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_fields(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& source, const std::string& where,
                  const ParseOptions& options) {
  if (options.lenient) return;
  for (const auto& item : obj.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* a) { return item.key() == a; });
    if (!known) {
      throw ParseError(source, where + item.key(), "unknown field");
    }
  }
}

const json& require(const json& obj, const char* name,
                    const std::string& source, const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ParseError(source, where + name, "missing");
  }
  return *it;
}

std::string require_string(const json& obj, const char* name,
                           const std::string& source,
                           const std::string& where) {
  const json& v = require(obj, name, source, where);
  if (!v.is_string()) throw ParseError(source, where + name, "expected string");
  return v.get<std::string>();
}

double read_time(const json& obj, const char* name, const std::string& source,
                 const std::string& where) {
  const json& v = require(obj, name, source, where);
  if (!v.is_number()) throw ParseError(source, where + name, "expected number");
  double t = v.get<double>();
  if (!(t >= 0.0)) {
    throw ParseError(source, where + name,
                     "must be >= 0 (got " + v.dump() + ")");
  }
  return t;
}

}  // namespace

void validate(const Corpus& corpus) {
  std::set<std::string> ids;
  for (const auto& trace : corpus.traces) {
    validate(trace);
    if (!ids.insert(trace.workflow_id).second) {
      throw ValidationError("duplicate workflow_id '" + trace.workflow_id +
                            "'");
    }
  }
}

TraceRecord trace_from_json(const json& doc, const std::string& source,
                            const ParseOptions& options) {
  if (!doc.is_object()) throw ParseError(source, "<root>", "expected object");
  check_fields(doc, {"workflow_id", "index", "dataset", "modules"}, source, "",
               options);

  TraceRecord rec;
  rec.trace.workflow_id = require_string(doc, "workflow_id", source, "");
  if (auto it = doc.find("index"); it != doc.end()) {
    if (!it->is_number_integer()) {
      throw ParseError(source, "index", "expected integer");
    }
    rec.index = it->get<std::int64_t>();
  }

  const json& dataset = require(doc, "dataset", source, "");
  if (!dataset.is_object()) {
    throw ParseError(source, "dataset", "expected object");
  }
  check_fields(dataset, {"id"}, source, "dataset.", options);
  rec.trace.dataset.value = require_string(dataset, "id", source, "dataset.");

  const json& modules = require(doc, "modules", source, "");
  if (!modules.is_array()) {
    throw ParseError(source, "modules", "expected array");
  }
  if (modules.empty()) throw ParseError(source, "modules", "module list is empty");
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const json& m = modules[i];
    const std::string where = "modules[" + std::to_string(i) + "].";
    if (!m.is_object()) {
      throw ParseError(source, where.substr(0, where.size() - 1),
                       "expected object");
    }
    check_fields(m,
                 {"module_id", "config", "exec_time_s", "store_time_s",
                  "load_time_s", "output_size_bytes"},
                 source, where, options);
    ModuleInvocation inv;
    inv.module_id = require_string(m, "module_id", source, where);
    if (auto it = m.find("config"); it != m.end()) {
      if (!it->is_object()) throw ParseError(source, where + "config", "expected object");
      for (const auto& kv : it->items()) {
        if (!kv.value().is_string()) {
          throw ParseError(source, where + "config." + kv.key(),
                           "expected string value");
        }
        inv.config.emplace(kv.key(), kv.value().get<std::string>());
      }
    }
    inv.exec_time_s = read_time(m, "exec_time_s", source, where);
    inv.store_time_s = read_time(m, "store_time_s", source, where);
    inv.load_time_s = read_time(m, "load_time_s", source, where);
    if (auto it = m.find("output_size_bytes"); it != m.end()) {
      if (!it->is_number_unsigned()) {
        throw ParseError(source, where + "output_size_bytes",
                         "expected non-negative integer");
      }
      inv.output_size_bytes = it->get<std::uint64_t>();
    }
    rec.trace.modules.push_back(std::move(inv));
  }

  try {
    validate(rec.trace);
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return rec;
}

json trace_to_json(const WorkflowTrace& trace, std::optional<std::int64_t> index) {
  json doc;
  doc["workflow_id"] = trace.workflow_id;
  if (index) doc["index"] = *index;
  doc["dataset"] = {{"id", trace.dataset.value}};
  json modules = json::array();
  for (const auto& m : trace.modules) {
    json jm;
    jm["module_id"] = m.module_id;
    jm["config"] = json::object();
    for (const auto& [k, v] : m.config) jm["config"][k] = v;
    jm["exec_time_s"] = m.exec_time_s;
    jm["store_time_s"] = m.store_time_s;
    jm["load_time_s"] = m.load_time_s;
    if (m.output_size_bytes) jm["output_size_bytes"] = *m.output_size_bytes;
    modules.push_back(std::move(jm));
  }
  doc["modules"] = std::move(modules);
  return doc;
}

json read_json_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(file.string(), "<document>", e.what());
  }
}

void write_json_file(const fs::path& file, const json& doc) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  out << doc.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("write failed for '" + file.string() + "'");
}

TraceRecord load_trace_file(const fs::path& file, const ParseOptions& options) {
  return trace_from_json(read_json_file(file), file.string(), options);
}

Corpus load_corpus(const fs::path& path, const ParseOptions& options) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw ValidationError("path '" + path.string() + "' does not exist");
  }

  std::vector<fs::path> files;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
      return a.filename().string() < b.filename().string();
    });
  } else {
    files.push_back(path);
  }
  if (files.empty()) {
    throw ValidationError("no traces found in '" + path.string() + "'");
  }

  struct Entry {
    TraceRecord rec;
    std::string name;
  };
  std::vector<Entry> entries;
  entries.reserve(files.size());
  std::set<std::int64_t> seen_index;
  for (const auto& f : files) {
    Entry e{load_trace_file(f, options), f.filename().string()};
    if (e.rec.index && !seen_index.insert(*e.rec.index).second) {
      throw ValidationError(f.string() + ": duplicate index " +
                            std::to_string(*e.rec.index));
    }
    entries.push_back(std::move(e));
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    auto key = [](const Entry& e) {
      return std::make_tuple(!e.rec.index.has_value(), e.rec.index.value_or(0),
                             std::cref(e.name));
    };
    return key(a) < key(b);
  });

  Corpus corpus;
  corpus.traces.reserve(entries.size());
  for (auto& e : entries) corpus.traces.push_back(std::move(e.rec.trace));
  validate(corpus);
  return corpus;
}

void save_corpus(const Corpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create directory '" + dir.string() + "'" +
                  (ec ? ": " + ec.message() : std::string()));
  }
  for (std::size_t i = 0; i < corpus.traces.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "trace_%06zu.json", i);
    write_json_file(dir / name,
                    trace_to_json(corpus.traces[i], static_cast<std::int64_t>(i)));
  }
}

}  // namespace pipecache
