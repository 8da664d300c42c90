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

#include <cstdio>
#include <sstream>

#include "pipecache/replay.hpp"

namespace pipecache {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json ratio_json(const Ratio& r) {
  return {{"value", r.value}, {"undefined", r.undefined}};
}

}  // namespace

json report_to_json(const ReplayReport& r) {
  json doc;
  doc["strategy"] = r.strategy;
  doc["total_pipelines"] = r.total_pipelines;
  doc["reuse_pipelines"] = r.reuse_pipelines;
  doc["stored_count"] = r.stored_count;
  doc["reused_distinct"] = r.reused_distinct;
  doc["reuse_events"] = r.reuse_events;
  doc["total_intermediate_states"] = r.total_intermediate_states;
  doc["skipped_modules"] = r.skipped_modules;
  doc["unique_dataset_full_stores"] = r.unique_dataset_full_stores;
  doc["lr_pct"] = ratio_json(r.lr_pct);
  doc["psrr_pct"] = ratio_json(r.psrr_pct);
  doc["frsr"] = ratio_json(r.frsr);
  doc["pisrs_pct"] = ratio_json(r.pisrs_pct);
  doc["time_without_reuse_s"] = r.time_without_reuse_s;
  doc["time_with_reuse_s"] = r.time_with_reuse_s;
  doc["total_gain_s"] = r.total_gain_s;
  doc["per_pipeline_gain_s"] = r.per_pipeline_gain_s;
  return doc;
}

json reports_to_json(const std::vector<ReplayReport>& reports) {
  json rows = json::array();
  for (const auto& r : reports) rows.push_back(report_to_json(r));
  return {{"reports", std::move(rows)}};
}

std::string reports_to_csv(const std::vector<ReplayReport>& reports) {
  std::ostringstream out;
  out << "name,total,reuse_pipelines,stored,reused_distinct,reuse_events,"
         "lr,psrr,frsr,pisrs,time_without,time_with,gain\n";
  for (const auto& r : reports) {
    out << r.strategy << ',' << r.total_pipelines << ',' << r.reuse_pipelines
        << ',' << r.stored_count << ',' << r.reused_distinct << ','
        << r.reuse_events << ',' << fixed(r.lr_pct.value) << ','
        << fixed(r.psrr_pct.value) << ',' << fixed(r.frsr.value) << ','
        << fixed(r.pisrs_pct.value) << ',' << fixed(r.time_without_reuse_s, 3)
        << ',' << fixed(r.time_with_reuse_s, 3) << ','
        << fixed(r.total_gain_s, 3) << '\n';
  }
  return out.str();
}

std::string reports_to_table(const std::vector<ReplayReport>& reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-14s %8s %8s %8s %8s %9s %9s %9s %9s %14s\n",
                "strategy", "total", "reuse", "stored", "reused", "LR%", "PSRR%",
                "FRSR", "PISRS%", "gain_s");
  out << line;
  for (const auto& r : reports) {
    auto show = [](const Ratio& q, int digits) {
      return q.undefined ? std::string("n/a") : fixed(q.value, digits);
    };
    std::snprintf(line, sizeof line,
                  "%-14s %8llu %8llu %8llu %8llu %9s %9s %9s %9s %14s\n",
                  r.strategy.c_str(),
                  static_cast<unsigned long long>(r.total_pipelines),
                  static_cast<unsigned long long>(r.reuse_pipelines),
                  static_cast<unsigned long long>(r.stored_count),
                  static_cast<unsigned long long>(r.reused_distinct),
                  show(r.lr_pct, 2).c_str(), show(r.psrr_pct, 2).c_str(),
                  show(r.frsr, 4).c_str(), show(r.pisrs_pct, 3).c_str(),
                  fixed(r.total_gain_s, 1).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace pipecache
