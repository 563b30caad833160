/* Copyright 2026 The Perceval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "perceval/metrics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

namespace perceval::metrics {

namespace {

using nlohmann::ordered_json;

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "-"; }

// Left-aligned first column, right-aligned numeric columns.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream os;
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0) os << "  ";
        const std::size_t pad = width[i] - r[i].size();
        if (i == 0) {
          os << r[i] << std::string(pad, ' ');
        } else {
          os << std::string(pad, ' ') << r[i];
        }
      }
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

ordered_json warnings_json(const std::vector<std::string>& w) {
  ordered_json j = ordered_json::array();
  for (const auto& s : w) j.push_back(s);
  return j;
}

}  // namespace

ordered_json to_json(const DetectionMetrics& m) {
  ordered_json j;
  j["task"] = "detection";
  ordered_json means;
  means["mCDS"] = m.mean_cds;
  means["mAP"] = m.mean_ap;
  means["mATE"] = m.mean_ate;
  means["mASE"] = m.mean_ase;
  means["mAOE"] = m.mean_aoe;
  j["means"] = std::move(means);
  ordered_json per = ordered_json::object();
  for (const auto& [cat, c] : m.per_category) {
    ordered_json jc;
    jc["cds"] = c.cds;
    jc["ap"] = c.ap;
    jc["ate"] = c.ate;
    jc["ase"] = c.ase;
    jc["aoe"] = c.aoe;
    jc["ap_per_threshold"] = c.ap_per_threshold;
    jc["num_gt"] = c.num_gt;
    jc["num_pred"] = c.num_pred;
    jc["num_tp"] = c.num_tp;
    per[cat] = std::move(jc);
  }
  j["per_category"] = std::move(per);
  j["warnings"] = warnings_json(m.warnings);
  return j;
}

ordered_json to_json(const TrackingMetrics& m) {
  ordered_json j;
  j["task"] = "tracking";
  ordered_json means;
  means["HOTA"] = m.mean_hota;
  means["AMOTA"] = m.mean_amota;
  means["MOTA"] = m.mean_mota;
  means["DetA"] = m.mean_deta;
  means["AssA"] = m.mean_assa;
  j["means"] = std::move(means);
  ordered_json per = ordered_json::object();
  for (const auto& [cat, c] : m.per_category) {
    ordered_json jc;
    jc["hota"] = c.hota.hota;
    jc["amota"] = c.amota;
    jc["mota"] = c.mota;
    jc["deta"] = c.hota.deta;
    jc["assa"] = c.hota.assa;
    jc["num_gt"] = c.clear.num_gt;
    jc["tp"] = c.clear.tp;
    jc["fp"] = c.clear.fp;
    jc["fn"] = c.clear.fn;
    jc["idsw"] = c.clear.idsw;
    ordered_json alphas = ordered_json::array();
    for (const auto& h : c.hota.per_alpha) {
      ordered_json ja;
      ja["alpha"] = h.alpha;
      ja["hota"] = h.hota;
      ja["deta"] = h.deta;
      ja["assa"] = h.assa;
      alphas.push_back(std::move(ja));
    }
    jc["per_alpha"] = std::move(alphas);
    per[cat] = std::move(jc);
  }
  j["per_category"] = std::move(per);
  j["warnings"] = warnings_json(m.warnings);
  return j;
}

ordered_json to_json(const ForecastingMetrics& m) {
  ordered_json j;
  j["task"] = "forecasting";
  ordered_json means;
  means["mAP_F"] = m.mean_map_f;
  means["ADE"] = opt(m.mean_ade);
  means["FDE"] = opt(m.mean_fde);
  j["means"] = std::move(means);
  ordered_json per = ordered_json::object();
  for (const auto& [cat, cohorts] : m.cells) {
    ordered_json jc = ordered_json::object();
    for (const auto& [cohort, cell] : cohorts) {
      ordered_json x;
      x["map_f"] = cell.map_f;
      x["ade"] = opt(cell.ade);
      x["fde"] = opt(cell.fde);
      x["ap_per_threshold"] = cell.ap_per_threshold;
      x["num_gt"] = cell.num_gt;
      x["num_pred"] = cell.num_pred;
      x["num_matched"] = cell.num_matched;
      jc[std::string(cohort_name(cohort))] = std::move(x);
    }
    per[cat] = std::move(jc);
  }
  j["per_category"] = std::move(per);
  j["warnings"] = warnings_json(m.warnings);
  return j;
}

std::string format_table(const DetectionMetrics& m) {
  Table summary({"", "mCDS", "mAP", "mATE", "mASE", "mAOE"});
  summary.add({"all", fmt(m.mean_cds), fmt(m.mean_ap), fmt(m.mean_ate), fmt(m.mean_ase),
               fmt(m.mean_aoe)});
  Table per({"category", "CDS", "AP", "ATE", "ASE", "AOE", "GT", "TP"});
  for (const auto& [cat, c] : m.per_category) {
    per.add({cat, fmt(c.cds), fmt(c.ap), fmt(c.ate), fmt(c.ase), fmt(c.aoe),
             std::to_string(c.num_gt), std::to_string(c.num_tp)});
  }
  return summary.render() + "\n" + per.render();
}

std::string format_table(const TrackingMetrics& m) {
  Table summary({"", "HOTA", "AMOTA", "MOTA"});
  summary.add({"all", fmt(m.mean_hota), fmt(m.mean_amota), fmt(m.mean_mota)});
  Table per({"category", "HOTA", "AMOTA", "MOTA", "DetA", "AssA", "IDSW"});
  for (const auto& [cat, c] : m.per_category) {
    per.add({cat, fmt(c.hota.hota), fmt(c.amota), fmt(c.mota), fmt(c.hota.deta),
             fmt(c.hota.assa), std::to_string(c.clear.idsw)});
  }
  return summary.render() + "\n" + per.render();
}

std::string format_table(const ForecastingMetrics& m) {
  Table summary({"", "mAP_F", "ADE", "FDE"});
  summary.add({"all", fmt(m.mean_map_f), fmt(m.mean_ade), fmt(m.mean_fde)});
  Table per({"category", "cohort", "mAP_F", "ADE", "FDE", "GT"});
  for (const auto& [cat, cohorts] : m.cells) {
    for (const auto& [cohort, cell] : cohorts) {
      per.add({cat, std::string(cohort_name(cohort)), fmt(cell.map_f), fmt(cell.ade),
               fmt(cell.fde), std::to_string(cell.num_gt)});
    }
  }
  return summary.render() + "\n" + per.render();
}

}  // namespace perceval::metrics
