// thicklab/io.hpp
//
// File formats: point clouds as JSON lines ({"id": ..., "coords":
// [[index, value], ...]}), distance matrices as CSV with a header row of
// ids, estimates as CSV + JSON summaries, and replayable JSON for block
// maps and sampled maps.  All numeric output is deterministic.

#pragma once

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "thicklab/dimension_fit.hpp"
#include "thicklab/embedding.hpp"
#include "thicklab/ensemble.hpp"
#include "thicklab/errors.hpp"
#include "thicklab/kuratowski.hpp"
#include "thicklab/point_cloud.hpp"
#include "thicklab/thickness.hpp"

namespace thicklab {

using nlohmann::json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- point clouds ---------------------------------------------------------

inline PointCloud read_jsonl_cloud(std::istream& in, Exponent p) {
  std::vector<LabeledPoint> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("coords")) {
      throw parse_error("line " + std::to_string(lineno) + ": expected {\"id\", \"coords\"}");
    }
    std::vector<Entry> entries;
    try {
      for (const auto& pair : obj.at("coords")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw parse_error("line " + std::to_string(lineno) + ": coords must be [index, value] pairs");
        }
        entries.push_back({pair.at(0).get<std::uint32_t>(), pair.at(1).get<double>()});
      }
      pts.push_back({obj.at("id").get<std::string>(),
                     SparseVector::from_entries(std::move(entries))});
    } catch (const json::exception& e) {
      throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (pts.empty()) throw parse_error("empty point cloud");
  return PointCloud(std::move(pts), p);
}

inline void write_jsonl_cloud(std::ostream& out, const PointCloud& X) {
  for (const auto& pt : X.points()) {
    json coords = json::array();
    for (const Entry& e : pt.x.entries()) coords.push_back({e.index, e.value});
    json obj;
    obj["id"] = pt.id;
    obj["coords"] = coords;
    out << obj.dump() << "\n";
  }
}

// ---- distance matrices ----------------------------------------------------

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

inline DistanceMatrix read_distance_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw parse_error("distance csv: missing header row");
  DistanceMatrix d;
  d.ids = split_csv_line(line);
  const std::size_t n = d.ids.size();
  if (n == 0) throw parse_error("distance csv: empty header");
  d.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw parse_error("distance csv: expected " + std::to_string(n) + " rows");
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != n) {
      throw parse_error("distance csv: row " + std::to_string(i + 1) + " has " +
                        std::to_string(cells.size()) + " cells, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      try {
        d.at(i, j) = std::stod(cells[j]);
      } catch (const std::exception&) {
        throw parse_error("distance csv: bad number '" + cells[j] + "' at row " +
                          std::to_string(i + 1));
      }
    }
  }
  return d;
}

// ---- estimates ------------------------------------------------------------

inline json to_json(const DimensionEstimate& est) {
  json j;
  j["slope"] = est.slope;
  j["bracket"] = {est.bracket.first, est.bracket.second};
  j["r_squared"] = est.r_squared;
  j["degenerate"] = est.degenerate;
  return j;
}

inline std::string estimate_csv(const DimensionEstimate& est) {
  std::string out = "epsilon,count,log_count,window_slope\n";
  for (std::size_t i = 0; i < est.counts.size(); ++i) {
    out += format_double(est.counts[i].first);
    out += ",";
    out += format_double(est.counts[i].second);
    out += ",";
    out += format_double(std::log(est.counts[i].second));
    out += ",";
    if (i > 0) out += format_double(est.window_slopes[i - 1].slope);
    out += "\n";
  }
  return out;
}

inline json to_json(const ThicknessBracket& br) {
  json j;
  j["epsilon"] = br.epsilon;
  j["lower"] = br.lower;
  j["upper"] = br.upper;
  j["lower_witness_ids"] = br.lower_witness_ids;
  j["upper_dim"] = br.upper_dim;
  return j;
}

inline json to_json(const ThicknessEstimate& est) {
  json j;
  j["lower_fit"] = to_json(est.lower_fit);
  j["upper_fit"] = to_json(est.upper_fit);
  json brackets = json::array();
  for (const auto& br : est.brackets) brackets.push_back(to_json(br));
  j["brackets"] = brackets;
  return j;
}

// ---- replayable maps ------------------------------------------------------

inline json sparse_to_json(const SparseVector& v) {
  json arr = json::array();
  for (const Entry& e : v.entries()) arr.push_back({e.index, e.value});
  return arr;
}

inline SparseVector sparse_from_json(const json& arr) {
  std::vector<Entry> entries;
  for (const auto& pair : arr) {
    entries.push_back({pair.at(0).get<std::uint32_t>(), pair.at(1).get<double>()});
  }
  return SparseVector::from_entries(std::move(entries));
}

inline json to_json(const BlockMap& map) {
  json j;
  j["tail_bound"] = map.tail_bound();
  j["output_dim"] = map.output_dim();
  json blocks = json::array();
  for (const auto& blk : map.blocks()) {
    json b;
    b["n"] = blk.level;
    b["weight"] = blk.weight;
    b["guaranteed_level"] = blk.guaranteed_level;
    json fs = json::array();
    for (const auto& f : blk.functionals) fs.push_back(sparse_to_json(f.vector()));
    b["functionals"] = fs;
    blocks.push_back(b);
  }
  j["blocks"] = blocks;
  return j;
}

inline BlockMap block_map_from_json(const json& j) {
  std::vector<FunctionalBlock> blocks;
  for (const auto& b : j.at("blocks")) {
    FunctionalBlock blk;
    blk.level = b.at("n").get<int>();
    blk.weight = b.at("weight").get<double>();
    blk.guaranteed_level = b.at("guaranteed_level").get<double>();
    for (const auto& fv : b.at("functionals")) {
      blk.functionals.push_back(Functional(sparse_from_json(fv)));
    }
    blocks.push_back(std::move(blk));
  }
  return BlockMap(std::move(blocks), j.at("tail_bound").get<double>());
}

inline json to_json(const SampledMap& map) {
  json j;
  j["k"] = map.k;
  j["seed"] = map.seed;
  json rows = json::array();
  for (std::size_t i = 0; i < map.rows.size(); ++i) {
    json r;
    r["realized"] = sparse_to_json(map.rows[i].vector());
    if (i < map.coeffs.size()) {
      json cs = json::array();
      for (const auto& c : map.coeffs[i]) {
        json one = json::array();
        for (Eigen::Index t = 0; t < c.size(); ++t) one.push_back(c[t]);
        cs.push_back(one);
      }
      r["coeffs"] = cs;
    }
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace thicklab
