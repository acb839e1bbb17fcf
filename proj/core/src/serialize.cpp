#include "disloc/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace disloc {

using json = nlohmann::ordered_json;

namespace {

json grid_json(const GridFunction& u) {
  json j;
  j["format"] = "disloc.grid.v1";
  j["N"] = u.dim();
  j["h0"] = u.h0();
  j["level"] = u.level();
  j["offset"] = u.offset();
  j["shape"] = u.shape();
  j["samples"] = u.samples();
  return j;
}

json dislocation_json(const Dislocation& g) {
  json j;
  j["j"] = g.dilation;
  j["y"] = g.shift_num;
  if (g.shift_scale != 0) j["y_scale"] = g.shift_scale;
  return j;
}

} // namespace

std::string grid_to_json(const GridFunction& u) { return grid_json(u).dump(); }

GridFunction grid_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != std::string("disloc.grid.v1"))
    throw std::invalid_argument("grid_from_json: unrecognized payload format");
  return GridFunction(j.at("N").get<int>(),
                      j.at("offset").get<IndexVec>(),
                      j.at("shape").get<IndexVec>(), j.at("level").get<int>(),
                      j.at("h0").get<double>(),
                      j.at("samples").get<std::vector<double>>());
}

std::string dislocation_to_json(const Dislocation& g) {
  return dislocation_json(g).dump();
}

std::string decomposition_to_json(const DecompositionResult& res) {
  json j;
  j["format"] = "disloc.decomposition.v1";
  j["k0"] = res.k0;
  j["h0"] = res.h0;
  j["profile_count"] = res.profile_count();
  j["truncated"] = res.truncated;
  j["round_failure"] = res.round_failure;
  if (!res.failure_note.empty()) j["failure_note"] = res.failure_note;
  j["energy_sup_tail"] = res.energy_sup_tail;
  j["profile_energies"] = res.profile_energies;

  json profiles = json::array();
  for (const auto& w : res.profiles) profiles.push_back(grid_json(w));
  j["profiles"] = profiles;

  json tables = json::array();
  for (const auto& ds : res.dislocations) {
    json table = json::array();
    for (const auto& g : ds.elems) table.push_back(dislocation_json(g));
    tables.push_back(table);
  }
  j["dislocations"] = tables;

  json rounds = json::array();
  for (const auto& r : res.rounds) {
    json jr;
    jr["round"] = r.round;
    jr["defect_before"] = r.defect_before;
    jr["defect_trace"] = r.defect_trace;
    jr["t_estimate"] = r.t_estimate;
    jr["accepted_energy"] = r.accepted_energy;
    jr["half_rule_ok"] = r.half_rule_ok;
    jr["accepted"] = r.accepted;
    jr["note"] = r.note;
    rounds.push_back(jr);
  }
  j["rounds"] = rounds;
  return j.dump(2);
}

std::string grid_to_csv(const GridFunction& u) {
  std::ostringstream os;
  os.precision(17);
  const double h = u.spacing();
  if (u.dim() == 1) {
    os << "x,value\n";
    for (std::size_t flat = 0; flat < u.size(); ++flat)
      os << static_cast<double>(u.node_index(flat)[0]) * h << ","
         << u.local(flat) << "\n";
    return os.str();
  }
  if (u.dim() == 2) {
    os << "x1,x2,value\n";
    for (std::size_t flat = 0; flat < u.size(); ++flat) {
      const IndexVec g = u.node_index(flat);
      os << static_cast<double>(g[0]) * h << ","
         << static_cast<double>(g[1]) * h << "," << u.local(flat) << "\n";
    }
    return os.str();
  }
  throw std::invalid_argument("grid_to_csv: 1D and 2D only");
}

std::string csv_table(const std::vector<std::string>& headers,
                      const std::vector<std::vector<double>>& columns) {
  if (headers.size() != columns.size())
    throw std::invalid_argument("csv_table: header/column count mismatch");
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < headers.size(); ++i)
    os << (i ? "," : "") << headers[i];
  os << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ",";
      if (r < columns[c].size()) os << columns[c][r];
    }
    os << "\n";
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

} // namespace disloc
