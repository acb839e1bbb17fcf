#pragma once

#include <string>
#include <vector>

#include "disloc/decomposition.hpp"
#include "disloc/grid_function.hpp"

namespace disloc {

/// Self-describing JSON payloads (schema "disloc.grid.v1" etc.).  Doubles are
/// emitted with shortest round-trip formatting, so identical values give
/// identical bytes.
std::string grid_to_json(const GridFunction& u);
GridFunction grid_from_json(const std::string& text);

std::string dislocation_to_json(const Dislocation& g);
std::string decomposition_to_json(const DecompositionResult& res);

/// CSV of a 1D function (x,value) or of a 2D axis-aligned slice.
std::string grid_to_csv(const GridFunction& u);

/// Column-oriented CSV with headers.
std::string csv_table(const std::vector<std::string>& headers,
                      const std::vector<std::vector<double>>& columns);

void write_text_file(const std::string& path, const std::string& content);

} // namespace disloc
