#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "padic/measures.hpp"
#include "padic/minimizer.hpp"
#include "padic/padic_core.hpp"
#include "padic/scalar.hpp"
#include "padic/spinglass.hpp"

namespace padic::io {

using json = nlohmann::ordered_json;

// {"mode": "exact" | "float", "value": "3/2" | "1.5" | "inf"}
json to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, Mode mode);

// {p, d, K, M, mantissas: [decimal strings]}
json to_json(const PadicPoint& x);
PadicPoint point_from_json(const json& j);
json to_json(const std::vector<PadicPoint>& points);

// {p, d, L, l, center_mantissas}
json to_json(const CellGrid& grid, std::uint64_t index);

// {p, d, L, l, mode, values}; a missing "values" with "constant" fills every cell.
json to_json(const CellDensity& mu);
CellDensity density_from_json(const json& j, Mode mode);

// {"kind": "confined", "L", "V0"} | {"kind": "radial", "thresholds": {"k": v}, "outside"}
// | {"kind": "table", "density": {...}, "outside"}
Potential potential_from_json(const json& j, long p, int d, Mode mode);

// {L, l, rho: [...], v0: [...]} in cell-index order.
json to_json(const SpinGlassInstance& inst);
SpinGlassInstance instance_from_json(const json& j, Mode mode);

json to_json(const FrostmanReport& r);

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const CsvTable& table);

}  // namespace padic::io
