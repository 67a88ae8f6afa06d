#include "padic/io.hpp"

#include <ostream>

#include "padic/errors.hpp"

namespace padic::io {

json to_json(const Scalar& s) { return json{{"mode", to_string(s.mode())}, {"value", s.str()}}; }

Scalar scalar_from_json(const json& j, Mode mode) {
  if (j.is_object()) {
    const Mode m = parse_mode(j.at("mode").get<std::string>());
    if (m != mode) throw ModeError("scalar tagged " + to_string(m) + " in a " + to_string(mode) + " run");
    return Scalar::parse(j.at("value").get<std::string>(), mode);
  }
  if (j.is_string()) return Scalar::parse(j.get<std::string>(), mode);
  if (j.is_number_integer()) return Scalar::integer(j.get<long>(), mode);
  if (j.is_number()) {
    if (mode == Mode::exact) throw ModeError("bare float literal in exact mode; quote it as a string");
    return Scalar(j.get<double>());
  }
  throw ParameterError("expected a scalar, got " + j.dump());
}

json to_json(const PadicPoint& x) {
  json m = json::array();
  for (const auto& v : x.mantissas()) m.push_back(v.get_str());
  return json{{"p", x.p()}, {"d", x.dimension()}, {"K", x.scale()}, {"M", x.precision()}, {"mantissas", m}};
}

PadicPoint point_from_json(const json& j) {
  std::vector<BigInt> m;
  for (const auto& v : j.at("mantissas")) m.emplace_back(v.get<std::string>());
  if (static_cast<int>(m.size()) != j.at("d").get<int>()) throw ParameterError("mantissa count differs from d");
  return PadicPoint(j.at("p").get<long>(), j.at("K").get<int>(), j.at("M").get<int>(), std::move(m));
}

json to_json(const std::vector<PadicPoint>& points) {
  json a = json::array();
  for (const auto& x : points) a.push_back(to_json(x));
  return a;
}

json to_json(const CellGrid& grid, std::uint64_t index) {
  return json{{"p", grid.p()},
              {"d", grid.dimension()},
              {"L", grid.outer_scale()},
              {"l", grid.depth()},
              {"center_mantissas", grid.center_mantissas(index)}};
}

json to_json(const CellDensity& mu) {
  json v = json::array();
  for (const auto& s : mu.values()) v.push_back(s.str());
  const CellGrid& g = mu.grid();
  return json{{"p", g.p()},   {"d", g.dimension()},          {"L", g.outer_scale()},
              {"l", g.depth()}, {"mode", to_string(mu.mode())}, {"values", v}};
}

CellDensity density_from_json(const json& j, Mode mode) {
  const CellGrid grid(j.at("p").get<long>(), j.at("d").get<int>(), j.value("L", 0), j.at("l").get<int>());
  if (j.contains("constant")) return CellDensity::constant(grid, scalar_from_json(j.at("constant"), mode));
  std::vector<Scalar> v;
  for (const auto& x : j.at("values")) v.push_back(scalar_from_json(x, mode));
  return CellDensity(grid, std::move(v));
}

Potential potential_from_json(const json& j, long p, int d, Mode mode) {
  const std::string kind = j.value("kind", "confined");
  if (kind == "confined")
    return Potential::confined(p, d, j.value("L", 0), scalar_from_json(j.value("V0", json("1")), mode));
  const Scalar outside = scalar_from_json(j.value("outside", json("inf")), mode);
  if (kind == "radial") {
    std::map<int, Scalar> t;
    for (const auto& [k, v] : j.at("thresholds").items()) t.emplace(std::stoi(k), scalar_from_json(v, mode));
    return Potential::radial_step(p, d, std::move(t), outside);
  }
  if (kind == "table") return Potential::cell_table(density_from_json(j.at("density"), mode), outside);
  throw ParameterError("unknown potential kind '" + kind + "'");
}

json to_json(const SpinGlassInstance& inst) {
  json rho = json::array();
  json v0 = json::array();
  for (const auto& s : inst.rho) rho.push_back(s.str());
  for (const auto& s : inst.v0) v0.push_back(s.str());
  return json{{"L", inst.L}, {"l", inst.l}, {"rho", rho}, {"v0", v0}};
}

SpinGlassInstance instance_from_json(const json& j, Mode mode) {
  SpinGlassInstance inst;
  inst.L = j.at("L").get<int>();
  inst.l = j.at("l").get<int>();
  for (const auto& x : j.at("rho")) inst.rho.push_back(scalar_from_json(x, mode));
  for (const auto& x : j.at("v0")) inst.v0.push_back(scalar_from_json(x, mode));
  return inst;
}

json to_json(const FrostmanReport& r) {
  auto opt = [](const std::optional<Scalar>& s) { return s ? to_json(*s) : json(nullptr); };
  json viol = json::array();
  for (const auto& v : r.violations)
    viol.push_back(json{{"point", to_json(v.point)}, {"on_support", v.on_support}, {"deficit", to_json(v.deficit)}});
  return json{{"constant", to_json(r.constant)},
              {"support_min", opt(r.support_min)},
              {"support_max", opt(r.support_max)},
              {"off_support_min", opt(r.off_support_min)},
              {"tolerance", to_json(r.tolerance)},
              {"violations", viol},
              {"passed", r.passed}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_row(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
  os << '\n';
}

}  // namespace

void write_csv(std::ostream& os, const CsvTable& table) {
  write_row(os, table.header);
  for (const auto& r : table.rows) write_row(os, r);
}

}  // namespace padic::io
