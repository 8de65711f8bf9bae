#include <fstream>
#include <numeric>

#include "toeplitz/errors.hpp"
#include "toeplitz/tower.hpp"

namespace toeplitz {

TowerConfig line_config(const std::vector<std::int64_t>& indices, DomainStyle style) {
  TowerConfig c;
  c.kind = TowerKind::IntegerLine;
  c.dim = 1;
  for (auto q : indices) c.indices.push_back({q});
  c.style = style;
  return c;
}

TowerConfig lattice_config(const std::vector<std::vector<std::int64_t>>& indices, DomainStyle style) {
  TowerConfig c;
  c.kind = TowerKind::IntegerLattice;
  c.dim = indices.empty() ? 1 : indices.front().size();
  c.indices = indices;
  c.style = style;
  return c;
}

TowerConfig cyclic_table_config(const std::vector<std::int64_t>& indices) {
  std::int64_t order = 1;
  for (auto q : indices) order *= q;
  if (order > 4096) throw ConfigError("cyclic table too large");
  const int n = static_cast<int>(order);
  GroupTable t;
  t.mul.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t.mul[a][b] = (a + b) % n;
  std::int64_t modulus = 1;
  for (auto q : indices) {
    modulus *= q;
    GroupTable::Level lvl;
    lvl.coset.resize(n);
    for (int g = 0; g < n; ++g) lvl.coset[g] = static_cast<int>(g % modulus);
    for (int d = 0; d < modulus; ++d) lvl.domain.push_back(d);
    t.levels.push_back(std::move(lvl));
  }
  TowerConfig c;
  c.kind = TowerKind::Generic;
  c.table = std::move(t);
  return c;
}

namespace {

DomainStyle parse_style(const std::string& s) {
  if (s == "nonneg" || s == "nonnegative" || s == "non-negative") return DomainStyle::NonNegative;
  if (s == "centered" || s == "centred") return DomainStyle::Centered;
  throw ConfigError("unknown domain style '" + s + "' (expected nonneg or centered)");
}

TailSpec parse_tail(const nlohmann::json& j) {
  TailSpec t;
  if (j.is_null()) return t;
  const std::string kind = j.value("kind", "none");
  if (kind == "none") return t;
  if (kind == "repeat") {
    t.kind = TailSpec::Kind::Repeat;
    return t;
  }
  if (kind == "geometric") {
    t.kind = TailSpec::Kind::Geometric;
    if (!j.contains("ratio")) throw ConfigError("geometric tail needs a ratio");
    const auto& r = j["ratio"];
    t.ratio = r.is_string() ? parse_rational(r.get<std::string>()) : parse_rational(std::to_string(r.get<long>()));
    if (t.ratio <= 0 || t.ratio >= 1) throw ConfigError("geometric tail ratio must lie in (0,1)");
    return t;
  }
  throw ConfigError("unknown tail kind '" + kind + "'");
}

std::int64_t parse_index(const nlohmann::json& v) {
  if (!v.is_number_integer()) throw ConfigError("indices must be integers");
  return v.get<std::int64_t>();
}

}  // namespace

TowerConfig parse_tower_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("tower config must be a JSON object");
  TowerConfig c;
  const std::string kind = j.value("kind", "z");
  c.name = j.value("name", "");
  c.tail = parse_tail(j.value("tail", nlohmann::json()));
  c.style = parse_style(j.value("domain", "nonneg"));
  try {
    if (kind == "z") {
      c.kind = TowerKind::IntegerLine;
      c.dim = 1;
      if (!j.contains("indices") || !j["indices"].is_array()) throw ConfigError("z tower needs an indices array");
      for (const auto& v : j["indices"]) c.indices.push_back({parse_index(v)});
    } else if (kind == "zd") {
      c.kind = TowerKind::IntegerLattice;
      c.dim = j.value("dim", 0);
      if (c.dim == 0) throw ConfigError("zd tower needs a positive dim");
      if (!j.contains("indices") || !j["indices"].is_array()) throw ConfigError("zd tower needs an indices array");
      for (const auto& row : j["indices"]) {
        std::vector<std::int64_t> r;
        if (row.is_array()) {
          for (const auto& v : row) r.push_back(parse_index(v));
        } else {
          r.assign(c.dim, parse_index(row));  // scalar: same index on every axis
        }
        c.indices.push_back(std::move(r));
      }
    } else if (kind == "table") {
      c.kind = TowerKind::Generic;
      GroupTable t;
      t.mul = j.at("mul").get<std::vector<std::vector<int>>>();
      for (const auto& lvl : j.at("levels")) {
        GroupTable::Level l;
        l.coset = lvl.at("coset").get<std::vector<int>>();
        l.domain = lvl.at("domain").get<std::vector<int>>();
        t.levels.push_back(std::move(l));
      }
      c.table = std::move(t);
    } else {
      throw ConfigError("unknown tower kind '" + kind + "' (expected z, zd or table)");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed tower config: ") + e.what());
  }
  return c;
}

TowerConfig load_tower_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tower config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_tower_config(j);
}

nlohmann::json to_json(const TowerConfig& c) {
  nlohmann::json j;
  if (!c.name.empty()) j["name"] = c.name;
  switch (c.kind) {
    case TowerKind::IntegerLine: {
      j["kind"] = "z";
      std::vector<std::int64_t> flat;
      for (const auto& row : c.indices) flat.push_back(row.at(0));
      j["indices"] = flat;
      break;
    }
    case TowerKind::IntegerLattice:
      j["kind"] = "zd";
      j["dim"] = c.dim;
      j["indices"] = c.indices;
      break;
    case TowerKind::Generic: {
      j["kind"] = "table";
      j["mul"] = c.table->mul;
      nlohmann::json levels = nlohmann::json::array();
      for (const auto& l : c.table->levels) levels.push_back({{"coset", l.coset}, {"domain", l.domain}});
      j["levels"] = levels;
      break;
    }
  }
  if (c.kind != TowerKind::Generic) j["domain"] = c.style == DomainStyle::Centered ? "centered" : "nonneg";
  switch (c.tail.kind) {
    case TailSpec::Kind::None: break;
    case TailSpec::Kind::Repeat: j["tail"] = {{"kind", "repeat"}}; break;
    case TailSpec::Kind::Geometric: j["tail"] = {{"kind", "geometric"}, {"ratio", to_fraction_string(c.tail.ratio)}}; break;
  }
  return j;
}

}  // namespace toeplitz
