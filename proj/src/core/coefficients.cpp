#include "sedvel/core/coefficients.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sedvel/errors.hpp"

namespace sedvel::core {

using nlohmann::json;

void CoefficientSet::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("invalid coefficients: ") + what);
  };
  require(std::isfinite(vs30_ref) && std::isfinite(r1) && std::isfinite(r2) &&
              std::isfinite(r3) && std::isfinite(s2) && std::isfinite(sigma),
          "non-finite value");
  require(vs30_w > 0.0, "vs30_w must be > 0");
  require(s2 > 0.0, "s2 must be > 0");
  require(sigma > 0.0, "sigma must be > 0");
  require(r2 >= 0.0, "r2 must be >= 0");
  require(r3 >= 0.0, "r3 must be >= 0");
  require(z_star == kZStar, "z_star must be 2.5 m");
  if (spatial) {
    require(spatial->ell_km > 0.0, "ell_km must be > 0");
    require(spatial->omega >= 0.0, "omega must be >= 0");
  }
  if (depth) {
    require(depth->range_r_m > 0.0, "range_r_m must be > 0");
    require(depth->sill_s >= 0.0, "sill_s must be >= 0");
  }
}

CoefficientSet stationary_preset(Summary summary) {
  CoefficientSet c;
  if (summary == Summary::median) {
    c.vs30_ref = 6.4990;
    c.vs30_w = 0.4354;
    c.r1 = -2.2986;
    c.r2 = 5.3966;
    c.r3 = 0.3886;
    c.s2 = 7.0741;
    c.sigma = 0.3759;
  } else {
    c.vs30_ref = 6.5045;
    c.vs30_w = 0.4368;
    c.r1 = -2.2960;
    c.r2 = 5.4669;
    c.r3 = 0.4236;
    c.s2 = 7.1685;
    c.sigma = 0.3759;
  }
  c.depth = DepthBlock{11.9293, 0.0820};
  return c;
}

CoefficientSet spatial_preset(Summary summary) {
  CoefficientSet c;
  c.vs30_ref = 6.4990;
  c.vs30_w = 0.4355;
  c.r3 = 0.3897;
  c.s2 = 7.0713;
  if (summary == Summary::median) {
    c.r1 = -2.6102;
    c.r2 = 5.9329;
    c.sigma = 0.2807;
    c.spatial = SpatialBlock{1.9104, 0.3156};
  } else {
    c.r1 = -2.6097;
    c.r2 = 5.9316;
    c.sigma = 0.2807;
    c.spatial = SpatialBlock{1.9471, 0.3159};
  }
  c.depth = DepthBlock{11.9778, 0.0607};
  return c;
}

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("coefficient file missing key '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw DataError(std::string("coefficient '") + key + "' is not a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("coefficient file missing key '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw DataError(std::string("coefficient '") + key + "' is not a number");
  return v.get<double>();
}

}  // namespace

std::string coefficients_to_json(const CoefficientSet& c) {
  json j;
  j["vs30_ref"] = c.vs30_ref;
  j["vs30_w"] = c.vs30_w;
  j["r1"] = c.r1;
  j["r2"] = c.r2;
  j["r3"] = c.r3;
  j["s2"] = c.s2;
  j["sigma"] = c.sigma;
  j["z_star"] = c.z_star;
  j["ell_km"] = c.spatial ? json(c.spatial->ell_km) : json(nullptr);
  j["omega"] = c.spatial ? json(c.spatial->omega) : json(nullptr);
  j["range_r_m"] = c.depth ? json(c.depth->range_r_m) : json(nullptr);
  j["sill_s"] = c.depth ? json(c.depth->sill_s) : json(nullptr);
  return j.dump(2) + "\n";
}

CoefficientSet coefficients_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("coefficient file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("coefficient file must be a JSON object");
  static const char* kKeys[] = {"vs30_ref", "vs30_w", "r1",     "r2",    "r3",        "s2",
                                "sigma",    "z_star", "ell_km", "omega", "range_r_m", "sill_s"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw DataError("unknown coefficient key '" + key + "'");
  }
  CoefficientSet c;
  c.vs30_ref = number(j, "vs30_ref");
  c.vs30_w = number(j, "vs30_w");
  c.r1 = number(j, "r1");
  c.r2 = number(j, "r2");
  c.r3 = number(j, "r3");
  c.s2 = number(j, "s2");
  c.sigma = number(j, "sigma");
  c.z_star = number(j, "z_star");
  const auto ell = optional_number(j, "ell_km");
  const auto omega = optional_number(j, "omega");
  if (ell.has_value() != omega.has_value())
    throw DataError("ell_km and omega must both be set or both be null");
  if (ell) c.spatial = SpatialBlock{*ell, *omega};
  const auto range = optional_number(j, "range_r_m");
  const auto sill = optional_number(j, "sill_s");
  if (range.has_value() != sill.has_value())
    throw DataError("range_r_m and sill_s must both be set or both be null");
  if (range) c.depth = DepthBlock{*range, *sill};
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw DataError(e.what());
  }
  return c;
}

CoefficientSet load_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open coefficient file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return coefficients_from_json(ss.str());
}

void save_coefficients(const CoefficientSet& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << coefficients_to_json(c);
}

}  // namespace sedvel::core
