#include "sedvel/calibrate/fit_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sedvel/errors.hpp"

namespace sedvel::calibrate {

namespace {

using nlohmann::ordered_json;

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace

std::string fit_to_json(const FitResult& fit) {
  ordered_json j;
  j["model"] = to_string(fit.model);
  j["coefficients"] = ordered_json::parse(core::coefficients_to_json(fit.coeffs));
  ordered_json params = ordered_json::array();
  for (const auto& p : fit.params)
    params.push_back({{"name", p.name}, {"value", num(p.value)}, {"sd", num(p.sd)}, {"fixed", p.fixed}});
  j["params"] = std::move(params);
  if (fit.model == ModelKind::spatial) {
    j["dr1"] = num(fit.dr1);
    j["dr2"] = num(fit.dr2);
    ordered_json d = ordered_json::array();
    for (std::size_t i = 0; i < fit.dBr.size(); ++i)
      d.push_back({{"id", fit.profile_ids.at(i)}, {"dBr", num(fit.dBr[i])}, {"sd", num(fit.dBr_sd.at(i))}});
    j["dBr"] = std::move(d);
  }
  j["neg_log_posterior"] = num(fit.neg_log_posterior);
  j["residual_sd"] = num(fit.residual_sd);
  j["diagnostics"] = {{"status", to_string(fit.status)},
                      {"iterations", fit.iterations},
                      {"grad_norm", num(fit.grad_norm)},
                      {"best_restart", fit.best_restart},
                      {"profiles", fit.profile_ids.size()}};
  return j.dump(2) + "\n";
}

void write_fit(const FitResult& fit, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << fit_to_json(fit);
}

std::string format_fit_summary(const FitResult& fit) {
  std::ostringstream os;
  char buf[128];
  os << (fit.model == ModelKind::stationary ? "Stationary model" : "Spatially varying model")
     << " (MAP, " << fit.profile_ids.size() << " profiles)\n";
  std::snprintf(buf, sizeof buf, "%-10s %12s %12s\n", "parameter", "value", "sd");
  os << buf;
  for (const auto& p : fit.params) {
    if (p.fixed)
      std::snprintf(buf, sizeof buf, "%-10s %12.4f %12s\n", p.name.c_str(), p.value, "fixed");
    else
      std::snprintf(buf, sizeof buf, "%-10s %12.4f %12.4f\n", p.name.c_str(), p.value, p.sd);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "status %s, iterations %d, scaled gradient %.3g\n",
                to_string(fit.status), fit.iterations, fit.grad_norm);
  os << buf;
  std::snprintf(buf, sizeof buf, "neg log posterior %.6f, residual sd %.4f\n",
                fit.neg_log_posterior, fit.residual_sd);
  os << buf;
  return os.str();
}

}  // namespace sedvel::calibrate
