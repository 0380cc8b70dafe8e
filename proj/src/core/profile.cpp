#include "sedvel/core/profile.hpp"

#include <algorithm>
#include <cmath>

#include "sedvel/errors.hpp"

namespace sedvel::core {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::measured: return "measured";
    case Provenance::model_median: return "model_median";
    case Provenance::model_realization: return "model_realization";
    case Provenance::background: return "background";
    case Provenance::merged: return "merged";
  }
  return "unknown";
}

LayeredProfile::LayeredProfile(std::string id, std::vector<Layer> layers, Provenance provenance,
                               std::optional<Location> location)
    : id_(std::move(id)),
      layers_(std::move(layers)),
      provenance_(provenance),
      location_(location) {
  validate();
}

LayeredProfile LayeredProfile::from_thicknesses(std::string id, std::span<const double> thickness_m,
                                                std::span<const double> vs_mps,
                                                Provenance provenance,
                                                std::optional<Location> location) {
  if (thickness_m.size() != vs_mps.size())
    throw DataError("thickness and velocity arrays differ in length");
  std::vector<Layer> layers;
  layers.reserve(thickness_m.size());
  double top = 0.0;
  for (std::size_t i = 0; i < thickness_m.size(); ++i) {
    layers.push_back({top, thickness_m[i], vs_mps[i]});
    top += thickness_m[i];
  }
  return LayeredProfile(std::move(id), std::move(layers), provenance, location);
}

void LayeredProfile::validate() const {
  if (layers_.empty()) throw DataError("profile '" + id_ + "' has no layers");
  double expected_top = 0.0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (!(l.thickness_m > 0.0) || !std::isfinite(l.thickness_m))
      throw DataError("profile '" + id_ + "': layer " + std::to_string(i) +
                      " has non-positive thickness");
    if (!(l.vs_mps > 0.0) || !std::isfinite(l.vs_mps))
      throw DataError("profile '" + id_ + "': layer " + std::to_string(i) +
                      " has non-positive vs");
    const double tol = 1e-6 * std::max(1.0, expected_top);
    if (std::abs(l.top_m - expected_top) > tol)
      throw DataError("profile '" + id_ + "': layer " + std::to_string(i) +
                      " is not contiguous with the layer above");
    expected_top = l.top_m + l.thickness_m;
  }
}

double LayeredProfile::vs_at(double z) const {
  if (z < 0.0) throw DomainError("depth must be >= 0");
  for (const Layer& l : layers_)
    if (z <= l.bottom_m()) return l.vs_mps;
  throw DataError("depth below the bottom of profile '" + id_ + "'");
}

LayeredProfile LayeredProfile::with_velocities(std::span<const double> vs_mps,
                                               Provenance provenance) const {
  if (vs_mps.size() != layers_.size()) throw DataError("velocity count does not match layers");
  std::vector<Layer> out = layers_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].vs_mps = vs_mps[i];
  return LayeredProfile(id_, std::move(out), provenance, location_);
}

std::vector<double> layer_thicknesses(double depth_max_m, const DiscretizationRule& rule) {
  if (!(depth_max_m > 0.0)) throw DomainError("depth_max must be > 0");
  if (!(rule.top_thickness_m > 0.0) || !(rule.growth >= 1.0) ||
      !(rule.max_thickness_m >= rule.top_thickness_m))
    throw DomainError("invalid discretization rule");
  std::vector<double> h;
  double top = 0.0;
  double t = rule.top_thickness_m;
  while (top < depth_max_m) {
    const double remaining = depth_max_m - top;
    const double step = std::min(t, remaining);
    h.push_back(step);
    top += step;
    if (remaining - step <= 1e-9 * depth_max_m) break;
    t = std::min(t * rule.growth, rule.max_thickness_m);
  }
  return h;
}

LayeredProfile discretize(const ProfileParams& params, double depth_max_m,
                          const DiscretizationRule& rule) {
  const auto h = layer_thicknesses(depth_max_m, rule);
  std::vector<Layer> layers;
  layers.reserve(h.size());
  double top = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    // The final layer ends exactly at depth_max.
    const double thick = (i + 1 == h.size()) ? depth_max_m - top : h[i];
    layers.push_back({top, thick, median_vs(top + 0.5 * thick, params)});
    top += thick;
  }
  return LayeredProfile("median", std::move(layers), Provenance::model_median);
}

double time_averaged_vs(const LayeredProfile& profile, double depth_m) {
  if (!(depth_m > 0.0)) throw DomainError("averaging depth must be > 0");
  if (profile.depth_m() < depth_m * (1.0 - 1e-12))
    throw DataError("profile '" + profile.id() + "' is shallower than the averaging depth");
  double travel = 0.0;
  for (const Layer& l : profile.layers()) {
    if (l.top_m >= depth_m) break;
    const double h = std::min(l.bottom_m(), depth_m) - l.top_m;
    travel += h / l.vs_mps;
  }
  return depth_m / travel;
}

double fp_quarter_wavelength(const LayeredProfile& profile, double depth_m) {
  return time_averaged_vs(profile, depth_m) / (4.0 * depth_m);
}

double fp_quarter_wavelength(const LayeredProfile& profile) {
  return fp_quarter_wavelength(profile, profile.depth_m());
}

std::vector<Residual> residuals(const LayeredProfile& measured, const ProfileParams& params) {
  std::vector<Residual> out;
  out.reserve(measured.size());
  for (const Layer& l : measured.layers()) {
    const double z = l.mid_m();
    out.push_back({z, std::log(l.vs_mps) - std::log(median_vs(z, params))});
  }
  return out;
}

}  // namespace sedvel::core
