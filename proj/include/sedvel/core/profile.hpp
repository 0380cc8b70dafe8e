#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sedvel/core/scaling.hpp"

namespace sedvel::core {

struct Location {
  double lat = 0.0;  ///< degrees
  double lon = 0.0;  ///< degrees
};

struct Layer {
  double top_m = 0.0;
  double thickness_m = 0.0;
  double vs_mps = 0.0;

  double bottom_m() const { return top_m + thickness_m; }
  double mid_m() const { return top_m + 0.5 * thickness_m; }
};

enum class Provenance { measured, model_median, model_realization, background, merged };

const char* to_string(Provenance p);

/// Piecewise-constant Vs column starting at the surface. Layers are
/// contiguous, thicknesses and velocities strictly positive.
class LayeredProfile {
 public:
  LayeredProfile() = default;
  LayeredProfile(std::string id, std::vector<Layer> layers,
                 Provenance provenance = Provenance::measured,
                 std::optional<Location> location = std::nullopt);

  /// Builds the layer stack from thicknesses; tops are accumulated from 0.
  static LayeredProfile from_thicknesses(std::string id, std::span<const double> thickness_m,
                                         std::span<const double> vs_mps,
                                         Provenance provenance = Provenance::measured,
                                         std::optional<Location> location = std::nullopt);

  const std::string& id() const { return id_; }
  const std::vector<Layer>& layers() const { return layers_; }
  Provenance provenance() const { return provenance_; }
  const std::optional<Location>& location() const { return location_; }
  std::size_t size() const { return layers_.size(); }
  double depth_m() const { return layers_.empty() ? 0.0 : layers_.back().bottom_m(); }

  /// Velocity of the layer containing z (the upper layer at an interface).
  double vs_at(double z) const;

  /// Same layering with new velocities.
  LayeredProfile with_velocities(std::span<const double> vs_mps, Provenance provenance) const;

  void set_id(std::string id) { id_ = std::move(id); }
  void set_location(std::optional<Location> loc) { location_ = loc; }
  void set_provenance(Provenance p) { provenance_ = p; }

 private:
  void validate() const;

  std::string id_;
  std::vector<Layer> layers_;
  Provenance provenance_ = Provenance::measured;
  std::optional<Location> location_;
};

/// Layering scheme for turning the continuous median into layers.
struct DiscretizationRule {
  double top_thickness_m = 0.5;
  double growth = 1.05;
  double max_thickness_m = 5.0;
};

/// Layers to depth_max with Vs taken at each layer's mid-depth. The last
/// layer is clipped so the column ends exactly at depth_max.
LayeredProfile discretize(const ProfileParams& params, double depth_max_m,
                          const DiscretizationRule& rule = {});

/// Layer thicknesses produced by a rule, without velocities.
std::vector<double> layer_thicknesses(double depth_max_m, const DiscretizationRule& rule = {});

/// depth / (sum of vertical travel times over the top `depth` meters).
double time_averaged_vs(const LayeredProfile& profile, double depth_m = 30.0);

/// Quarter-wavelength fundamental frequency of the top `depth` meters [Hz].
double fp_quarter_wavelength(const LayeredProfile& profile, double depth_m);

/// Same, over the full column.
double fp_quarter_wavelength(const LayeredProfile& profile);

struct Residual {
  double depth_m = 0.0;
  double eps = 0.0;  ///< ln(vs) - ln(median)
};

/// One ln-residual per layer, median evaluated at layer mid-depth.
std::vector<Residual> residuals(const LayeredProfile& measured, const ProfileParams& params);

}  // namespace sedvel::core
