#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sedvel/core/profile.hpp"

namespace sedvel::merge {

/// Regular lat/lon lattice of depth columns of vs [m/s]. Horizontal axes are
/// evenly spaced; the depth axis is strictly increasing but may be irregular.
class BackgroundModel {
 public:
  BackgroundModel() = default;
  /// `vs` is indexed [ilat][ilon][idepth], axes ascending.
  BackgroundModel(std::vector<double> lats, std::vector<double> lons, std::vector<double> depths_m,
                  std::vector<double> vs);

  /// Nearest neighbour in depth (shallower node on a tie), bilinear in
  /// lat/lon. Throws DomainError outside the extents.
  double query(double lat, double lon, double z_m) const;

  bool contains(double lat, double lon, double z_m) const;

  /// Column at (lat, lon) as layers: one layer per depth node, interfaces
  /// halfway between nodes, the first starting at the surface and the last
  /// ending at the deepest node.
  core::LayeredProfile profile_at(double lat, double lon, const std::string& id = "background") const;

  const std::vector<double>& lats() const { return lats_; }
  const std::vector<double>& lons() const { return lons_; }
  const std::vector<double>& depths() const { return depths_; }
  double lat_spacing() const { return lats_.size() > 1 ? lats_[1] - lats_[0] : 0.0; }
  double lon_spacing() const { return lons_.size() > 1 ? lons_[1] - lons_[0] : 0.0; }
  double max_depth_m() const { return depths_.back(); }

  double node(std::size_t ilat, std::size_t ilon, std::size_t idepth) const {
    return vs_[(ilat * lons_.size() + ilon) * depths_.size() + idepth];
  }

 private:
  std::size_t depth_index(double z_m) const;
  double column_value(double lat, double lon, std::size_t idepth) const;

  std::vector<double> lats_, lons_, depths_;
  std::vector<double> vs_;
};

/// CSV lat,lon,depth_m,vs_mps covering every lattice node exactly once, in
/// any order. Throws DataError when the nodes do not form a regular lattice.
BackgroundModel read_background(const std::filesystem::path& path);
BackgroundModel parse_background(const std::string& text, const std::string& source = "<memory>");
std::string format_background(const BackgroundModel& model);

}  // namespace sedvel::merge
