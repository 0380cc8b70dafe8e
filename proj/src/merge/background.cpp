#include "sedvel/merge/background.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "sedvel/errors.hpp"
#include "sedvel/io/csv.hpp"

namespace sedvel::merge {

namespace {

constexpr double kAxisTol = 1e-9;

bool on_axis(double v, const std::vector<double>& axis) {
  const double tol = kAxisTol * std::max(1.0, std::abs(axis.back() - axis.front()));
  return v >= axis.front() - tol && v <= axis.back() + tol;
}

// Cell index and fractional offset along an evenly spaced axis.
std::pair<std::size_t, double> locate(double v, const std::vector<double>& axis) {
  if (axis.size() == 1) return {0, 0.0};
  const double h = axis[1] - axis[0];
  double t = std::clamp((v - axis.front()) / h, 0.0, static_cast<double>(axis.size() - 1));
  // snap to nodes so queries on the lattice return stored values exactly
  if (const double r = std::round(t); std::abs(t - r) < 1e-9) t = r;
  const auto i = std::min(static_cast<std::size_t>(t), axis.size() - 2);
  return {i, t - static_cast<double>(i)};
}

void check_regular(const std::vector<double>& axis, const char* name, const std::string& source) {
  if (axis.size() < 2) return;
  const double h = axis[1] - axis[0];
  for (std::size_t i = 1; i < axis.size(); ++i)
    if (std::abs((axis[i] - axis[i - 1]) - h) > 1e-6 * std::abs(h))
      throw DataError(source + ": " + name + " axis is not evenly spaced");
}

}  // namespace

BackgroundModel::BackgroundModel(std::vector<double> lats, std::vector<double> lons,
                                 std::vector<double> depths_m, std::vector<double> vs)
    : lats_(std::move(lats)), lons_(std::move(lons)), depths_(std::move(depths_m)), vs_(std::move(vs)) {
  if (lats_.empty() || lons_.empty() || depths_.empty())
    throw DataError("background model needs at least one node per axis");
  if (vs_.size() != lats_.size() * lons_.size() * depths_.size())
    throw DataError("background model value count does not match its axes");
  auto ascending = [](const std::vector<double>& a) {
    return std::adjacent_find(a.begin(), a.end(), std::greater_equal<>()) == a.end();
  };
  if (!ascending(lats_) || !ascending(lons_) || !ascending(depths_))
    throw DataError("background model axes must be strictly increasing");
  if (depths_.front() < 0.0) throw DataError("background model depths must be >= 0");
  check_regular(lats_, "latitude", "background model");
  check_regular(lons_, "longitude", "background model");
  for (double v : vs_)
    if (!(v > 0.0) || !std::isfinite(v)) throw DataError("background model vs must be positive");
}

bool BackgroundModel::contains(double lat, double lon, double z_m) const {
  return on_axis(lat, lats_) && on_axis(lon, lons_) && z_m >= 0.0 &&
         z_m <= depths_.back() * (1.0 + kAxisTol);
}

std::size_t BackgroundModel::depth_index(double z_m) const {
  const auto it = std::lower_bound(depths_.begin(), depths_.end(), z_m);
  if (it == depths_.begin()) return 0;
  if (it == depths_.end()) return depths_.size() - 1;
  const auto i = static_cast<std::size_t>(it - depths_.begin());
  return (z_m - depths_[i - 1] <= depths_[i] - z_m) ? i - 1 : i;
}

double BackgroundModel::column_value(double lat, double lon, std::size_t k) const {
  const auto [i, ty] = locate(lat, lats_);
  const auto [j, tx] = locate(lon, lons_);
  const std::size_t i1 = std::min(i + 1, lats_.size() - 1), j1 = std::min(j + 1, lons_.size() - 1);
  const double v00 = node(i, j, k), v01 = node(i, j1, k), v10 = node(i1, j, k), v11 = node(i1, j1, k);
  return (1 - ty) * ((1 - tx) * v00 + tx * v01) + ty * ((1 - tx) * v10 + tx * v11);
}

double BackgroundModel::query(double lat, double lon, double z_m) const {
  if (!contains(lat, lon, z_m)) {
    std::ostringstream os;
    os << "background query (" << lat << ", " << lon << ", " << z_m << " m) is outside the model extents";
    throw DomainError(os.str());
  }
  return column_value(lat, lon, depth_index(z_m));
}

core::LayeredProfile BackgroundModel::profile_at(double lat, double lon, const std::string& id) const {
  if (!contains(lat, lon, 0.0)) throw DomainError("background profile location is outside the model extents");
  if (!(depths_.back() > 0.0)) throw DomainError("background model has no depth extent");
  std::vector<core::Layer> layers;
  double top = 0.0;
  for (std::size_t k = 0; k < depths_.size(); ++k) {
    const double bottom = k + 1 < depths_.size() ? 0.5 * (depths_[k] + depths_[k + 1]) : depths_.back();
    if (bottom <= top) continue;
    layers.push_back({top, bottom - top, column_value(lat, lon, k)});
    top = bottom;
  }
  return core::LayeredProfile(id, std::move(layers), core::Provenance::background, core::Location{lat, lon});
}

BackgroundModel parse_background(const std::string& text, const std::string& source) {
  const io::CsvTable t = io::parse_csv(text, source);
  io::require_header(t, {"lat", "lon", "depth_m", "vs_mps"}, source);
  std::map<std::tuple<double, double, double>, double> nodes;
  std::vector<double> lats, lons, depths;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string ctx = source + ":" + std::to_string(t.line_numbers[r]);
    const double lat = io::parse_double(t.rows[r][0], ctx);
    const double lon = io::parse_double(t.rows[r][1], ctx);
    const double z = io::parse_double(t.rows[r][2], ctx);
    const double vs = io::parse_double(t.rows[r][3], ctx);
    if (!nodes.emplace(std::make_tuple(lat, lon, z), vs).second)
      throw DataError(ctx + ": duplicate lattice node");
    lats.push_back(lat);
    lons.push_back(lon);
    depths.push_back(z);
  }
  auto unique_sorted = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  unique_sorted(lats);
  unique_sorted(lons);
  unique_sorted(depths);
  if (nodes.size() != lats.size() * lons.size() * depths.size())
    throw DataError(source + ": nodes do not cover a full lat/lon/depth lattice");
  std::vector<double> vs;
  vs.reserve(nodes.size());
  for (double lat : lats)
    for (double lon : lons)
      for (double z : depths) vs.push_back(nodes.at({lat, lon, z}));
  try {
    return BackgroundModel(lats, lons, depths, vs);
  } catch (const DataError& e) {
    throw DataError(source + ": " + e.what());
  }
}

BackgroundModel read_background(const std::filesystem::path& path) {
  return parse_background(io::read_text(path), path.string());
}

std::string format_background(const BackgroundModel& m) {
  std::ostringstream os;
  os << "lat,lon,depth_m,vs_mps\n";
  for (std::size_t i = 0; i < m.lats().size(); ++i)
    for (std::size_t j = 0; j < m.lons().size(); ++j)
      for (std::size_t k = 0; k < m.depths().size(); ++k)
        os << io::fmt_exact(m.lats()[i]) << ',' << io::fmt_exact(m.lons()[j]) << ','
           << io::fmt_exact(m.depths()[k]) << ',' << io::fmt_exact(m.node(i, j, k))
           << '\n';
  return os.str();
}

}  // namespace sedvel::merge
