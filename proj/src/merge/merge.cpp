#include "sedvel/merge/merge.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "sedvel/errors.hpp"

namespace sedvel::merge {

namespace {

bool same_depth(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

std::vector<double> union_interfaces(const core::LayeredProfile& a, const core::LayeredProfile& b,
                                     double max_depth_m) {
  std::vector<double> z{0.0};
  for (const auto* p : {&a, &b})
    for (const auto& l : p->layers())
      if (l.bottom_m() <= max_depth_m || same_depth(l.bottom_m(), max_depth_m)) z.push_back(l.bottom_m());
  z.push_back(max_depth_m);
  std::sort(z.begin(), z.end());
  std::vector<double> out;
  for (double v : z)
    if (out.empty() || !same_depth(v, out.back())) out.push_back(v);
  // the deepest interface is exactly max_depth
  if (out.size() > 1 && same_depth(out.back(), max_depth_m)) out.back() = max_depth_m;
  return out;
}

core::LayeredProfile resample(const core::LayeredProfile& p, std::span<const double> interfaces) {
  if (interfaces.size() < 2 || interfaces.front() != 0.0)
    throw DomainError("resampling needs at least two interfaces starting at 0");
  if (interfaces.back() > p.depth_m() && !same_depth(interfaces.back(), p.depth_m()))
    throw DomainError("resampling below the bottom of profile " + p.id());
  std::vector<core::Layer> layers;
  for (std::size_t i = 0; i + 1 < interfaces.size(); ++i) {
    const double top = interfaces[i], bottom = interfaces[i + 1];
    if (!(bottom > top)) throw DomainError("resampling interfaces must be strictly increasing");
    layers.push_back({top, bottom - top, p.vs_at(0.5 * (top + bottom))});
  }
  return core::LayeredProfile(p.id(), std::move(layers), p.provenance(), p.location());
}

core::LayeredProfile merge_profile(const core::LayeredProfile& svm,
                                   const core::LayeredProfile& background) {
  if (svm.size() == 0 || background.size() == 0) throw DomainError("cannot merge an empty profile");
  if (background.depth_m() < svm.depth_m() && !same_depth(background.depth_m(), svm.depth_m()))
    throw DataError("background column (" + std::to_string(background.depth_m()) +
                    " m) is shallower than the sedimentary profile (" +
                    std::to_string(svm.depth_m()) + " m)");
  const double svm_depth = std::min(svm.depth_m(), background.depth_m());
  const std::vector<double> z = union_interfaces(svm, background, background.depth_m());
  const core::LayeredProfile bg = resample(background, z);

  std::vector<double> vs(bg.size());
  std::optional<double> floor;  // set once past the transition or the SVM bottom
  bool holding = true;          // floor still active
  for (std::size_t i = 0; i < bg.size(); ++i) {
    const core::Layer& l = bg.layers()[i];
    const double b = l.vs_mps;
    const bool in_svm = l.bottom_m() <= svm_depth || same_depth(l.bottom_m(), svm_depth);
    if (!floor && in_svm) {
      const double s = svm.vs_at(l.mid_m());
      if (std::max(s, b) >= kTransitionVs) {
        floor = kTransitionVs;
        vs[i] = std::max(b, kTransitionVs);
        holding = b < kTransitionVs;
      } else {
        vs[i] = std::max(s, b);
      }
      continue;
    }
    if (!floor) floor = vs[i - 1];  // SVM ended before the transition
    if (holding && b >= *floor) holding = false;
    vs[i] = holding ? *floor : b;
  }
  core::LayeredProfile out = bg.with_velocities(vs, core::Provenance::merged);
  out.set_id(svm.id());
  out.set_location(svm.location() ? svm.location() : background.location());
  return out;
}

double z_vs_threshold(const core::ProfileParams& p, double vs_limit) {
  if (!(vs_limit > 0.0)) throw DomainError("vs_limit must be positive");
  if (vs_limit < p.vs0) return 0.0;
  return core::kZStar + std::expm1(p.n * std::log(vs_limit / p.vs0)) / p.k;
}

}  // namespace sedvel::merge
