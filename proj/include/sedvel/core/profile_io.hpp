#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sedvel/core/profile.hpp"

namespace sedvel::core {

/// CSV with header id,lat,lon,depth_top_m,thickness_m,vs_mps; one row per
/// layer, rows of a profile contiguous and depth-sorted. lat/lon may be empty.
std::vector<LayeredProfile> read_profiles(const std::filesystem::path& path);
std::vector<LayeredProfile> parse_profiles(const std::string& text,
                                           const std::string& source = "<memory>");
void write_profiles(const std::vector<LayeredProfile>& profiles, const std::filesystem::path& path);
std::string format_profiles(const std::vector<LayeredProfile>& profiles);

}  // namespace sedvel::core
