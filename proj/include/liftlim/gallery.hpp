#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liftlim/tower.hpp"

namespace liftlim {

using GalleryParams = std::map<std::string, long>;

struct GalleryEntry {
  std::string name;
  GalleryParams params;
  Tower tower;
  BaseModel base;
  /// command -> expected verdict string, as printed in reports
  std::map<std::string, std::string> expected;
};

/// p-solenoid (p in [2, 1000], default 2), dyadic-solenoid, warsawonoid, hawaiian (n in [1, 12],
/// default 4), product-tower (n in [1, 12], default 3), constant-cover (m in [1, 1000], default 2).
GalleryEntry make_gallery(const std::string& name, const GalleryParams& params = {});
std::vector<std::string> gallery_names();

}  // namespace liftlim
