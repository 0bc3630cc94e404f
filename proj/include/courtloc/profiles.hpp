#pragma once

#include <string>
#include <vector>

#include "courtloc/errors.hpp"
#include "courtloc/geometry.hpp"

namespace courtloc {

// Resolution profiles: the full 640x480 camera of the original pipeline and a
// half-resolution variant for desk-scale runs. Crop rows and network input
// dims scale consistently (full: 640x280 = 179200, reduced: 320x140 = 44800).
struct Profile {
  std::string name;
  geometry::CameraRig rig;
  int crop_rows = 200;
  std::vector<std::size_t> hidden_dims;

  std::size_t input_dim() const {
    return static_cast<std::size_t>(rig.image_width) *
           (rig.image_height - crop_rows);
  }
  std::vector<std::size_t> layer_dims() const {
    std::vector<std::size_t> dims;
    dims.push_back(input_dim());
    dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
    dims.push_back(2);
    return dims;
  }
};

inline Profile full_profile() {
  Profile p;
  p.name = "full";
  p.rig = geometry::CameraRig{};  // 640x480, fx = fy = 500
  p.crop_rows = 200;
  p.hidden_dims = {1024, 256, 64};
  return p;
}

inline Profile reduced_profile() {
  Profile p;
  p.name = "reduced";
  p.rig = geometry::CameraRig{250.0, 250.0, 160.0, 120.0, 320, 240, 0.5, 0.08};
  p.crop_rows = 100;
  p.hidden_dims = {256, 64};
  return p;
}

inline Profile profile_by_name(const std::string& name) {
  if (name == "full") return full_profile();
  if (name == "reduced") return reduced_profile();
  throw DomainError("unknown profile '" + name + "' (expected full or reduced)");
}

}  // namespace courtloc
