#pragma once

#include "splatvi/common.hpp"

namespace splatvi {

struct CameraIntrinsics {
  double fx = 0, fy = 0;   // focal lengths, pixels
  double cx = 0, cy = 0;   // principal point, pixels
  int width = 0, height = 0;
  double depth_scale = 1.0;  // raw depth units per meter

  bool valid() const {
    return fx > 0 && fy > 0 && cx >= 0 && cx < width && cy >= 0 && cy < height &&
           depth_scale > 0;
  }
};

/// Pinhole back-projection of pixel (u, v) with metric depth d.
inline Vec3 backproject_pixel(const CameraIntrinsics& intr, double u, double v,
                              double d) {
  return {d * (u - intr.cx) / intr.fx, d * (v - intr.cy) / intr.fy, d};
}

/// Pinhole projection of a camera-frame point; caller checks z > 0.
inline Vec2 project_point(const CameraIntrinsics& intr, const Vec3& p) {
  return {intr.fx * p.x() / p.z() + intr.cx, intr.fy * p.y() / p.z() + intr.cy};
}

}  // namespace splatvi
