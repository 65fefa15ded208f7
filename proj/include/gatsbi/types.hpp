#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gatsbi {

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Ground-truth occupancy labels. Empty cells carry no label.
enum class GroundTruthLabel : std::uint8_t { Bridge, Obstacle };

// Belief states of the online map. Cells start Unknown.
enum class CellState : std::uint8_t {
  Unknown,
  Free,
  Obstacle,
  BridgeNotInspected,
  BridgeInspected,
};

inline bool is_occupied(CellState s) {
  return s == CellState::Obstacle || s == CellState::BridgeNotInspected ||
         s == CellState::BridgeInspected;
}

inline bool is_bridge(CellState s) {
  return s == CellState::BridgeNotInspected || s == CellState::BridgeInspected;
}

inline const char* to_string(CellState s) {
  switch (s) {
    case CellState::Unknown: return "unknown";
    case CellState::Free: return "free";
    case CellState::Obstacle: return "obstacle";
    case CellState::BridgeNotInspected: return "bridge_not_inspected";
    case CellState::BridgeInspected: return "bridge_inspected";
  }
  return "?";
}

struct Pose {
  Vec3 position{Vec3::Zero()};
  double yaw = 0.0;
};

// Inclusive voxel-index extents.
struct GridBounds {
  Vec3i min{Vec3i::Zero()};
  Vec3i max{Vec3i::Zero()};

  bool contains(const Vec3i& v) const {
    return (v.array() >= min.array()).all() && (v.array() <= max.array()).all();
  }
  Vec3i extent() const { return max - min + Vec3i::Ones(); }
  std::int64_t cell_count() const {
    const Vec3i e = extent();
    return std::int64_t(e.x()) * e.y() * e.z();
  }
  std::int64_t linear_index(const Vec3i& v) const {
    const Vec3i d = v - min;
    const Vec3i e = extent();
    return (std::int64_t(d.z()) * e.y() + d.y()) * e.x() + d.x();
  }
};

// Lexicographic (x, y, z) order; the canonical iteration/tie-break order.
struct LexLess {
  bool operator()(const Vec3i& a, const Vec3i& b) const {
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.z() < b.z();
  }
};

enum class Face : std::uint8_t { PosX, NegX, PosY, NegY, PosZ, NegZ };

inline constexpr std::array<Face, 6> kAllFaces = {Face::PosX, Face::NegX, Face::PosY,
                                                  Face::NegY, Face::PosZ, Face::NegZ};

inline const char* to_string(Face f) {
  switch (f) {
    case Face::PosX: return "+x";
    case Face::NegX: return "-x";
    case Face::PosY: return "+y";
    case Face::NegY: return "-y";
    case Face::PosZ: return "+z";
    case Face::NegZ: return "-z";
  }
  return "?";
}

inline Vec3i face_step(Face f) {
  switch (f) {
    case Face::PosX: return {1, 0, 0};
    case Face::NegX: return {-1, 0, 0};
    case Face::PosY: return {0, 1, 0};
    case Face::NegY: return {0, -1, 0};
    case Face::PosZ: return {0, 0, 1};
    case Face::NegZ: return {0, 0, -1};
  }
  return Vec3i::Zero();
}

inline Vec3 face_normal(Face f) { return face_step(f).cast<double>(); }

// Voxel v spans [v*s, (v+1)*s) per axis.
inline Vec3i voxel_of(const Vec3& p, double voxel_size) {
  return {int(std::floor(p.x() / voxel_size)), int(std::floor(p.y() / voxel_size)),
          int(std::floor(p.z() / voxel_size))};
}

inline Vec3 voxel_center(const Vec3i& v, double voxel_size) {
  return (v.cast<double>() + Vec3::Constant(0.5)) * voxel_size;
}

inline Vec3 face_center(const Vec3i& v, Face f, double voxel_size) {
  return voxel_center(v, voxel_size) + 0.5 * voxel_size * face_normal(f);
}

// Thrown on malformed scenario documents or instance files.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on contract violations (bad arguments, invalid configuration).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a mission cannot proceed (e.g. bridge not observable).
struct MissionError : std::runtime_error {
  explicit MissionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gatsbi
