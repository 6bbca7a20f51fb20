#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fastnav/env.hpp"
#include "fastnav/types.hpp"

namespace fastnav {

// How queries outside the allocated grid answer. Voxels inside the grid are
// always authoritative: occupancy is accumulated monotonically and an unset
// bit means traversable.
enum class UnknownSpace { kFree, kOccupied };

// Uniform 3-D occupancy grid over the half-open box
// [origin, origin + dims * resolution). One bit per voxel, occupancy only;
// voxels never become free again.
class VoxelMap {
 public:
  VoxelMap() = default;
  VoxelMap(const Vec3& origin, double resolution, const Eigen::Vector3i& dims);

  const Vec3& origin() const { return origin_; }
  double resolution() const { return res_; }
  const Eigen::Vector3i& dims() const { return dims_; }
  Vec3 max_corner() const { return origin_ + res_ * dims_.cast<double>(); }

  // Query-time inflation pads the robot radius by half the voxel diagonal so
  // that any point of an occupied voxel (not just its center) is covered.
  double half_diagonal() const { return 0.5 * res_ * std::sqrt(3.0); }

  Eigen::Vector3i world_to_index(const Vec3& p) const;
  Vec3 index_to_center(const Eigen::Vector3i& idx) const;
  bool index_in_bounds(const Eigen::Vector3i& idx) const;
  bool world_in_bounds(const Vec3& p) const;

  bool occupied_at(const Eigen::Vector3i& idx) const;
  void mark_occupied(const Eigen::Vector3i& idx);

  std::size_t occupied_count() const { return history_.size(); }
  std::size_t total_voxels() const;

  // Voxels in first-marked order, as linear indices; grows monotonically.
  const std::vector<std::uint64_t>& occupied_history() const { return history_; }

  void insert_points(const std::vector<Vec3>& points);

  // True iff some occupied voxel center lies within
  // robot_radius + half_diagonal() of pos. For pos outside the grid with no
  // such voxel nearby, the unknown policy decides.
  bool is_occupied_inflated(const Vec3& pos, double robot_radius,
                            UnknownSpace unknown = UnknownSpace::kFree) const;

  Eigen::Vector3i index_from_linear(std::uint64_t lin) const;

  // Text dump / restore; layout documented in the README.
  void save(std::ostream& os) const;
  static VoxelMap load(std::istream& is);

  bool same_occupancy(const VoxelMap& other) const;

 private:
  // Per-radius conservative dilation of the occupied set: a set bit means
  // "an occupied center might be within reach of points in this voxel", a
  // clear bit is a definitive miss. Kept in sync incrementally from
  // history_; answers stay bit-identical to the exact scan.
  struct Prefilter {
    double robot_radius = 0.0;
    std::vector<std::uint64_t> bits;
    std::size_t consumed = 0;
    std::vector<Eigen::Vector3i> ball;
  };

  std::uint64_t linear(const Eigen::Vector3i& idx) const;
  bool exact_inflated_scan(const Vec3& pos, double inflate) const;
  Prefilter& prefilter_for(double robot_radius) const;
  void advance_prefilter(Prefilter& pf) const;

  Vec3 origin_{Vec3::Zero()};
  double res_{0.5};
  Eigen::Vector3i dims_{0, 0, 0};
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> history_;
  mutable std::vector<Prefilter> prefilters_;
};

void insert_scan(VoxelMap& map, const std::vector<Vec3>& points);
bool is_occupied_inflated(const VoxelMap& map, const Vec3& pos, double robot_radius,
                          UnknownSpace unknown = UnknownSpace::kFree);

// Grid covering env.bounds at the given resolution with every voxel whose
// center is inside an obstacle marked occupied.
VoxelMap rasterize_env(const GroundTruthEnv& env, double resolution);

}  // namespace fastnav
