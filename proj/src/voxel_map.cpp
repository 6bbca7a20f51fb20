#include "fastnav/voxel_map.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fastnav {

VoxelMap::VoxelMap(const Vec3& origin, double resolution, const Eigen::Vector3i& dims)
    : origin_(origin), res_(resolution), dims_(dims) {
  if (resolution <= 0.0) throw std::invalid_argument("VoxelMap: resolution must be positive");
  if (dims.x() <= 0 || dims.y() <= 0 || dims.z() <= 0) {
    throw std::invalid_argument("VoxelMap: dims must be positive");
  }
  bits_.assign((total_voxels() + 63) / 64, 0);
}

std::size_t VoxelMap::total_voxels() const {
  return static_cast<std::size_t>(dims_.x()) * static_cast<std::size_t>(dims_.y()) *
         static_cast<std::size_t>(dims_.z());
}

std::uint64_t VoxelMap::linear(const Eigen::Vector3i& idx) const {
  return (static_cast<std::uint64_t>(idx.z()) * dims_.y() + idx.y()) * dims_.x() + idx.x();
}

Eigen::Vector3i VoxelMap::index_from_linear(std::uint64_t lin) const {
  const std::uint64_t nx = dims_.x();
  const std::uint64_t ny = dims_.y();
  return Eigen::Vector3i(static_cast<int>(lin % nx), static_cast<int>((lin / nx) % ny),
                         static_cast<int>(lin / (nx * ny)));
}

Eigen::Vector3i VoxelMap::world_to_index(const Vec3& p) const {
  return Eigen::Vector3i(static_cast<int>(std::floor((p.x() - origin_.x()) / res_)),
                         static_cast<int>(std::floor((p.y() - origin_.y()) / res_)),
                         static_cast<int>(std::floor((p.z() - origin_.z()) / res_)));
}

Vec3 VoxelMap::index_to_center(const Eigen::Vector3i& idx) const {
  return origin_ + res_ * (idx.cast<double>() + Vec3::Constant(0.5));
}

bool VoxelMap::index_in_bounds(const Eigen::Vector3i& idx) const {
  return idx.x() >= 0 && idx.x() < dims_.x() && idx.y() >= 0 && idx.y() < dims_.y() &&
         idx.z() >= 0 && idx.z() < dims_.z();
}

bool VoxelMap::world_in_bounds(const Vec3& p) const {
  return index_in_bounds(world_to_index(p));
}

bool VoxelMap::occupied_at(const Eigen::Vector3i& idx) const {
  const std::uint64_t lin = linear(idx);
  return (bits_[lin >> 6] >> (lin & 63)) & 1u;
}

void VoxelMap::mark_occupied(const Eigen::Vector3i& idx) {
  if (!index_in_bounds(idx)) return;
  const std::uint64_t lin = linear(idx);
  std::uint64_t& word = bits_[lin >> 6];
  const std::uint64_t mask = std::uint64_t{1} << (lin & 63);
  if (word & mask) return;
  word |= mask;
  history_.push_back(lin);
}

void VoxelMap::insert_points(const std::vector<Vec3>& points) {
  for (const Vec3& p : points) {
    const Eigen::Vector3i idx = world_to_index(p);
    if (index_in_bounds(idx)) mark_occupied(idx);
  }
}

bool VoxelMap::exact_inflated_scan(const Vec3& pos, double inflate) const {
  const double inflate_sq = inflate * inflate;
  Eigen::Vector3i lo = world_to_index(pos - Vec3::Constant(inflate));
  Eigen::Vector3i hi = world_to_index(pos + Vec3::Constant(inflate));
  for (int axis = 0; axis < 3; ++axis) {
    lo[axis] = std::max(lo[axis], 0);
    hi[axis] = std::min(hi[axis], dims_[axis] - 1);
  }
  Eigen::Vector3i idx;
  for (idx.z() = lo.z(); idx.z() <= hi.z(); ++idx.z()) {
    for (idx.y() = lo.y(); idx.y() <= hi.y(); ++idx.y()) {
      for (idx.x() = lo.x(); idx.x() <= hi.x(); ++idx.x()) {
        if (!occupied_at(idx)) continue;
        if ((index_to_center(idx) - pos).squaredNorm() <= inflate_sq) return true;
      }
    }
  }
  return false;
}

VoxelMap::Prefilter& VoxelMap::prefilter_for(double robot_radius) const {
  for (auto& pf : prefilters_) {
    if (pf.robot_radius == robot_radius) return pf;
  }
  Prefilter pf;
  pf.robot_radius = robot_radius;
  pf.bits.assign(bits_.size(), 0);
  // Center-to-center reach: a query anywhere inside a voxel sits at most
  // half_diagonal from that voxel's center, so conservative coverage needs
  // robot_radius + 2 * half_diagonal between centers.
  const double reach = robot_radius + 2.0 * half_diagonal() + 1e-12 * res_;
  const int r = static_cast<int>(std::floor(reach / res_)) + 1;
  const double reach_sq = (reach / res_) * (reach / res_);
  for (int dz = -r; dz <= r; ++dz) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        const double d2 = double(dx) * dx + double(dy) * dy + double(dz) * dz;
        if (d2 <= reach_sq) pf.ball.emplace_back(dx, dy, dz);
      }
    }
  }
  prefilters_.push_back(std::move(pf));
  return prefilters_.back();
}

void VoxelMap::advance_prefilter(Prefilter& pf) const {
  while (pf.consumed < history_.size()) {
    const Eigen::Vector3i idx = index_from_linear(history_[pf.consumed]);
    for (const auto& off : pf.ball) {
      const Eigen::Vector3i j = idx + off;
      if (!index_in_bounds(j)) continue;
      const std::uint64_t lin = linear(j);
      pf.bits[lin >> 6] |= std::uint64_t{1} << (lin & 63);
    }
    ++pf.consumed;
  }
}

bool VoxelMap::is_occupied_inflated(const Vec3& pos, double robot_radius,
                                    UnknownSpace unknown) const {
  const double inflate = robot_radius + half_diagonal();
  if (world_in_bounds(pos)) {
    Prefilter& pf = prefilter_for(robot_radius);
    advance_prefilter(pf);
    const std::uint64_t lin = linear(world_to_index(pos));
    if (!((pf.bits[lin >> 6] >> (lin & 63)) & 1u)) return false;
    return exact_inflated_scan(pos, inflate);
  }
  // Outside the grid: occupied voxels near the border still count, beyond
  // that the unknown policy answers.
  if (exact_inflated_scan(pos, inflate)) return true;
  return unknown == UnknownSpace::kOccupied;
}

void VoxelMap::save(std::ostream& os) const {
  os << "fastnav-voxmap 1\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "origin %.17g %.17g %.17g\n", origin_.x(), origin_.y(),
                origin_.z());
  os << buf;
  std::snprintf(buf, sizeof buf, "resolution %.17g\n", res_);
  os << buf;
  os << "dims " << dims_.x() << " " << dims_.y() << " " << dims_.z() << "\n";
  os << "data\n";
  std::string row(static_cast<std::size_t>(dims_.x()), '0');
  Eigen::Vector3i idx;
  for (idx.z() = 0; idx.z() < dims_.z(); ++idx.z()) {
    for (idx.y() = 0; idx.y() < dims_.y(); ++idx.y()) {
      for (idx.x() = 0; idx.x() < dims_.x(); ++idx.x()) {
        row[static_cast<std::size_t>(idx.x())] = occupied_at(idx) ? '1' : '0';
      }
      os << row << "\n";
    }
  }
}

VoxelMap VoxelMap::load(std::istream& is) {
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "fastnav-voxmap" || version != 1) {
    throw std::runtime_error("VoxelMap::load: bad header");
  }
  Vec3 origin;
  double res = 0.0;
  Eigen::Vector3i dims;
  is >> tag >> origin.x() >> origin.y() >> origin.z();
  if (tag != "origin") throw std::runtime_error("VoxelMap::load: expected origin");
  is >> tag >> res;
  if (tag != "resolution") throw std::runtime_error("VoxelMap::load: expected resolution");
  is >> tag >> dims.x() >> dims.y() >> dims.z();
  if (tag != "dims") throw std::runtime_error("VoxelMap::load: expected dims");
  is >> tag;
  if (tag != "data" || !is) throw std::runtime_error("VoxelMap::load: expected data");
  VoxelMap map(origin, res, dims);
  std::string row;
  Eigen::Vector3i idx;
  for (idx.z() = 0; idx.z() < dims.z(); ++idx.z()) {
    for (idx.y() = 0; idx.y() < dims.y(); ++idx.y()) {
      if (!(is >> row) || row.size() != static_cast<std::size_t>(dims.x())) {
        throw std::runtime_error("VoxelMap::load: truncated data");
      }
      for (idx.x() = 0; idx.x() < dims.x(); ++idx.x()) {
        const char c = row[static_cast<std::size_t>(idx.x())];
        if (c == '1') {
          map.mark_occupied(idx);
        } else if (c != '0') {
          throw std::runtime_error("VoxelMap::load: bad data char");
        }
      }
    }
  }
  return map;
}

bool VoxelMap::same_occupancy(const VoxelMap& other) const {
  return dims_ == other.dims_ && origin_ == other.origin_ && res_ == other.res_ &&
         bits_ == other.bits_;
}

void insert_scan(VoxelMap& map, const std::vector<Vec3>& points) {
  map.insert_points(points);
}

bool is_occupied_inflated(const VoxelMap& map, const Vec3& pos, double robot_radius,
                          UnknownSpace unknown) {
  return map.is_occupied_inflated(pos, robot_radius, unknown);
}

VoxelMap rasterize_env(const GroundTruthEnv& env, double resolution) {
  const Vec3 extent = env.bounds.extent();
  Eigen::Vector3i dims;
  for (int axis = 0; axis < 3; ++axis) {
    dims[axis] = std::max(1, static_cast<int>(std::ceil(extent[axis] / resolution - 1e-9)));
  }
  VoxelMap map(env.bounds.min, resolution, dims);
  Eigen::Vector3i idx;
  for (idx.z() = 0; idx.z() < dims.z(); ++idx.z()) {
    for (idx.y() = 0; idx.y() < dims.y(); ++idx.y()) {
      for (idx.x() = 0; idx.x() < dims.x(); ++idx.x()) {
        const Vec3 center = map.index_to_center(idx);
        bool occ = false;
        for (const auto& b : env.boxes) {
          if (b.contains(center)) {
            occ = true;
            break;
          }
        }
        if (!occ) {
          for (const auto& c : env.cylinders) {
            if (c.contains(center)) {
              occ = true;
              break;
            }
          }
        }
        if (occ) map.mark_occupied(idx);
      }
    }
  }
  return map;
}

}  // namespace fastnav
