#include "fastnav/refine.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fastnav {
namespace {

// Falling factorial k (k-1) ... (k-m+1); the coefficient picked up by the
// m-th derivative of s^k.
double falling(int k, int m) {
  double f = 1.0;
  for (int j = 0; j < m; ++j) f *= static_cast<double>(k - j);
  return f;
}

Vec3 endpoint_deriv(const EndpointState& s, int m) {
  switch (m) {
    case 1: return s.vel;
    case 2: return s.acc;
    case 3: return s.jerk;
    default: throw std::invalid_argument("endpoint derivative order must be 1..3");
  }
}

}  // namespace

void RefineParams::validate() const {
  if (continuity_order < 1 || continuity_order > 3) {
    throw std::invalid_argument("RefineParams: continuity_order must be in [1,3]");
  }
  if (order < 2 * continuity_order + 1) {
    throw std::invalid_argument("RefineParams: order must be >= 2*continuity_order + 1");
  }
  if (minimized_order < 1 || minimized_order > order) {
    throw std::invalid_argument("RefineParams: minimized_order must be in [1, order]");
  }
}

std::pair<std::vector<Vec3>, std::vector<double>> extract_waypoints(
    const PrimitiveTrajectory& traj) {
  if (traj.primitives.empty()) {
    throw std::invalid_argument("extract_waypoints: empty trajectory");
  }
  std::vector<Vec3> positions;
  std::vector<double> times;
  positions.reserve(traj.primitives.size() + 1);
  times.reserve(traj.primitives.size() + 1);
  positions.push_back(traj.primitives.front().start_pos);
  times.push_back(0.0);
  double t = 0.0;
  for (const auto& prim : traj.primitives) {
    t += prim.tau;
    positions.push_back(prim.end_pos());
    times.push_back(t);
  }
  return {positions, times};
}

PolyTrajectory fit_polynomial(const std::vector<Vec3>& positions,
                              const std::vector<double>& times,
                              const EndpointState& start_state,
                              const EndpointState& end_state,
                              const RefineParams& params, FitDiagnostics* diag) {
  params.validate();
  if (positions.size() < 2 || positions.size() != times.size()) {
    throw std::invalid_argument("fit_polynomial: need >= 2 waypoints with matching times");
  }
  const int n = static_cast<int>(positions.size()) - 1;  // segments
  for (int i = 0; i < n; ++i) {
    if (!(times[i + 1] > times[i])) {
      throw std::invalid_argument("fit_polynomial: times must be strictly increasing (index " +
                                  std::to_string(i + 1) + ")");
    }
  }
  if ((start_state.pos - positions.front()).norm() > 1e-6 ||
      (end_state.pos - positions.back()).norm() > 1e-6) {
    throw std::invalid_argument("fit_polynomial: endpoint states disagree with waypoints");
  }

  const int p = params.order;
  const int kc = params.continuity_order;
  const int m = params.minimized_order;
  const int nc = p + 1;       // coefficients per segment
  const int N = n * nc;       // unknowns per axis
  const int M = 2 * n + 2 * kc + (n - 1) * kc;  // constraint rows
  if (M > N) {
    throw std::invalid_argument("fit_polynomial: over-constrained (order too low for continuity)");
  }

  std::vector<double> T(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) T[static_cast<std::size_t>(i)] = times[i + 1] - times[i];

  // Objective on normalized coefficients: sum_i T_i^(1-2m) c_i' Qn c_i with
  // Qn_{jk} = ff(j,m) ff(k,m) / (j + k - 2m + 1) for j,k >= m.
  Eigen::MatrixXd Qn = Eigen::MatrixXd::Zero(nc, nc);
  for (int j = m; j <= p; ++j) {
    for (int k = m; k <= p; ++k) {
      Qn(j, k) = falling(j, m) * falling(k, m) / static_cast<double>(j + k - 2 * m + 1);
    }
  }

  const int dim = N + M;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    const double scale = std::pow(T[static_cast<std::size_t>(i)], 1 - 2 * m);
    K.block(i * nc, i * nc, nc, nc) = 2.0 * scale * Qn;
  }

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dim, 3);
  int row = N;  // constraint rows live below the quadratic block
  auto set_sym = [&](int r, int col, double value) {
    K(r, col) = value;
    K(col, r) = value;
  };

  // Segment endpoint positions: interpolation and C0 in one stroke.
  for (int i = 0; i < n; ++i) {
    set_sym(row, i * nc + 0, 1.0);
    for (int axis = 0; axis < 3; ++axis) rhs(row, axis) = positions[static_cast<std::size_t>(i)][axis];
    ++row;
    for (int k = 0; k <= p; ++k) set_sym(row, i * nc + k, 1.0);
    for (int axis = 0; axis < 3; ++axis) rhs(row, axis) = positions[static_cast<std::size_t>(i) + 1][axis];
    ++row;
  }
  // Boundary derivatives 1..kc at the very start and the very end.
  for (int d = 1; d <= kc; ++d) {
    const double scale = std::pow(T[0], -d);
    set_sym(row, d, falling(d, d) * scale);
    const Vec3 want = endpoint_deriv(start_state, d);
    for (int axis = 0; axis < 3; ++axis) rhs(row, axis) = want[axis];
    ++row;
  }
  for (int d = 1; d <= kc; ++d) {
    const double scale = std::pow(T[static_cast<std::size_t>(n) - 1], -d);
    for (int k = d; k <= p; ++k) set_sym(row, (n - 1) * nc + k, falling(k, d) * scale);
    const Vec3 want = endpoint_deriv(end_state, d);
    for (int axis = 0; axis < 3; ++axis) rhs(row, axis) = want[axis];
    ++row;
  }
  // Interior joints: derivative match through kc.
  for (int i = 1; i < n; ++i) {
    for (int d = 1; d <= kc; ++d) {
      const double left = std::pow(T[static_cast<std::size_t>(i) - 1], -d);
      const double right = std::pow(T[static_cast<std::size_t>(i)], -d);
      for (int k = d; k <= p; ++k) set_sym(row, (i - 1) * nc + k, falling(k, d) * left);
      set_sym(row, i * nc + d, -falling(d, d) * right);
      ++row;
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  const double rc = lu.rcond();
  if (diag) diag->rcond = rc;
  if (!std::isfinite(rc) || rc < 1e-15) {
    throw std::runtime_error("fit_polynomial: KKT system is numerically singular (rcond " +
                             std::to_string(rc) + ")");
  }
  const Eigen::MatrixXd sol = lu.solve(rhs);
  if (!sol.allFinite()) {
    throw std::runtime_error("fit_polynomial: solve produced non-finite coefficients");
  }

  PolyTrajectory out;
  out.start_time = times.front();
  out.segments.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    PolySegment& seg = out.segments[static_cast<std::size_t>(i)];
    seg.duration = T[static_cast<std::size_t>(i)];
    for (int axis = 0; axis < 3; ++axis) {
      seg.coeffs[static_cast<std::size_t>(axis)].resize(static_cast<std::size_t>(nc));
      // Normalized s = t/T: divide c_k by T^k to land in local-time powers.
      double tp = 1.0;
      for (int k = 0; k <= p; ++k) {
        seg.coeffs[static_cast<std::size_t>(axis)][static_cast<std::size_t>(k)] =
            sol(i * nc + k, axis) / tp;
        tp *= seg.duration;
      }
    }
  }
  return out;
}

double max_deviation(const PrimitiveTrajectory& prim, const PolyTrajectory& poly,
                     double dt) {
  if (dt <= 0.0) throw std::invalid_argument("max_deviation: dt must be positive");
  const double a = prim.total_duration;
  const double b = poly.total_duration();
  if (std::abs(a - b) > 1e-9) {
    throw std::invalid_argument("max_deviation: trajectory durations differ");
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(a / dt - 1e-9)));
  double worst = 0.0;
  Vec3 pos, vel, acc;
  for (int k = 0; k <= steps; ++k) {
    const double t = std::min(a, a * k / steps);
    prim.state_at(t, pos, vel, acc);
    const double d = (pos - poly_eval(poly, std::min(t, b), 0)).norm();
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace fastnav
