#include "meshclimb/linkage.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "meshclimb/claw.hpp"

namespace meshclimb {

void LinkageParams::validate() const {
  const std::array<double, 8> lengths = {crank_len, coupler_len, rocker_len, ground_len,
                                         cam_len,   tarsus_len,  claw_len,   cam_eccentricity};
  for (double l : lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("linkage lengths must be positive and finite");
    }
  }
  if (cam_eccentricity > cam_len) {
    throw std::invalid_argument("cam eccentricity must not exceed the cam length");
  }
}

std::string to_string(GrashofClass c) {
  switch (c) {
    case GrashofClass::crank_rocker: return "crank_rocker";
    case GrashofClass::double_crank: return "double_crank";
    case GrashofClass::double_rocker: return "double_rocker";
    case GrashofClass::change_point: return "change_point";
    case GrashofClass::non_grashof: return "non_grashof";
  }
  return "unknown";
}

std::string to_string(Branch b) { return b == Branch::open ? "open" : "crossed"; }

GrashofClass classify_grashof(const LinkageParams& p) {
  const std::array<double, 4> links = {p.ground_len, p.crank_len, p.coupler_len, p.rocker_len};
  const auto [min_it, max_it] = std::minmax_element(links.begin(), links.end());
  const double s = *min_it;
  const double l = *max_it;
  const double pq = p.ground_len + p.crank_len + p.coupler_len + p.rocker_len - s - l;
  const double tol = 1e-12 * (s + l + pq);

  if (std::abs((s + l) - pq) <= tol) return GrashofClass::change_point;
  if (s + l > pq) return GrashofClass::non_grashof;

  // Grashof chain: the role of the shortest link decides the inversion.
  const auto shortest = static_cast<std::size_t>(min_it - links.begin());
  switch (shortest) {
    case 0: return GrashofClass::double_crank;
    case 1:
    case 3: return GrashofClass::crank_rocker;
    default: return GrashofClass::double_rocker;
  }
}

double closure_residual(const LinkageParams& p, double crank_deg, double coupler_deg,
                        double rocker_deg) {
  // a*e^{i t2} + b*e^{i t3} - c*e^{i t4} - d = 0
  const double t2 = deg_to_rad(crank_deg);
  const double t3 = deg_to_rad(coupler_deg);
  const double t4 = deg_to_rad(rocker_deg);
  const double rx = p.crank_len * std::cos(t2) + p.coupler_len * std::cos(t3) -
                    p.rocker_len * std::cos(t4) - p.ground_len;
  const double ry =
      p.crank_len * std::sin(t2) + p.coupler_len * std::sin(t3) - p.rocker_len * std::sin(t4);
  return std::hypot(rx, ry);
}

namespace {

struct Angles {
  double coupler;
  double rocker;
};

// Newton polish on the two closure equations; the analytic solution is
// normally already at machine precision.
Angles polish(const LinkageParams& p, double t2, Angles a) {
  for (int it = 0; it < 8; ++it) {
    const double rx = p.crank_len * std::cos(t2) + p.coupler_len * std::cos(a.coupler) -
                      p.rocker_len * std::cos(a.rocker) - p.ground_len;
    const double ry = p.crank_len * std::sin(t2) + p.coupler_len * std::sin(a.coupler) -
                      p.rocker_len * std::sin(a.rocker);
    if (std::hypot(rx, ry) < 1e-14) break;
    const double j11 = -p.coupler_len * std::sin(a.coupler);
    const double j12 = p.rocker_len * std::sin(a.rocker);
    const double j21 = p.coupler_len * std::cos(a.coupler);
    const double j22 = -p.rocker_len * std::cos(a.rocker);
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-15) break;
    a.coupler -= (j22 * rx - j12 * ry) / det;
    a.rocker -= (-j21 * rx + j11 * ry) / det;
  }
  return a;
}

}  // namespace

ClosurePose solve_closure(const LinkageParams& p, double crank_angle_deg, Branch branch) {
  const double t2 = deg_to_rad(crank_angle_deg);
  const Vec2 pin{p.crank_len * std::cos(t2), p.crank_len * std::sin(t2)};
  const Vec2 to_pivot = Vec2{p.ground_len, 0.0} - pin;
  const double dist = norm(to_pivot);

  const double b = p.coupler_len;
  const double c = p.rocker_len;
  if (dist > b + c || dist < std::abs(b - c) || dist == 0.0) {
    throw NotAssemblable("four-bar cannot close at crank angle " +
                         std::to_string(crank_angle_deg) + " deg");
  }

  // Circle-circle intersection: coupler circle about the pin, rocker circle
  // about the ground pivot.
  const double along = (b * b - c * c + dist * dist) / (2.0 * dist);
  const double h2 = b * b - along * along;
  const double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
  if (h < 1e-12 * b && branch == Branch::crossed) {
    throw BranchUnavailable("branches coincide at crank angle " +
                            std::to_string(crank_angle_deg) + " deg");
  }
  const Vec2 u = (1.0 / dist) * to_pivot;
  const Vec2 n{-u.y, u.x};
  const double side = branch == Branch::open ? 1.0 : -1.0;
  const Vec2 joint = pin + along * u + (side * h) * n;

  const Vec2 coupler_vec = joint - pin;
  const Vec2 rocker_vec = joint - Vec2{p.ground_len, 0.0};
  Angles a{std::atan2(coupler_vec.y, coupler_vec.x), std::atan2(rocker_vec.y, rocker_vec.x)};
  a = polish(p, t2, a);

  ClosurePose pose;
  pose.crank_angle = wrap_deg180(crank_angle_deg);
  pose.coupler_angle = wrap_deg180(rad_to_deg(a.coupler));
  pose.rocker_angle = wrap_deg180(rad_to_deg(a.rocker));
  pose.residual = closure_residual(p, crank_angle_deg, rad_to_deg(a.coupler), rad_to_deg(a.rocker));
  pose.branch = branch;
  return pose;
}

double cam_cable_pull(const LinkageParams& p, double crank_angle_deg) {
  const double delta = deg_to_rad(wrap_deg180(crank_angle_deg - p.cam_crank_offset));
  return p.cam_eccentricity * (1.0 - std::cos(delta));
}

Vec2 crank_pin(const LinkageParams& p, const ClosurePose& pose) {
  const double t2 = deg_to_rad(pose.crank_angle);
  return {p.crank_len * std::cos(t2), p.crank_len * std::sin(t2)};
}

Vec2 coupler_endpoint(const LinkageParams& p, const ClosurePose& pose) {
  const double t3 = deg_to_rad(pose.coupler_angle);
  return crank_pin(p, pose) + p.coupler_len * Vec2{std::cos(t3), std::sin(t3)};
}

TipPose tip_pose(const LinkageParams& p, const ClosurePose& pose, const ClawAngles& claw) {
  const double axis = deg_to_rad(pose.coupler_angle);
  const double tarsus_dir = axis + deg_to_rad(claw.bend);
  const double claw_dir = tarsus_dir + deg_to_rad(claw.open);
  const Vec2 tip = coupler_endpoint(p, pose) +
                   p.tarsus_len * Vec2{std::cos(tarsus_dir), std::sin(tarsus_dir)} +
                   p.claw_len * Vec2{std::cos(claw_dir), std::sin(claw_dir)};
  return {tip.x, tip.y, wrap_deg180(rad_to_deg(claw_dir))};
}

}  // namespace meshclimb
