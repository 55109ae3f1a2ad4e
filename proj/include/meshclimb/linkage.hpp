#pragma once

#include <stdexcept>
#include <string>

#include "meshclimb/calibration.hpp"
#include "meshclimb/units.hpp"

namespace meshclimb {

struct ClawAngles;

/// Geometry of the crank-rocker leg drive and its cable cam. Lengths in mm,
/// angles in degrees.
struct LinkageParams {
  double crank_len = 5.0;
  double coupler_len = 15.0;
  double rocker_len = 13.0;
  double ground_len = 17.0;
  double cam_len = 11.0;
  double cam_eccentricity = 2.0;
  double cam_crank_offset = calibrated::kCamCrankOffset;
  double tarsus_len = 20.0;
  double claw_len = 4.5;

  /// Throws std::invalid_argument when a length is non-positive or the
  /// eccentricity exceeds the cam length.
  void validate() const;
};

enum class GrashofClass { crank_rocker, double_crank, double_rocker, change_point, non_grashof };

enum class Branch { open, crossed };

std::string to_string(GrashofClass c);
std::string to_string(Branch b);

/// Solved loop-closure configuration at one crank angle.
struct ClosurePose {
  double crank_angle = 0.0;    // deg, (-180, 180]
  double coupler_angle = 0.0;  // deg, (-180, 180]
  double rocker_angle = 0.0;   // deg, (-180, 180]
  double residual = 0.0;       // mm
  Branch branch = Branch::open;
};

struct TipPose {
  double x = 0.0;  // mm
  double y = 0.0;  // mm
  double tip_heading = 0.0;  // deg, direction of the claw segment
};

class NotAssemblable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BranchUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GrashofClass classify_grashof(const LinkageParams& params);

/// Solves the four-bar loop for the coupler and rocker angles. The ground
/// pivot of the crank sits at the origin and the rocker pivot at
/// (ground_len, 0). The open branch places the coupler/rocker joint to the
/// left of the line from the crank pin to the rocker pivot.
ClosurePose solve_closure(const LinkageParams& params, double crank_angle_deg,
                          Branch branch = Branch::open);

/// Loop-closure defect of an arbitrary pose, in mm.
double closure_residual(const LinkageParams& params, double crank_deg, double coupler_deg,
                        double rocker_deg);

/// Cable excursion produced by the eccentric cam: e * (1 - cos(crank - offset)).
double cam_cable_pull(const LinkageParams& params, double crank_angle_deg);

/// Crank pin and coupler/rocker joint positions of a solved pose.
Vec2 crank_pin(const LinkageParams& params, const ClosurePose& pose);
Vec2 coupler_endpoint(const LinkageParams& params, const ClosurePose& pose);

/// Claw tip in the linkage frame. The tarsus extends the coupler past the
/// rocker joint and is rotated by the bend angle; the claw segment is rotated
/// by bend + open.
TipPose tip_pose(const LinkageParams& params, const ClosurePose& pose, const ClawAngles& claw);

}  // namespace meshclimb
