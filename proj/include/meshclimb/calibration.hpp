#pragma once

// Frozen output of `meshclimb calibrate` (fit seeds 1001-1200). Regenerate
// with that preset and copy the values from calibrated.cfg.
namespace meshclimb::calibrated {

inline constexpr double kCamCrankOffset = 109.5;           // deg
inline constexpr double kNoLoadSpeed = 80.95153;           // motor rev/s at 5 V
inline constexpr double kMeshCompareNoLoadSpeed = 304.2252;
inline constexpr double kStiffnessExpandable = 0.034289;   // N/mm
inline constexpr double kStiffnessUnexpandable = 0.02447;  // N/mm
inline constexpr double kStiffnessSoft = 0.03880;          // N/mm
inline constexpr double kStiffnessRigid = 0.5;             // N/mm, not fitted
inline constexpr double kCaptureRadius = 0.8751;           // mm
inline constexpr double kSnagfreeUnexpandable = 0.9066;
inline constexpr double kSnagfreeSoft = 0.6645;

}  // namespace meshclimb::calibrated
