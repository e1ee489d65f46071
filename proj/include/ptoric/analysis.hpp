#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "ptoric/torus.hpp"

namespace ptoric {

/// Uniform random point of the ball of radius max_norm in C^{k+1}.
PhasePoint random_phase_point(int k, double max_norm, std::mt19937_64& rng);

struct VerificationTolerances {
  double commutator = 1e-10;
  double vertical = 1e-10;
  double fiber_drift = 1e-8;
};

struct VerificationReport {
  int k = 0;
  int n_points = 0;
  std::uint64_t seed = 0;
  double flow_time = 1.0;
  double max_commutator = 0.0;       ///< max |{F_i, F_j}|
  double max_vertical_defect = 0.0;  ///< max |dpsi(X_{F_i})|
  double max_fiber_drift = 0.0;      ///< max |psi(flow(F_i, p, 1)) - psi(p)|
  VerificationTolerances tolerances;
  bool pass = false;
};

/// Checks commutation, verticality of the moment fields and fiber preservation
/// under their flows at n_points seeded random points of norm <= 3.
VerificationReport verify_structure(const PseudotoricStructure& structure, int n_points,
                                    std::uint64_t seed = 0, const VerificationTolerances& tol = {},
                                    const FlowParams& flow = {1e-2, 1.0, 1e-10});

struct LagrangianDefect {
  double max_defect = 0.0;  ///< max over grid and frame pairs of |omega(v_i,v_j)|/(|v_i||v_j|)
  std::size_t samples = 0;
  TorusResolution resolution;
};

LagrangianDefect lagrangian_defect(const TorusSpec& spec, const TorusResolution& resolution);
LagrangianDefect lagrangian_defect(const TorusSpec& spec, int n_t, int n_phi);

/// Normalized frame defect at one point.
double frame_defect(const std::vector<TangentVector>& frame);

struct RefinementCheck {
  LagrangianDefect coarse;
  LagrangianDefect fine;  ///< 2x in t and in the first angle
  double relative_change = 0.0;
  bool stable = false;
};

inline constexpr double kDefectStabilityFloor = 1e-5;
inline constexpr double kDefectStabilityRatio = 0.5;
/// The t-vector is a central difference, so defects carry roundoff of order
/// eps / kFrameStep ~ 2e-10 times the point scale; below this floor (~2e-7)
/// relative changes are noise.
inline constexpr double kDefectNoiseFloor = 1e3 * std::numeric_limits<double>::epsilon() / kFrameStep;

/// Stability is only asserted once the coarse defect is below 1e-5 and the
/// defects rise above the roundoff floor.
RefinementCheck lagrangian_refinement(const TorusSpec& spec, const TorusResolution& coarse);

enum class Verdict { Equivalent, NotEquivalent, Unknown };
std::string to_string(Verdict v);

struct EquivalenceVerdict {
  Verdict verdict = Verdict::Unknown;
  std::string reason_code;
  std::string reason;
  std::array<double, 2> areas{};
  std::array<LoopType, 2> types{};
  std::size_t zero_count = 0;
};

/// Same levels and same type: Equivalent iff the enclosed areas agree to
/// 1e-8 (1 + max |area|). Different types or levels: Unknown.
EquivalenceVerdict decide_equivalence(const TorusSpec& first, const TorusSpec& second);

}  // namespace ptoric
