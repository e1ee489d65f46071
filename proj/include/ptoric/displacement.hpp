#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptoric/torus.hpp"

namespace ptoric {

/// A ray {s e^{i angle}, s >= 0} missing the loop, and the loop's angular
/// extent seen from the opposite direction.
struct AvoidingRay {
  double angle = 0.0;
  double min_distance = 0.0;  ///< min distance from loop samples to the ray
  double theta_mid = 0.0;     ///< middle of the loop's angular extent
  double span = 0.0;          ///< angular extent of the loop
  double r_min = 0.0;
  double r_max = 0.0;
};

/// Scans n_dirs equally spaced directions; picks the one farthest from the
/// loop (ties broken by angular clearance). Empty when every ray meets the loop.
std::optional<AvoidingRay> find_avoiding_ray(const Loop& loop, int n_dirs = 256);

/// Throws InvalidArgument for standard-type loops or when no ray avoids the loop.
AvoidingRay require_avoiding_ray(const Loop& loop, int n_dirs = 256);

/// Parameters of f(w) = strength * chi(|w|) * sin(arg w - theta_mid), where chi
/// is the quintic smoothstep from 0 on [0, delta] to 1 on [delta_prime, inf).
struct CutProfile {
  double ray_angle = 0.0;
  double delta = 0.25;
  double delta_prime = 0.5;
  double r_min = 1.0;
  double r_max = 2.0;
  double span = 1.0;
  double theta_mid = 0.0;
  double strength = 1.0;

  void validate() const;
};

/// delta = delta_fraction * r_min and delta_prime = delta_prime_fraction * r_min.
CutProfile make_cut_profile(const AvoidingRay& ray, double strength = 1.0,
                            double delta_fraction = 0.25, double delta_prime_fraction = 0.5);

double smoothstep_cutoff(const CutProfile& profile, double r);
double smoothstep_cutoff_derivative(const CutProfile& profile, double r);

double base_value(const CutProfile& profile, Complex w);
/// f_x + i f_y.
Complex base_gradient(const CutProfile& profile, Complex w);
/// X_f in the base plane (same convention as phase space).
Complex base_field(const CutProfile& profile, Complex w);

/// f as a field on the one-dimensional "phase space" C_a.
ScalarField base_hamiltonian(const CutProfile& profile);

/// F = f o psi on C^{k+1}, gradient by the chain rule through psi_jacobian.
ScalarField lift_hamiltonian(const CutProfile& profile);

/// Angle between dpsi(X_F(p)) and X_f(psi(p)) and the ratio |dpsi X_F| / |X_f|.
struct Parallelism {
  double angle = 0.0;
  double ratio = 0.0;
  double kappa = 0.0;
};
Parallelism projection_parallelism(const CutProfile& profile, const PhasePoint& p);

struct DisplaceOptions {
  TorusResolution resolution;
  double target_margin = 0.1;   ///< stop once min |psi| >= (1 + target_margin) * r_max
  double chunk_time = 0.05;     ///< flow time between stopping checks
  double moment_tolerance = 1e-6;
  bool keep_clouds = false;
};

struct DisplacementReport {
  double time_elapsed = 0.0;
  double min_separation = 0.0;
  double base_radius_margin = 0.0;
  double r_max = 0.0;  ///< max |psi| over the original samples
  double moment_drift = 0.0;
  double parallelism_defect = 0.0;
  double ratio_defect = 0.0;  ///< max relative deviation of the ratio from kappa
  double energy_drift = 0.0;
  bool radial_monotone = true;
  bool timed_out = false;
  bool certificate = false;
  std::size_t samples = 0;
  TorusResolution resolution;
  // diagnostics for the slowest sample
  std::size_t slowest_sample = 0;
  double slowest_radius = 0.0;
  double slowest_kappa = 0.0;
  // optional refinement check
  std::optional<double> refined_margin;
  std::optional<double> margin_relative_change;
  std::optional<bool> refinement_stable;

  std::vector<PhasePoint> original;
  std::vector<PhasePoint> flowed;
};

inline constexpr double kMarginStabilityRatio = 0.2;

/// Flows every grid sample of the torus under X_F for a common time until
/// all samples project beyond (1 + target_margin) r_max, capped at params.max_time.
DisplacementReport displace(const TorusSpec& spec, const CutProfile& profile,
                            const FlowParams& params, const DisplaceOptions& options);

/// displace() plus a second run at 2x in t and in the first angle.
DisplacementReport displace_with_refinement(const TorusSpec& spec, const CutProfile& profile,
                                            const FlowParams& params,
                                            const DisplaceOptions& options);

}  // namespace ptoric
