#pragma once

#include <span>
#include <vector>

#include "ptoric/symplectic.hpp"

namespace ptoric {

/// The product fibration psi(z) = z_1 ... z_{k+1} together with the k moment
/// functions F_i(z) = |z_i|^2 - |z_{i+1}|^2 (indices are 0-based in the API).
class PseudotoricStructure {
public:
  explicit PseudotoricStructure(int k);

  int k() const { return k_; }
  int dimension() const { return k_ + 1; }

  /// Diagonal of A_i: +1 at i, -1 at i+1, 0 elsewhere.
  std::span<const double> moment_weights(int i) const;

  /// <A_i z, z> for the standard Hermitian pairing.
  double moment_value(int i, const PhasePoint& p) const;
  ScalarField moment_field(int i) const;
  std::vector<double> moment_values(const PhasePoint& p) const;

private:
  void check_index(int i) const;
  void check_point(const PhasePoint& p) const;

  int k_;
  std::vector<std::vector<double>> weights_;
};

Complex psi_eval(const PhasePoint& p);

/// Entry j is prod_{m != j} z_m.
std::vector<Complex> psi_jacobian(const PhasePoint& p);

/// dpsi_p(u) = sum_j J_j u_j.
Complex psi_differential(const PhasePoint& p, const TangentVector& u);

/// Real basis (2k vectors) of ker dpsi_p: v_m and i*v_m for every m other than
/// the pivot index with the largest |J|.
std::vector<TangentVector> vertical_basis(const PhasePoint& p);

/// The unique H with dpsi_p(H) = u that is omega-orthogonal to ker dpsi_p.
/// Solves the (2k+2)x(2k+2) real system by pivoted LU.
TangentVector horizontal_lift(const PhasePoint& p, Complex u);

/// Same system solved as a least-squares problem (column-pivoting QR).
TangentVector horizontal_lift_least_squares(const PhasePoint& p, Complex u);

/// kappa(p) = sum_j prod_{m != j} |z_m|^2 = |psi_jacobian(p)|^2.
double proportionality_factor(const PhasePoint& p);

/// Level values (c_1, ..., c_k) of the moment functions.
struct LevelValues {
  std::vector<double> c;

  std::size_t size() const { return c.size(); }
  /// Indices with c_i outside the open interval (-1, 1). Advisory only.
  std::vector<std::size_t> out_of_range_indices() const;
  std::size_t zero_count() const;
  static LevelValues zeros(int k) { return LevelValues{std::vector<double>(k, 0.0)}; }
};

/// Polar description of a point of the fiber psi^{-1}(a).
struct FiberCoordinates {
  std::vector<double> radii;
  std::vector<double> phases;
  Complex base_value;
};

/// Radii r_1..r_{k+1} > 0 with r_i^2 - r_{i+1}^2 = c_i and prod r_j = abs_a.
std::vector<double> solve_fiber_radii(const LevelValues& c, double abs_a);

FiberCoordinates fiber_coordinates(const LevelValues& c, Complex a, std::span<const double> angles);

/// Point of S^a_c: theta_j = angles_j (j <= k), theta_{k+1} = arg(a) - sum angles.
PhasePoint fiber_torus_point(const LevelValues& c, Complex a, std::span<const double> angles);

/// Same with precomputed radii; used on grids where |a| repeats.
PhasePoint fiber_torus_point(std::span<const double> radii, Complex a,
                             std::span<const double> angles);

}  // namespace ptoric
