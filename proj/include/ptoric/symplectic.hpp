#pragma once

// Symplectic conventions on C^{n}:
//   omega(u, v) = sum_j Im(conj(u_j) v_j)            (= sum dx_j ^ dy_j)
//   omega(X_H, .) = dH   =>   X_H = H_y - i H_x = -2i dH/dconj(z)
// Every other module takes these from here.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptoric/errors.hpp"

namespace ptoric {

using Complex = std::complex<double>;

/// Central finite-difference step used when a field has no analytic gradient.
inline constexpr double kFiniteDifferenceStep = 1e-5;

/// A point of C^{k+1}. A single coordinate is allowed and is used for the base plane C_a.
class PhasePoint {
public:
  PhasePoint() = default;
  explicit PhasePoint(std::vector<Complex> coords);

  static PhasePoint ones(int k);

  int k() const { return static_cast<int>(coords_.size()) - 1; }
  std::size_t size() const { return coords_.size(); }
  const Complex& operator[](std::size_t j) const { return coords_[j]; }
  std::span<const Complex> coords() const { return coords_; }
  double norm() const;

private:
  std::vector<Complex> coords_;
};

/// Tangent vector in complex components; the base point is implied by context.
struct TangentVector {
  std::vector<Complex> components;

  std::size_t size() const { return components.size(); }
  double norm() const;
  TangentVector& operator+=(const TangentVector& other);
  TangentVector& operator*=(double s);
};

TangentVector operator+(TangentVector a, const TangentVector& b);
TangentVector operator-(TangentVector a, const TangentVector& b);
TangentVector operator*(double s, TangentVector v);
/// Multiplication by a complex scalar (i.e. J applied when s = i).
TangentVector operator*(Complex s, TangentVector v);

/// Real gradient laid out as (dH/dx_1, dH/dy_1, ..., dH/dx_n, dH/dy_n).
using RealGradient = std::vector<double>;

class ScalarField {
public:
  using ValueFn = std::function<double(const PhasePoint&)>;
  using GradientFn = std::function<RealGradient(const PhasePoint&)>;

  ScalarField(ValueFn value, std::string description, GradientFn gradient = {});

  static ScalarField constant(double value);

  double operator()(const PhasePoint& p) const { return value_(p); }
  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }
  /// Analytic gradient when available, central differences otherwise.
  RealGradient gradient(const PhasePoint& p) const;
  RealGradient finite_difference_gradient(const PhasePoint& p,
                                          double h = kFiniteDifferenceStep) const;
  const std::string& description() const { return description_; }

private:
  ValueFn value_;
  GradientFn gradient_;
  std::string description_;
};

/// dH_p(v) from a real gradient.
double directional_derivative(const RealGradient& gradient, const TangentVector& v);

double omega_eval(const TangentVector& u, const TangentVector& v);

TangentVector hamiltonian_field(const ScalarField& h, const PhasePoint& p);

/// Same as above but from a precomputed gradient.
TangentVector hamiltonian_field_from_gradient(const RealGradient& gradient);

/// {H, G}(p) = omega(X_H, X_G).
double poisson_bracket(const ScalarField& h, const ScalarField& g, const PhasePoint& p);

struct FlowParams {
  double step_size = 1e-2;
  double max_time = 10.0;
  double tolerance = 1e-10;

  void validate() const;
};

struct FlowResult {
  PhasePoint point;
  double energy_drift = 0.0;  ///< |H(point) - H(start)|
  int steps = 0;              ///< RK4 steps in the accepted run
  int refinements = 0;        ///< number of step halvings performed
};

/// Thrown when step halving fails to converge; carries the last iterate.
class FlowConvergenceError : public NumericalFailure {
public:
  FlowConvergenceError(const std::string& what, PhasePoint last_iterate, double last_difference)
      : NumericalFailure(what),
        last_iterate_(std::move(last_iterate)),
        last_difference_(last_difference) {}

  const PhasePoint& last_iterate() const { return last_iterate_; }
  double last_difference() const { return last_difference_; }

private:
  PhasePoint last_iterate_;
  double last_difference_;
};

inline constexpr int kMaxFlowRefinements = 12;

/// Time-t map of X_H: classical RK4, halving the step until two consecutive
/// runs agree to params.tolerance (Euclidean norm), at most 12 halvings.
FlowResult flow_integrate(const ScalarField& h, const PhasePoint& p, double t,
                          const FlowParams& params);

/// One fixed-step RK4 run with n_steps steps. Exposed for convergence studies.
PhasePoint rk4_fixed(const ScalarField& h, const PhasePoint& p, double t, int n_steps);

}  // namespace ptoric
