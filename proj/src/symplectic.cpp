#include "ptoric/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ptoric {

PhasePoint::PhasePoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw InvalidArgument("PhasePoint: at least one coordinate is required");
  }
  for (const Complex& z : coords_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidArgument("PhasePoint: non-finite coordinate");
    }
  }
}

PhasePoint PhasePoint::ones(int k) {
  if (k < 0) throw InvalidArgument("PhasePoint::ones: negative k");
  return PhasePoint(std::vector<Complex>(static_cast<std::size_t>(k) + 1, Complex(1.0, 0.0)));
}

double PhasePoint::norm() const {
  double s = 0.0;
  for (const Complex& z : coords_) s += std::norm(z);
  return std::sqrt(s);
}

double TangentVector::norm() const {
  double s = 0.0;
  for (const Complex& z : components) s += std::norm(z);
  return std::sqrt(s);
}

TangentVector& TangentVector::operator+=(const TangentVector& other) {
  if (other.size() != size()) throw InvalidArgument("TangentVector: dimension mismatch");
  for (std::size_t j = 0; j < size(); ++j) components[j] += other.components[j];
  return *this;
}

TangentVector& TangentVector::operator*=(double s) {
  for (Complex& z : components) z *= s;
  return *this;
}

TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }

TangentVector operator-(TangentVector a, const TangentVector& b) {
  if (a.size() != b.size()) throw InvalidArgument("TangentVector: dimension mismatch");
  for (std::size_t j = 0; j < a.size(); ++j) a.components[j] -= b.components[j];
  return a;
}

TangentVector operator*(double s, TangentVector v) { return v *= s; }

TangentVector operator*(Complex s, TangentVector v) {
  for (Complex& z : v.components) z *= s;
  return v;
}

ScalarField::ScalarField(ValueFn value, std::string description, GradientFn gradient)
    : value_(std::move(value)), gradient_(std::move(gradient)), description_(std::move(description)) {
  if (!value_) throw InvalidArgument("ScalarField: empty value function");
}

ScalarField ScalarField::constant(double value) {
  return ScalarField([value](const PhasePoint&) { return value; }, "constant",
                     [](const PhasePoint& p) { return RealGradient(2 * p.size(), 0.0); });
}

RealGradient ScalarField::gradient(const PhasePoint& p) const {
  RealGradient g = gradient_ ? gradient_(p) : finite_difference_gradient(p);
  if (g.size() != 2 * p.size()) {
    throw InvalidArgument("ScalarField '" + description_ + "': gradient has wrong dimension");
  }
  for (double x : g) {
    if (!std::isfinite(x)) {
      throw NumericalFailure("ScalarField '" + description_ + "': non-finite gradient");
    }
  }
  return g;
}

RealGradient ScalarField::finite_difference_gradient(const PhasePoint& p, double h) const {
  std::vector<Complex> work(p.coords().begin(), p.coords().end());
  RealGradient g(2 * p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (int part = 0; part < 2; ++part) {
      const Complex step = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
      const Complex saved = work[j];
      work[j] = saved + step;
      const double fp = value_(PhasePoint(work));
      work[j] = saved - step;
      const double fm = value_(PhasePoint(work));
      work[j] = saved;
      g[2 * j + part] = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

double directional_derivative(const RealGradient& gradient, const TangentVector& v) {
  if (gradient.size() != 2 * v.size()) {
    throw InvalidArgument("directional_derivative: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    s += gradient[2 * j] * v.components[j].real() + gradient[2 * j + 1] * v.components[j].imag();
  }
  return s;
}

double omega_eval(const TangentVector& u, const TangentVector& v) {
  if (u.size() != v.size()) throw InvalidArgument("omega_eval: dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    s += u.components[j].real() * v.components[j].imag() -
         u.components[j].imag() * v.components[j].real();
  }
  return s;
}

TangentVector hamiltonian_field_from_gradient(const RealGradient& gradient) {
  TangentVector x;
  x.components.resize(gradient.size() / 2);
  for (std::size_t j = 0; j < x.size(); ++j) {
    x.components[j] = Complex(gradient[2 * j + 1], -gradient[2 * j]);
  }
  return x;
}

TangentVector hamiltonian_field(const ScalarField& h, const PhasePoint& p) {
  return hamiltonian_field_from_gradient(h.gradient(p));
}

double poisson_bracket(const ScalarField& h, const ScalarField& g, const PhasePoint& p) {
  return omega_eval(hamiltonian_field(h, p), hamiltonian_field(g, p));
}

void FlowParams::validate() const {
  if (!(step_size > 0.0)) throw InvalidArgument("FlowParams: step_size must be positive");
  if (!(max_time > 0.0)) throw InvalidArgument("FlowParams: max_time must be positive");
  if (!(tolerance > 0.0)) throw InvalidArgument("FlowParams: tolerance must be positive");
  if (step_size > max_time) throw InvalidArgument("FlowParams: step_size exceeds max_time");
}

namespace {

using State = std::vector<Complex>;

void field_at(const ScalarField& h, const State& z, State& out) {
  const RealGradient g = h.gradient(PhasePoint(z));
  out.resize(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = Complex(g[2 * j + 1], -g[2 * j]);
}

double distance(const State& a, const State& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
  return std::sqrt(s);
}

}  // namespace

PhasePoint rk4_fixed(const ScalarField& h, const PhasePoint& p, double t, int n_steps) {
  if (n_steps < 1) throw InvalidArgument("rk4_fixed: n_steps must be positive");
  State z(p.coords().begin(), p.coords().end());
  State k1, k2, k3, k4, tmp(z.size());
  const double dt = t / n_steps;
  for (int s = 0; s < n_steps; ++s) {
    field_at(h, z, k1);
    for (std::size_t j = 0; j < z.size(); ++j) tmp[j] = z[j] + 0.5 * dt * k1[j];
    field_at(h, tmp, k2);
    for (std::size_t j = 0; j < z.size(); ++j) tmp[j] = z[j] + 0.5 * dt * k2[j];
    field_at(h, tmp, k3);
    for (std::size_t j = 0; j < z.size(); ++j) tmp[j] = z[j] + dt * k3[j];
    field_at(h, tmp, k4);
    for (std::size_t j = 0; j < z.size(); ++j) {
      z[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
  }
  return PhasePoint(std::move(z));
}

FlowResult flow_integrate(const ScalarField& h, const PhasePoint& p, double t,
                          const FlowParams& params) {
  params.validate();
  if (std::abs(t) > params.max_time) {
    std::ostringstream msg;
    msg << "flow_integrate: |t| = " << std::abs(t) << " exceeds max_time " << params.max_time;
    throw InvalidArgument(msg.str());
  }
  if (t == 0.0) return FlowResult{p, 0.0, 0, 0};

  const double h0 = h(p);
  int n = std::max(1, static_cast<int>(std::ceil(std::abs(t) / params.step_size)));
  PhasePoint previous = rk4_fixed(h, p, t, n);
  double diff = 0.0;
  for (int r = 1; r <= kMaxFlowRefinements; ++r) {
    n *= 2;
    PhasePoint current = rk4_fixed(h, p, t, n);
    diff = distance(State(current.coords().begin(), current.coords().end()),
                    State(previous.coords().begin(), previous.coords().end()));
    if (diff < params.tolerance) {
      const double drift = std::abs(h(current) - h0);
      return FlowResult{std::move(current), drift, n, r};
    }
    previous = std::move(current);
  }
  std::ostringstream msg;
  msg << "flow_integrate: step halving did not converge after " << kMaxFlowRefinements
      << " refinements (last difference " << diff << ")";
  throw FlowConvergenceError(msg.str(), previous, diff);
}

}  // namespace ptoric
