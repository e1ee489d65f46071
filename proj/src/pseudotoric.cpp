#include "ptoric/pseudotoric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ptoric {

PseudotoricStructure::PseudotoricStructure(int k) : k_(k) {
  if (k < 1) throw InvalidArgument("PseudotoricStructure: k must be positive");
  weights_.assign(k, std::vector<double>(k + 1, 0.0));
  for (int i = 0; i < k; ++i) {
    weights_[i][i] = 1.0;
    weights_[i][i + 1] = -1.0;
  }
}

void PseudotoricStructure::check_index(int i) const {
  if (i < 0 || i >= k_) {
    throw InvalidArgument("moment index " + std::to_string(i) + " out of range for k = " +
                          std::to_string(k_));
  }
}

void PseudotoricStructure::check_point(const PhasePoint& p) const {
  if (p.k() != k_) throw InvalidArgument("point dimension does not match the structure");
}

std::span<const double> PseudotoricStructure::moment_weights(int i) const {
  check_index(i);
  return weights_[i];
}

double PseudotoricStructure::moment_value(int i, const PhasePoint& p) const {
  check_index(i);
  check_point(p);
  return std::norm(p[i]) - std::norm(p[i + 1]);
}

std::vector<double> PseudotoricStructure::moment_values(const PhasePoint& p) const {
  std::vector<double> out(k_);
  for (int i = 0; i < k_; ++i) out[i] = moment_value(i, p);
  return out;
}

ScalarField PseudotoricStructure::moment_field(int i) const {
  check_index(i);
  const int k = k_;
  return ScalarField(
      [i, k](const PhasePoint& p) {
        if (p.k() != k) throw InvalidArgument("point dimension does not match the structure");
        return std::norm(p[i]) - std::norm(p[i + 1]);
      },
      "F_" + std::to_string(i + 1),
      [i, k](const PhasePoint& p) {
        if (p.k() != k) throw InvalidArgument("point dimension does not match the structure");
        RealGradient g(2 * p.size(), 0.0);
        g[2 * i] = 2.0 * p[i].real();
        g[2 * i + 1] = 2.0 * p[i].imag();
        g[2 * i + 2] = -2.0 * p[i + 1].real();
        g[2 * i + 3] = -2.0 * p[i + 1].imag();
        return g;
      });
}

Complex psi_eval(const PhasePoint& p) {
  Complex a(1.0, 0.0);
  for (const Complex& z : p.coords()) a *= z;
  return a;
}

std::vector<Complex> psi_jacobian(const PhasePoint& p) {
  const std::size_t n = p.size();
  // prefix/suffix products so that zero coordinates are handled exactly
  std::vector<Complex> prefix(n + 1, Complex(1.0)), suffix(n + 1, Complex(1.0));
  for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] * p[j];
  for (std::size_t j = n; j-- > 0;) suffix[j] = suffix[j + 1] * p[j];
  std::vector<Complex> jac(n);
  for (std::size_t j = 0; j < n; ++j) jac[j] = prefix[j] * suffix[j + 1];
  return jac;
}

Complex psi_differential(const PhasePoint& p, const TangentVector& u) {
  if (u.size() != p.size()) throw InvalidArgument("psi_differential: dimension mismatch");
  const std::vector<Complex> jac = psi_jacobian(p);
  Complex s(0.0);
  for (std::size_t j = 0; j < jac.size(); ++j) s += jac[j] * u.components[j];
  return s;
}

double proportionality_factor(const PhasePoint& p) {
  double s = 0.0;
  for (const Complex& j : psi_jacobian(p)) s += std::norm(j);
  return s;
}

std::vector<TangentVector> vertical_basis(const PhasePoint& p) {
  const std::vector<Complex> jac = psi_jacobian(p);
  const auto pivot_it = std::max_element(jac.begin(), jac.end(), [](Complex a, Complex b) {
    return std::abs(a) < std::abs(b);
  });
  if (std::abs(*pivot_it) == 0.0) {
    throw InvalidArgument("vertical_basis: dpsi vanishes (critical point of psi)");
  }
  const std::size_t pivot = static_cast<std::size_t>(pivot_it - jac.begin());
  std::vector<TangentVector> basis;
  basis.reserve(2 * (jac.size() - 1));
  for (std::size_t m = 0; m < jac.size(); ++m) {
    if (m == pivot) continue;
    TangentVector v{std::vector<Complex>(jac.size(), Complex(0.0))};
    v.components[pivot] = jac[m] / jac[pivot];
    v.components[m] = -1.0;
    basis.push_back(v);
    basis.push_back(Complex(0.0, 1.0) * v);
  }
  return basis;
}

namespace {

struct LiftSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

LiftSystem lift_system(const PhasePoint& p, Complex u) {
  const std::vector<Complex> jac = psi_jacobian(p);
  const std::vector<TangentVector> vertical = vertical_basis(p);
  const Eigen::Index n = static_cast<Eigen::Index>(2 * p.size());
  LiftSystem sys{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  for (std::size_t j = 0; j < jac.size(); ++j) {
    const auto c = static_cast<Eigen::Index>(2 * j);
    sys.matrix(0, c) = jac[j].real();
    sys.matrix(0, c + 1) = -jac[j].imag();
    sys.matrix(1, c) = jac[j].imag();
    sys.matrix(1, c + 1) = jac[j].real();
  }
  sys.rhs(0) = u.real();
  sys.rhs(1) = u.imag();
  for (std::size_t r = 0; r < vertical.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r + 2);
    for (std::size_t j = 0; j < p.size(); ++j) {
      const auto c = static_cast<Eigen::Index>(2 * j);
      // omega(H, v) = sum x_j Im v_j - y_j Re v_j
      sys.matrix(row, c) = vertical[r].components[j].imag();
      sys.matrix(row, c + 1) = -vertical[r].components[j].real();
    }
  }
  return sys;
}

TangentVector to_tangent(const Eigen::VectorXd& x) {
  TangentVector h{std::vector<Complex>(static_cast<std::size_t>(x.size() / 2))};
  for (std::size_t j = 0; j < h.size(); ++j) {
    h.components[j] = Complex(x(2 * j), x(2 * j + 1));
  }
  return h;
}

}  // namespace

TangentVector horizontal_lift(const PhasePoint& p, Complex u) {
  const LiftSystem sys = lift_system(p, u);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.matrix);
  if (!lu.isInvertible()) throw NumericalFailure("horizontal_lift: singular lift system");
  return to_tangent(lu.solve(sys.rhs));
}

TangentVector horizontal_lift_least_squares(const PhasePoint& p, Complex u) {
  const LiftSystem sys = lift_system(p, u);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.matrix);
  if (qr.rank() < sys.matrix.cols()) {
    throw NumericalFailure("horizontal_lift_least_squares: rank-deficient lift system");
  }
  return to_tangent(qr.solve(sys.rhs));
}

std::vector<std::size_t> LevelValues::out_of_range_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > -1.0 && c[i] < 1.0)) out.push_back(i);
  }
  return out;
}

std::size_t LevelValues::zero_count() const {
  return static_cast<std::size_t>(std::count(c.begin(), c.end(), 0.0));
}

std::vector<double> solve_fiber_radii(const LevelValues& levels, double abs_a) {
  if (!(abs_a > 0.0) || !std::isfinite(abs_a)) {
    throw InvalidArgument("solve_fiber_radii: |a| must be positive and finite");
  }
  for (double c : levels.c) {
    if (!std::isfinite(c)) throw InvalidArgument("solve_fiber_radii: non-finite level value");
  }
  const std::size_t n = levels.size() + 1;
  // r_j^2 = r_1^2 - s_j with s_j = c_1 + ... + c_{j-1}; shift by the largest s so
  // the unknown y = min_j r_j^2 ranges over (0, inf) and the offsets d_j are >= 0.
  std::vector<double> s(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) s[j] = s[j - 1] + levels.c[j - 1];
  const double s_max = *std::max_element(s.begin(), s.end());
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = s_max - s[j];

  const double target = std::log(abs_a);
  // h(u) = 1/2 sum log(e^u + d_j) - log|a| is convex, increasing, h' in [1/2, n/2].
  auto eval = [&](double u, double& h, double& dh) {
    const double y = std::exp(u);
    h = -target;
    dh = 0.0;
    for (double dj : d) {
      h += 0.5 * std::log(y + dj);
      dh += 0.5 * y / (y + dj);
    }
  };

  double hi = 2.0 * target / static_cast<double>(n);  // h(hi) >= 0
  double h = 0.0, dh = 0.0;
  eval(hi, h, dh);
  double lo = hi - 2.0 * h - 1.0;  // h(lo) < 0 since h' >= 1/2
  double u = hi;
  for (int iter = 0; iter < 200; ++iter) {
    eval(u, h, dh);
    if (std::abs(h) <= 1e-15) break;
    if (h > 0.0) hi = u; else lo = u;
    double next = u - h / dh;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-16 * (1.0 + std::abs(u))) {
      u = next;
      break;
    }
    u = next;
  }
  eval(u, h, dh);
  if (!(std::abs(h) <= 1e-12)) {
    throw NumericalFailure("solve_fiber_radii: root finding did not converge");
  }
  const double y = std::exp(u);
  std::vector<double> radii(n);
  for (std::size_t j = 0; j < n; ++j) radii[j] = std::sqrt(y + d[j]);
  return radii;
}

PhasePoint fiber_torus_point(std::span<const double> radii, Complex a,
                             std::span<const double> angles) {
  if (a == Complex(0.0)) throw InvalidArgument("fiber_torus_point: a = 0 is the singular fiber");
  if (angles.size() + 1 != radii.size()) {
    throw InvalidArgument("fiber_torus_point: need k angles for k+1 radii");
  }
  const std::size_t k = angles.size();
  std::vector<Complex> z(k + 1);
  double angle_sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    z[j] = std::polar(radii[j], angles[j]);
    angle_sum += angles[j];
  }
  z[k] = radii[k] * (a / std::abs(a)) * std::polar(1.0, -angle_sum);
  return PhasePoint(std::move(z));
}

FiberCoordinates fiber_coordinates(const LevelValues& c, Complex a, std::span<const double> angles) {
  if (a == Complex(0.0)) throw InvalidArgument("fiber_coordinates: a = 0 is the singular fiber");
  if (angles.size() != c.size()) throw InvalidArgument("fiber_coordinates: need k angles");
  FiberCoordinates fc;
  fc.radii = solve_fiber_radii(c, std::abs(a));
  fc.phases.assign(angles.begin(), angles.end());
  fc.phases.push_back(std::arg(a) - std::accumulate(angles.begin(), angles.end(), 0.0));
  fc.base_value = a;
  return fc;
}

PhasePoint fiber_torus_point(const LevelValues& c, Complex a, std::span<const double> angles) {
  if (a == Complex(0.0)) throw InvalidArgument("fiber_torus_point: a = 0 is the singular fiber");
  if (angles.size() != c.size()) throw InvalidArgument("fiber_torus_point: need k angles");
  const std::vector<double> radii = solve_fiber_radii(c, std::abs(a));
  return fiber_torus_point(radii, a, angles);
}

}  // namespace ptoric
