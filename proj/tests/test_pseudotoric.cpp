#include <doctest.h>

#include <numbers>

#include "ptoric/pseudotoric.hpp"
#include "test_util.hpp"

using namespace ptoric;
using ptoric::testing::random_point;
using ptoric::testing::random_vector;

namespace {
const Complex I(0.0, 1.0);

// u - v = c, u v = a^2 for u = r_1^2, v = r_2^2, in cancellation-free form.
std::pair<double, double> quadratic_radii(double c, double abs_a) {
  const double root = std::sqrt(c * c + 4.0 * abs_a * abs_a);
  double u, v;
  if (c >= 0) {
    u = 0.5 * (c + root);
    v = abs_a * abs_a / u;
  } else {
    v = 0.5 * (-c + root);
    u = abs_a * abs_a / v;
  }
  return {std::sqrt(u), std::sqrt(v)};
}
}  // namespace

TEST_CASE("psi and its jacobian") {
  CHECK(psi_eval(PhasePoint({1.0, 2.0, 3.0})) == Complex(6.0));
  CHECK(psi_eval(PhasePoint({1.0, 0.0, 3.0})) == Complex(0.0));
  for (double alpha : {0.0, 0.4, 2.9}) {
    CHECK(std::abs(psi_eval(PhasePoint({std::polar(1.0, alpha), std::polar(1.0, -alpha)})) - 1.0) < 1e-15);
  }
  for (const Complex& j : psi_jacobian(PhasePoint::ones(3))) CHECK(j == Complex(1.0));
  const auto jac = psi_jacobian(PhasePoint({0.0, 2.0}));
  CHECK(jac[0] == Complex(2.0));
  CHECK(jac[1] == Complex(0.0));

  std::mt19937_64 rng(1);
  for (int n = 0; n < 50; ++n) {
    const PhasePoint p = random_point(3, rng);
    const TangentVector u = random_vector(4, rng);
    const double h = 1e-6;
    std::vector<Complex> plus(p.coords().begin(), p.coords().end()), minus = plus;
    for (std::size_t j = 0; j < plus.size(); ++j) {
      plus[j] += h * u.components[j];
      minus[j] -= h * u.components[j];
    }
    const Complex fd = (psi_eval(PhasePoint(plus)) - psi_eval(PhasePoint(minus))) / (2 * h);
    CHECK(std::abs(psi_differential(p, u) - fd) <= 1e-6);
  }
}

TEST_CASE("moment matrices and values") {
  const PseudotoricStructure s(3);
  const auto w = s.moment_weights(1);
  CHECK(std::vector<double>(w.begin(), w.end()) == std::vector<double>{0, 1, -1, 0});
  for (int i = 0; i < 3; ++i) CHECK(s.moment_value(i, PhasePoint::ones(3)) == 0.0);
  CHECK(s.moment_value(0, PhasePoint({2.0, 1.0, 1.0, 1.0})) == 3.0);
  CHECK_THROWS_AS(s.moment_value(3, PhasePoint::ones(3)), InvalidArgument);
  CHECK_THROWS_AS(s.moment_value(-1, PhasePoint::ones(3)), InvalidArgument);
  CHECK_THROWS_AS(s.moment_value(0, PhasePoint::ones(2)), InvalidArgument);
  CHECK_THROWS_AS(PseudotoricStructure(0), InvalidArgument);
}

TEST_CASE("moment functions pairwise commute") {
  for (int k : {1, 2, 3, 5}) {
    const PseudotoricStructure s(k);
    std::mt19937_64 rng(100 + k);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
      const PhasePoint p = random_point(k, rng);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          worst = std::max(worst, std::abs(poisson_bracket(s.moment_field(i), s.moment_field(j), p)));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("moment fields are vertical") {
  std::mt19937_64 rng(9);
  const PseudotoricStructure s(4);
  for (int n = 0; n < 50; ++n) {
    const PhasePoint p = random_point(4, rng);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(psi_differential(p, hamiltonian_field(s.moment_field(i), p))) <= 1e-10);
    }
  }
}

TEST_CASE("vertical basis") {
  const auto b = vertical_basis(PhasePoint::ones(1));
  REQUIRE(b.size() == 2);
  CHECK(b[0].components == std::vector<Complex>{1.0, -1.0});
  CHECK(b[1].components == std::vector<Complex>{I, -I});

  const auto c = vertical_basis(PhasePoint({0.0, 2.0}));
  REQUIRE(c.size() == 2);
  for (const auto& v : c) {
    CHECK(v.components[0] == Complex(0.0));
    CHECK(std::abs(v.components[1]) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(vertical_basis(PhasePoint({0.0, 0.0, 1.0})), InvalidArgument);

  std::mt19937_64 rng(21);
  for (int k : {1, 2, 4}) {
    for (int n = 0; n < 20; ++n) {
      const PhasePoint p = random_point(k, rng);
      const auto basis = vertical_basis(p);
      CHECK(basis.size() == static_cast<std::size_t>(2 * k));
      CHECK(ptoric::testing::real_rank(basis) == 2 * k);
      const double jn = std::sqrt(proportionality_factor(p));
      for (const auto& v : basis) CHECK(std::abs(psi_differential(p, v)) <= 1e-10 * v.norm() * jn);
    }
  }
}

TEST_CASE("horizontal lift") {
  const TangentVector h = horizontal_lift(PhasePoint::ones(1), 1.0);
  CHECK(std::abs(h.components[0] - 0.5) < 1e-14);
  CHECK(std::abs(h.components[1] - 0.5) < 1e-14);

  std::mt19937_64 rng(33);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k : {1, 2, 3}) {
    for (int n = 0; n < 30; ++n) {
      const PhasePoint p = random_point(k, rng);
      const Complex u(g(rng), g(rng));
      const TangentVector lift = horizontal_lift(p, u);
      CHECK(std::abs(psi_differential(p, lift) - u) <= 1e-10);
      for (const auto& v : vertical_basis(p)) CHECK(std::abs(omega_eval(lift, v)) <= 1e-10);

      // independent closed form: the omega-complement of a complex hyperplane is its
      // Hermitian complement, spanned by conj(J)
      const auto jac = psi_jacobian(p);
      const double kappa = proportionality_factor(p);
      for (std::size_t j = 0; j < jac.size(); ++j) {
        CHECK(std::abs(lift.components[j] - u * std::conj(jac[j]) / kappa) <= 1e-9 * (1.0 + std::abs(u)));
      }
      const TangentVector ls = horizontal_lift_least_squares(p, u);
      CHECK((ls - lift).norm() <= 1e-9);
      const TangentVector twice = horizontal_lift(p, 2.0 * u);
      CHECK((twice - 2.0 * lift).norm() <= 1e-12 * (1.0 + lift.norm()));
    }
  }
  CHECK_THROWS(horizontal_lift(PhasePoint({0.0, 0.0, 2.0}), 1.0));
}

TEST_CASE("proportionality factor") {
  CHECK(proportionality_factor(PhasePoint::ones(3)) == 4.0);
  CHECK(proportionality_factor(PhasePoint({0.0, 2.0})) == 4.0);
  CHECK(proportionality_factor(PhasePoint({0.0, 0.0, 2.0})) == 0.0);
}

TEST_CASE("fiber radii") {
  auto r = solve_fiber_radii(LevelValues{{0.0}}, 1.0);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-14));
  r = solve_fiber_radii(LevelValues{{0.0, 0.0}}, 8.0);
  for (double x : r) CHECK(x == doctest::Approx(2.0).epsilon(1e-14));

  r = solve_fiber_radii(LevelValues{{0.5}}, 1.0);
  const double r1 = std::sqrt((0.5 + std::sqrt(4.25)) / 2.0);
  CHECK(r1 == doctest::Approx(1.131713).epsilon(1e-6));
  CHECK(std::abs(r[0] - r1) <= 1e-14);
  CHECK(std::abs(r[1] - 1.0 / r1) <= 1e-14);

  CHECK_THROWS_AS(solve_fiber_radii(LevelValues{{0.1}}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(solve_fiber_radii(LevelValues{{0.1}}, -1.0), InvalidArgument);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> cdist(-3.0, 3.0), logdist(-6.0, 6.0);
  for (int n = 0; n < 300; ++n) {
    const int k = 1 + n % 4;
    LevelValues c;
    for (int i = 0; i < k; ++i) c.c.push_back(cdist(rng));
    const double abs_a = std::exp(logdist(rng));
    const auto radii = solve_fiber_radii(c, abs_a);
    double prod = 1.0;
    for (double x : radii) prod *= x;
    CHECK(std::abs(prod - abs_a) <= 1e-10 * abs_a);
    for (int i = 0; i < k; ++i) {
      CHECK(std::abs(radii[i] * radii[i] - radii[i + 1] * radii[i + 1] - c.c[i]) <= 1e-12 * (1.0 + radii[i] * radii[i]));
    }
    if (k == 1) {
      const auto [u, v] = quadratic_radii(c.c[0], abs_a);
      CHECK(std::abs(radii[0] - u) <= 1e-12 * u);
      CHECK(std::abs(radii[1] - v) <= 1e-12 * v);
    }
  }
}

TEST_CASE("radii product is increasing along the bracket") {
  const std::vector<double> c = {0.7, -1.3, 0.2};
  std::vector<double> s = {0.0};
  for (double x : c) s.push_back(s.back() + x);
  const double s_max = *std::max_element(s.begin(), s.end());
  double previous = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double r1_sq = s_max + 0.05 * i;
    double prod = 1.0;
    for (double sj : s) prod *= std::sqrt(r1_sq - sj);
    CHECK(prod > previous);
    previous = prod;
  }
}

TEST_CASE("fiber torus points") {
  for (int k : {1, 2, 4}) {
    const PhasePoint p = fiber_torus_point(LevelValues::zeros(k), 1.0, std::vector<double>(k, 0.0));
    for (const Complex& z : p.coords()) CHECK(std::abs(z - 1.0) < 1e-14);
  }
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.9, 0.9), ang(0.0, 7.0), mag(0.1, 5.0);
  for (int n = 0; n < 100; ++n) {
    const int k = 1 + n % 3;
    const PseudotoricStructure s(k);
    LevelValues c;
    std::vector<double> angles;
    for (int i = 0; i < k; ++i) {
      c.c.push_back(u(rng));
      angles.push_back(ang(rng));
    }
    const Complex a = std::polar(mag(rng), ang(rng));
    const PhasePoint p = fiber_torus_point(c, a, angles);
    CHECK(std::abs(psi_eval(p) - a) <= 1e-10 * std::abs(a));
    for (int i = 0; i < k; ++i) CHECK(std::abs(s.moment_value(i, p) - c.c[i]) <= 1e-10);

    std::vector<double> shifted = angles;
    shifted[n % k] += 2.0 * std::numbers::pi;
    CHECK(ptoric::testing::max_abs_diff(fiber_torus_point(c, a, shifted), p) <= 1e-12 * (1.0 + p.norm()));

    const FiberCoordinates fc = fiber_coordinates(c, a, angles);
    double sum = 0.0;
    for (double th : fc.phases) sum += th;
    CHECK(std::abs(std::remainder(sum - std::arg(a), 2 * std::numbers::pi)) <= 1e-10);
  }
  CHECK_THROWS_AS(fiber_torus_point(LevelValues::zeros(1), 0.0, std::vector<double>{0.0}), InvalidArgument);
}

TEST_CASE("level values outside (-1, 1) are only flagged") {
  const LevelValues c{{0.5, 1.5, -1.0, 0.0}};
  CHECK(c.out_of_range_indices() == std::vector<std::size_t>{1, 2});
  CHECK(c.zero_count() == 1);
  CHECK_NOTHROW(solve_fiber_radii(c, 2.0));
}
