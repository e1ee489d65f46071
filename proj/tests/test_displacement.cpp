#include <doctest.h>

#include <numbers>

#include "ptoric/displacement.hpp"
#include "test_util.hpp"

using namespace ptoric;
using std::numbers::pi;

namespace {
TorusSpec make_spec(int k, Loop loop, std::vector<double> c = {}) {
  if (c.empty()) c.assign(k, 0.0);
  return TorusSpec{PseudotoricStructure(k), std::move(loop), LevelValues{std::move(c)}};
}

CutProfile circle_profile(double strength = 1.0) {
  return make_cut_profile(require_avoiding_ray(Loop::circle({2.0, 0.0}, 0.5)), strength);
}
}  // namespace

TEST_CASE("avoiding rays") {
  const auto ray = find_avoiding_ray(Loop::circle({2.0, 0.0}, 0.5));
  REQUIRE(ray.has_value());
  CHECK(std::abs(std::remainder(ray->angle - pi, 2 * pi)) < 1e-12);
  CHECK(ray->min_distance > 1e-6 * ray->r_max);
  CHECK(std::abs(ray->theta_mid) < 1e-9);
  CHECK(ray->span == doctest::Approx(2 * std::asin(0.25)).epsilon(1e-5));
  CHECK(ray->r_min == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(ray->r_max == doctest::Approx(2.5).epsilon(1e-9));

  CHECK_FALSE(find_avoiding_ray(Loop::circle({0.0, 0.0}, 1.0)).has_value());
  CHECK_THROWS_AS(require_avoiding_ray(Loop::circle({0.0, 0.0}, 1.0)), InvalidArgument);
  try {
    require_avoiding_ray(Loop::circle({0.0, 0.0}, 1.0));
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).rfind("no avoiding ray", 0) == 0);
  }
  CHECK_THROWS_AS(find_avoiding_ray(Loop::circle({2.0, 0.0}, 0.5), 16), InvalidArgument);

  const Loop twist = twist_loop(SectorSpec::standard(2), SectorCircle::default_for(2));
  const AvoidingRay tr = require_avoiding_ray(twist);
  double clearance = pi;
  for (int i = 0; i < 4096; ++i) {
    clearance = std::min(clearance, std::abs(std::remainder(std::arg(twist(i / 4096.0)) - tr.angle, 2 * pi)));
  }
  CHECK(clearance > 0.1);
  CHECK(tr.span < pi);
}

TEST_CASE("profile validation") {
  CutProfile p = circle_profile();
  CHECK_NOTHROW(p.validate());
  CHECK(p.delta == doctest::Approx(0.25 * 1.5));
  CHECK(p.delta_prime == doctest::Approx(0.5 * 1.5));
  p.span = pi;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("unsupported angular span"), InvalidArgument);
  p = circle_profile();
  p.delta_prime = p.delta;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = circle_profile();
  p.delta_prime = 2.0 * p.r_min;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("base function") {
  const CutProfile p = circle_profile(1.3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const Complex w = std::polar(p.delta * u(rng), 2 * pi * u(rng));
    CHECK(base_value(p, w) == 0.0);
    CHECK(base_gradient(p, w) == Complex(0.0));
  }
  CHECK(base_value(p, 0.0) == 0.0);
  CHECK(smoothstep_cutoff(p, p.delta) == 0.0);
  CHECK(smoothstep_cutoff(p, p.delta_prime) == 1.0);
  CHECK(smoothstep_cutoff(p, 10.0) == 1.0);

  // gradient and cutoff derivative against central differences
  for (int n = 0; n < 200; ++n) {
    const Complex w = std::polar(p.delta + 3.0 * u(rng), 2 * pi * u(rng));
    const double h = 1e-6;
    const double fx = (base_value(p, w + h) - base_value(p, w - h)) / (2 * h);
    const double fy = (base_value(p, w + Complex(0, h)) - base_value(p, w - Complex(0, h))) / (2 * h);
    CHECK(std::abs(base_gradient(p, w) - Complex(fx, fy)) <= 1e-6 * (1.0 + std::abs(base_gradient(p, w))));
    const double r = std::abs(w);
    const double dchi = (smoothstep_cutoff(p, r + h) - smoothstep_cutoff(p, r - h)) / (2 * h);
    CHECK(std::abs(smoothstep_cutoff_derivative(p, r) - dchi) <= 1e-6);
    CHECK(base_field(p, w) == hamiltonian_field(base_hamiltonian(p), PhasePoint({w})).components[0]);
  }
}

TEST_CASE("radial speed on the loop region") {
  const CutProfile p = circle_profile(0.8);
  const double bound = p.strength * std::cos(p.span / 2) / p.r_max;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double r = p.r_min + (p.r_max - p.r_min) * i / 20.0;
      const double th = p.theta_mid + p.span * (j / 20.0 - 0.5);
      const Complex w = std::polar(r, th);
      const double radial = std::real(base_field(p, w) * std::conj(w)) / r;
      CHECK(radial >= bound * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("base flow matches the closed form") {
  const CutProfile p = circle_profile(1.0);
  const ScalarField f = base_hamiltonian(p);
  for (double th0 : {-0.2, 0.0, 0.2}) {
    const Complex w0 = std::polar(2.0, th0);
    for (double t : {0.1, 0.5, 1.0}) {
      const FlowResult res = flow_integrate(f, PhasePoint({w0}), t, {1e-2, 10.0, 1e-12});
      const double r = std::sqrt(4.0 + 2.0 * std::cos(th0 - p.theta_mid) * t);
      CHECK(std::abs(res.point[0] - std::polar(r, th0)) <= 1e-8);
    }
  }
}

TEST_CASE("lifted hamiltonian") {
  const CutProfile p = circle_profile();
  const ScalarField lifted = lift_hamiltonian(p);
  std::mt19937_64 rng(6);
  for (int k : {1, 2, 3}) {
    const PseudotoricStructure s(k);
    // the singular fiber and its neighbourhood
    for (int n = 0; n < 20; ++n) {
      const PhasePoint base = ptoric::testing::random_point(k, rng);
      std::vector<Complex> z(base.coords().begin(), base.coords().end());
      z[n % (k + 1)] = 0.0;
      CHECK(lifted(PhasePoint(z)) == 0.0);
      z[n % (k + 1)] = 1e-3;
      if (std::abs(psi_eval(PhasePoint(z))) <= p.delta) CHECK(lifted(PhasePoint(z)) == 0.0);
    }
    for (int n = 0; n < 50; ++n) {
      const PhasePoint q = ptoric::testing::random_point(k, rng);
      CHECK(lifted(q) == base_value(p, psi_eval(q)));
      const RealGradient g = lifted.gradient(q);
      const RealGradient fd = ScalarField(lifted).finite_difference_gradient(q);
      double gn = 0.0, diff = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        gn = std::max(gn, std::abs(g[i]));
        diff = std::max(diff, std::abs(g[i] - fd[i]));
      }
      CHECK(diff <= 1e-6 * (1.0 + gn));
      for (int i = 0; i < k; ++i) CHECK(std::abs(poisson_bracket(lifted, s.moment_field(i), q)) <= 1e-10 * (1.0 + gn));
      const double kappa = proportionality_factor(q);
      if (kappa >= 1e-6 && std::abs(base_field(p, psi_eval(q))) > 1e-8) {
        const Parallelism par = projection_parallelism(p, q);
        CHECK(par.angle <= 1e-6);
        CHECK(std::abs(par.ratio - kappa) <= 1e-6 * kappa);
        CHECK(par.kappa == doctest::Approx(kappa));
      }
    }
  }
}

TEST_CASE("displacement of a Chekanov torus") {
  const TorusSpec spec = make_spec(1, Loop::circle({2.0, 0.0}, 0.5));
  const CutProfile profile = circle_profile();
  DisplaceOptions opt;
  opt.resolution = TorusResolution::uniform(1, 8, 8);
  opt.keep_clouds = true;
  const DisplacementReport r = displace(spec, profile, {1e-2, 10.0, 1e-8}, opt);
  CHECK(r.certificate);
  CHECK_FALSE(r.timed_out);
  CHECK(r.base_radius_margin > 0.05 * r.r_max);
  CHECK(r.moment_drift <= 1e-6);
  CHECK(r.parallelism_defect <= 1e-6);
  CHECK(r.ratio_defect <= 1e-6);
  CHECK(r.radial_monotone);
  CHECK(r.samples == 64);
  REQUIRE(r.flowed.size() == 64);
  REQUIRE(r.original.size() == 64);
  // direct disjointness of the two clouds
  double sep = std::numeric_limits<double>::infinity();
  for (const auto& a : r.original)
    for (const auto& b : r.flowed) sep = std::min(sep, ptoric::testing::max_abs_diff(a, b));
  CHECK(sep > 0.0);
  CHECK(r.min_separation > 0.0);
  for (const auto& b : r.flowed) CHECK(std::abs(psi_eval(b)) > r.r_max);

  // a flow too short to escape reports diagnostics instead of a certificate
  const DisplacementReport capped = displace(spec, profile, {1e-2, 0.05, 1e-8}, opt);
  CHECK_FALSE(capped.certificate);
  CHECK(capped.timed_out);
  CHECK(capped.slowest_kappa > 0.0);
  CHECK(capped.slowest_radius <= r.r_max * 1.1);
}

TEST_CASE("displacement rejects unsupported inputs") {
  DisplaceOptions opt;
  opt.resolution = TorusResolution::uniform(1, 8, 8);
  CHECK_THROWS_AS(displace(make_spec(1, Loop::circle({0.0, 0.0}, 1.0)), circle_profile(), {1e-2, 10.0, 1e-8}, opt),
                  InvalidArgument);
  CutProfile off = circle_profile();
  off.r_max = 1.0;  // inconsistent with the loop
  CHECK_THROWS_AS(displace(make_spec(1, Loop::circle({2.0, 0.0}, 0.5)), off, {1e-2, 10.0, 1e-8}, opt),
                  InvalidArgument);
}
