#include "ptoric/displacement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ptoric {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRaySamples = 4096;

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

}  // namespace

std::optional<AvoidingRay> find_avoiding_ray(const Loop& loop, int n_dirs) {
  if (n_dirs < 64) throw InvalidArgument("find_avoiding_ray: n_dirs must be at least 64");
  std::vector<Complex> w(kRaySamples);
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
  for (int i = 0; i < kRaySamples; ++i) {
    w[i] = loop(static_cast<double>(i) / kRaySamples);
    r_min = std::min(r_min, std::abs(w[i]));
    r_max = std::max(r_max, std::abs(w[i]));
  }
  if (!(r_min > 0.0)) throw InvalidArgument("find_avoiding_ray: loop passes through the origin");

  const double threshold = 1e-6 * r_max;
  std::optional<AvoidingRay> best;
  double best_clearance = -1.0;
  for (int d = 0; d < n_dirs; ++d) {
    const double alpha = 2.0 * kPi * d / n_dirs;
    const Complex rot = std::polar(1.0, -alpha);
    double dist = std::numeric_limits<double>::infinity();
    double clearance = kPi;
    for (const Complex& z : w) {
      const Complex u = z * rot;
      dist = std::min(dist, u.real() <= 0.0 ? std::abs(z) : std::abs(u.imag()));
      clearance = std::min(clearance, std::abs(std::arg(u)));
    }
    if (!(dist > threshold)) continue;
    const bool better = !best || dist > best->min_distance + 1e-9 * r_max ||
                        (dist >= best->min_distance - 1e-9 * r_max && clearance > best_clearance);
    if (better) {
      best = AvoidingRay{alpha, dist, 0.0, 0.0, r_min, r_max};
      best_clearance = clearance;
    }
  }
  if (!best) return std::nullopt;

  // angles about the opposite direction are continuous because the ray is avoided
  const Complex opposite = std::polar(1.0, -(best->angle + kPi));
  double lo = kPi, hi = -kPi;
  for (const Complex& z : w) {
    const double phi = std::arg(z * opposite);
    lo = std::min(lo, phi);
    hi = std::max(hi, phi);
  }
  best->span = hi - lo;
  best->theta_mid = wrap_angle(best->angle + kPi + 0.5 * (hi + lo));
  return best;
}

AvoidingRay require_avoiding_ray(const Loop& loop, int n_dirs) {
  const int w = winding_number(loop);
  if (w != 0) {
    throw InvalidArgument("no avoiding ray: loop has winding number " + std::to_string(w) +
                          " and no avoiding curve exists for winding != 0 (rays through origin)");
  }
  auto ray = find_avoiding_ray(loop, n_dirs);
  if (!ray) throw InvalidArgument("no avoiding ray: every scanned ray meets the loop");
  return *ray;
}

void CutProfile::validate() const {
  if (!(span < kPi)) throw InvalidArgument("unsupported angular span (must be below pi)");
  if (!(strength > 0.0)) throw InvalidArgument("cut profile: strength must be positive");
  if (!(delta > 0.0 && delta < delta_prime && delta_prime < r_min && r_min <= r_max)) {
    throw InvalidArgument("cut profile: need 0 < delta < delta' < r_min <= r_max");
  }
}

CutProfile make_cut_profile(const AvoidingRay& ray, double strength, double delta_fraction,
                            double delta_prime_fraction) {
  if (!(delta_fraction > 0.0 && delta_fraction < delta_prime_fraction && delta_prime_fraction < 1.0)) {
    throw InvalidArgument("cut profile: need 0 < delta_fraction < delta_prime_fraction < 1");
  }
  CutProfile p;
  p.ray_angle = ray.angle;
  p.delta = delta_fraction * ray.r_min;
  p.delta_prime = delta_prime_fraction * ray.r_min;
  p.r_min = ray.r_min;
  p.r_max = ray.r_max;
  p.span = ray.span;
  p.theta_mid = ray.theta_mid;
  p.strength = strength;
  p.validate();
  return p;
}

double smoothstep_cutoff(const CutProfile& profile, double r) {
  const double x = std::clamp((r - profile.delta) / (profile.delta_prime - profile.delta), 0.0, 1.0);
  return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

double smoothstep_cutoff_derivative(const CutProfile& profile, double r) {
  const double width = profile.delta_prime - profile.delta;
  const double x = (r - profile.delta) / width;
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 30.0 * x * x * (1.0 - x) * (1.0 - x) / width;
}

double base_value(const CutProfile& profile, Complex w) {
  const double r = std::abs(w);
  if (r <= profile.delta) return 0.0;
  const double y = (w * std::polar(1.0, -profile.theta_mid)).imag();
  return profile.strength * smoothstep_cutoff(profile, r) * y / r;
}

Complex base_gradient(const CutProfile& profile, Complex w) {
  const double r = std::abs(w);
  if (r <= profile.delta) return Complex(0.0);
  const Complex u = w * std::polar(1.0, -profile.theta_mid);
  const double x = u.real(), y = u.imag();
  const double chi = smoothstep_cutoff(profile, r);
  const double dchi = smoothstep_cutoff_derivative(profile, r);
  const double r2 = r * r, r3 = r2 * r;
  const double fx = profile.strength * x * y * (dchi / r2 - chi / r3);
  const double fy = profile.strength * (dchi * y * y / r2 + chi * x * x / r3);
  return std::polar(1.0, profile.theta_mid) * Complex(fx, fy);
}

Complex base_field(const CutProfile& profile, Complex w) {
  return Complex(0.0, -1.0) * base_gradient(profile, w);
}

ScalarField base_hamiltonian(const CutProfile& profile) {
  profile.validate();
  return ScalarField(
      [profile](const PhasePoint& p) {
        if (p.size() != 1) throw InvalidArgument("base Hamiltonian lives on the base plane");
        return base_value(profile, p[0]);
      },
      "base cut profile f",
      [profile](const PhasePoint& p) {
        if (p.size() != 1) throw InvalidArgument("base Hamiltonian lives on the base plane");
        const Complex g = base_gradient(profile, p[0]);
        return RealGradient{g.real(), g.imag()};
      });
}

ScalarField lift_hamiltonian(const CutProfile& profile) {
  profile.validate();
  return ScalarField([profile](const PhasePoint& p) { return base_value(profile, psi_eval(p)); },
                     "lifted cut profile F = f o psi",
                     [profile](const PhasePoint& p) {
                       const Complex g = base_gradient(profile, psi_eval(p));
                       const std::vector<Complex> jac = psi_jacobian(p);
                       RealGradient out(2 * p.size());
                       for (std::size_t j = 0; j < jac.size(); ++j) {
                         const Complex gj = g * std::conj(jac[j]);
                         out[2 * j] = gj.real();
                         out[2 * j + 1] = gj.imag();
                       }
                       return out;
                     });
}

Parallelism projection_parallelism(const CutProfile& profile, const PhasePoint& p) {
  const ScalarField lifted = lift_hamiltonian(profile);
  const Complex projected = psi_differential(p, hamiltonian_field(lifted, p));
  const Complex base = base_field(profile, psi_eval(p));
  Parallelism out;
  out.kappa = proportionality_factor(p);
  if (std::abs(base) == 0.0 || std::abs(projected) == 0.0) return out;
  out.angle = std::abs(std::arg(projected / base));
  out.ratio = std::abs(projected) / std::abs(base);
  return out;
}

namespace {

double min_pairwise_distance(const std::vector<PhasePoint>& a, const std::vector<PhasePoint>& b) {
  std::vector<std::pair<double, std::size_t>> by_norm(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) by_norm[i] = {b[i].norm(), i};
  std::sort(by_norm.begin(), by_norm.end());
  double best = std::numeric_limits<double>::infinity();
  auto dist = [](const PhasePoint& p, const PhasePoint& q) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) s += std::norm(p[j] - q[j]);
    return std::sqrt(s);
  };
  for (const PhasePoint& p : a) {
    const double n = p.norm();
    // | |p| - |q| | <= |p - q| prunes the scan
    auto it = std::lower_bound(by_norm.begin(), by_norm.end(), std::make_pair(n, std::size_t{0}));
    for (auto up = it; up != by_norm.end() && up->first - n < best; ++up) {
      best = std::min(best, dist(p, b[up->second]));
    }
    for (auto down = it; down != by_norm.begin();) {
      --down;
      if (n - down->first >= best) break;
      best = std::min(best, dist(p, b[down->second]));
    }
  }
  return best;
}

}  // namespace

DisplacementReport displace(const TorusSpec& spec, const CutProfile& profile,
                            const FlowParams& params, const DisplaceOptions& options) {
  spec.validate();
  profile.validate();
  params.validate();
  if (classify_type(spec.loop) != LoopType::Chekanov) {
    throw InvalidArgument("displace: no avoiding ray exists for a standard-type loop");
  }
  if (!(options.chunk_time > 0.0) || !(options.target_margin >= 0.0)) {
    throw InvalidArgument("displace: chunk_time must be positive and target_margin non-negative");
  }

  const TorusSample sample = build_torus(spec, options.resolution);
  for (const Complex& a : sample.base_values) {
    if (!(std::abs(a) > profile.delta_prime) ||
        !(std::abs(wrap_angle(std::arg(a) - profile.theta_mid)) < 0.5 * kPi)) {
      throw InvalidArgument("displace: cut profile is inconsistent with the loop");
    }
  }

  const ScalarField lifted = lift_hamiltonian(profile);
  DisplacementReport report;
  report.samples = sample.points.size();
  report.resolution = options.resolution;

  std::vector<PhasePoint> state = sample.points;
  std::vector<double> radius(state.size());
  std::vector<double> start_angle(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const Complex a = psi_eval(state[i]);
    radius[i] = std::abs(a);
    start_angle[i] = std::arg(a);
    report.r_max = std::max(report.r_max, radius[i]);
  }
  const double target = (1.0 + options.target_margin) * std::max(report.r_max, profile.r_max);

  double elapsed = 0.0;
  while (*std::min_element(radius.begin(), radius.end()) < target) {
    const double remaining = params.max_time - elapsed;
    if (remaining <= 1e-12 * params.max_time) {
      report.timed_out = true;
      break;
    }
    const double dt = std::min(options.chunk_time, remaining);
    FlowParams chunk_params = params;
    chunk_params.max_time = std::max(dt, params.step_size);
    for (std::size_t i = 0; i < state.size(); ++i) {
      FlowResult moved = flow_integrate(lifted, state[i], dt, chunk_params);
      const Complex a = psi_eval(moved.point);
      const double r = std::abs(a);
      if (r < radius[i] * (1.0 - 1e-12) ||
          std::abs(wrap_angle(std::arg(a) - start_angle[i])) > 1e-6) {
        report.radial_monotone = false;
      }
      radius[i] = r;
      state[i] = std::move(moved.point);
    }
    elapsed += dt;
  }
  report.time_elapsed = elapsed;

  const auto slowest = std::min_element(radius.begin(), radius.end());
  report.slowest_sample = static_cast<std::size_t>(slowest - radius.begin());
  report.slowest_radius = *slowest;
  report.slowest_kappa = proportionality_factor(state[report.slowest_sample]);
  report.base_radius_margin = *slowest - report.r_max;

  for (std::size_t i = 0; i < state.size(); ++i) {
    for (int m = 0; m < spec.k(); ++m) {
      report.moment_drift = std::max(
          report.moment_drift, std::abs(spec.structure.moment_value(m, state[i]) - spec.levels.c[m]));
    }
    report.energy_drift =
        std::max(report.energy_drift, std::abs(lifted(state[i]) - lifted(sample.points[i])));
    for (const PhasePoint* p : std::array<const PhasePoint*, 2>{&sample.points[i], &state[i]}) {
      const Parallelism par = projection_parallelism(profile, *p);
      if (par.kappa < 1e-6 || par.ratio == 0.0) continue;
      report.parallelism_defect = std::max(report.parallelism_defect, par.angle);
      report.ratio_defect = std::max(report.ratio_defect, std::abs(par.ratio / par.kappa - 1.0));
    }
  }
  report.min_separation = min_pairwise_distance(sample.points, state);
  report.certificate =
      report.base_radius_margin > 0.0 && report.moment_drift <= options.moment_tolerance;
  if (options.keep_clouds) {
    report.original = sample.points;
    report.flowed = std::move(state);
  }
  return report;
}

DisplacementReport displace_with_refinement(const TorusSpec& spec, const CutProfile& profile,
                                            const FlowParams& params,
                                            const DisplaceOptions& options) {
  DisplacementReport report = displace(spec, profile, params, options);
  DisplaceOptions refined = options;
  refined.keep_clouds = false;
  refined.resolution.n_t *= 2;
  if (!refined.resolution.n_phi.empty()) refined.resolution.n_phi[0] *= 2;
  const DisplacementReport fine = displace(spec, profile, params, refined);
  report.refined_margin = fine.base_radius_margin;
  const double m = report.base_radius_margin;
  report.margin_relative_change =
      m != 0.0 ? std::abs(fine.base_radius_margin - m) / std::abs(m)
               : std::numeric_limits<double>::infinity();
  report.refinement_stable = *report.margin_relative_change <= kMarginStabilityRatio;
  report.certificate = report.certificate && fine.certificate && *report.refinement_stable;
  return report;
}

}  // namespace ptoric
