#include "ptoric/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ptoric {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void TorusSpec::validate() const {
  if (static_cast<int>(levels.size()) != k()) {
    throw InvalidArgument("torus spec: expected " + std::to_string(k()) + " level values, got " +
                          std::to_string(levels.size()));
  }
  for (double c : levels.c) {
    if (!std::isfinite(c)) throw InvalidArgument("torus spec: non-finite level value");
  }
  loop.validate();
}

TorusResolution TorusResolution::uniform(int k, int n_t, int n_phi) {
  return TorusResolution{n_t, std::vector<int>(static_cast<std::size_t>(std::max(k, 0)), n_phi)};
}

std::size_t TorusResolution::phase_count() const {
  std::size_t n = 1;
  for (int m : n_phi) n *= static_cast<std::size_t>(m);
  return n;
}

void TorusResolution::validate(int k) const {
  if (static_cast<int>(n_phi.size()) != k) {
    throw InvalidArgument("torus resolution: need one angular resolution per moment function");
  }
  if (n_t < kMinTorusResolution) {
    throw InvalidArgument("torus resolution: n_t must be at least " +
                          std::to_string(kMinTorusResolution));
  }
  for (int m : n_phi) {
    if (m < kMinTorusResolution) {
      throw InvalidArgument("torus resolution: n_phi must be at least " +
                            std::to_string(kMinTorusResolution));
    }
  }
}

std::size_t TorusSample::t_index(std::size_t flat) const { return flat / resolution.phase_count(); }

double TorusSample::phase_value(int j, int m) const {
  return kTwoPi * m / resolution.n_phi[static_cast<std::size_t>(j)];
}

std::vector<double> TorusSample::phases(std::size_t flat) const {
  const std::size_t k = resolution.n_phi.size();
  std::vector<double> out(k);
  std::size_t rest = flat % resolution.phase_count();
  for (std::size_t j = k; j-- > 0;) {
    const auto n = static_cast<std::size_t>(resolution.n_phi[j]);
    out[j] = phase_value(static_cast<int>(j), static_cast<int>(rest % n));
    rest /= n;
  }
  return out;
}

namespace {

PhasePoint lifted_point(std::span<const double> radii, double base_arg,
                        std::span<const double> phases) {
  const std::size_t k = phases.size();
  std::vector<Complex> z(k + 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    z[j] = std::polar(radii[j], phases[j]);
    sum += phases[j];
  }
  z[k] = std::polar(radii[k], base_arg - sum);
  return PhasePoint(std::move(z));
}

void for_each_phase(const TorusResolution& res, const auto& fn) {
  const std::size_t k = res.n_phi.size();
  std::vector<int> idx(k, 0);
  std::vector<double> phases(k, 0.0);
  for (std::size_t flat = 0; flat < res.phase_count(); ++flat) {
    for (std::size_t j = 0; j < k; ++j) phases[j] = kTwoPi * idx[j] / res.n_phi[j];
    fn(phases);
    for (std::size_t j = k; j-- > 0;) {
      if (++idx[j] < res.n_phi[j]) break;
      idx[j] = 0;
    }
  }
}

}  // namespace

TorusSample build_torus(const TorusSpec& spec, const TorusResolution& resolution) {
  spec.validate();
  resolution.validate(spec.k());

  TorusSample sample{spec, resolution, {}, {}, {}, {}, {}};
  const int n_t = resolution.n_t;
  sample.t_values.resize(n_t + 1);
  for (int i = 0; i <= n_t; ++i) sample.t_values[i] = static_cast<double>(i) / n_t;
  std::vector<double> lifted = unwrapped_argument(spec.loop, sample.t_values);
  sample.winding = static_cast<int>(std::lround((lifted[n_t] - lifted[0]) / kTwoPi));

  for (int i = 0; i <= n_t; ++i) {
    const Complex a = spec.loop(sample.t_values[i]);
    if (!(std::abs(a) > 0.0)) throw NumericalFailure("build_torus: loop reaches the singular fiber");
    sample.base_values.push_back(a);
    sample.base_arguments.push_back(lifted[i]);
    sample.radii.push_back(solve_fiber_radii(spec.levels, std::abs(a)));
  }

  sample.points.reserve(resolution.total());
  for (int i = 0; i < n_t; ++i) {
    const Complex a = sample.base_values[i];
    for_each_phase(resolution, [&](const std::vector<double>& phases) {
      PhasePoint p = lifted_point(sample.radii[i], lifted[i], phases);
      for (int m = 0; m < spec.k(); ++m) {
        sample.max_level_residual = std::max(
            sample.max_level_residual, std::abs(spec.structure.moment_value(m, p) - spec.levels.c[m]));
      }
      sample.max_base_residual =
          std::max(sample.max_base_residual, std::abs(psi_eval(p) - a) / (1.0 + std::abs(a)));
      sample.points.push_back(std::move(p));
    });
  }

  // the row at t = 1 (dependent phase shifted by 2 pi * winding) must reproduce row 0
  std::size_t flat = 0;
  for_each_phase(resolution, [&](const std::vector<double>& phases) {
    const PhasePoint end = lifted_point(sample.radii[n_t], lifted[n_t], phases);
    const PhasePoint& start = sample.points[flat++];
    double d = 0.0;
    for (std::size_t j = 0; j < end.size(); ++j) d = std::max(d, std::abs(end[j] - start[j]));
    sample.closure_residual = std::max(sample.closure_residual, d);
  });
  sample.base_values.pop_back();
  sample.base_arguments.pop_back();
  sample.radii.pop_back();
  sample.t_values.pop_back();

  if (sample.max_level_residual > kTorusResidualTolerance ||
      sample.max_base_residual > kTorusResidualTolerance ||
      sample.closure_residual > kTorusResidualTolerance) {
    std::ostringstream msg;
    msg << "build_torus: defining equations violated (level " << sample.max_level_residual
        << ", base " << sample.max_base_residual << ", closure " << sample.closure_residual << ")";
    throw NumericalFailure(msg.str());
  }
  return sample;
}

TorusSample build_torus(const TorusSpec& spec, int n_t, int n_phi) {
  return build_torus(spec, TorusResolution::uniform(spec.k(), n_t, n_phi));
}

PhasePoint torus_point(const TorusSpec& spec, double t, std::span<const double> phases) {
  if (static_cast<int>(phases.size()) != spec.k()) {
    throw InvalidArgument("torus_point: need k phases");
  }
  return fiber_torus_point(spec.levels, spec.loop(t), phases);
}

TorusSpec twist_torus(int k, const SectorSpec& sector, const SectorCircle& shape) {
  if (sector.k != k) throw InvalidArgument("twist_torus: sector spec is for a different k");
  TorusSpec spec{PseudotoricStructure(k), twist_loop(sector, shape), LevelValues::zeros(k)};
  if (classify_type(spec.loop) != LoopType::Chekanov) {
    throw NumericalFailure("twist_torus: power image of the sector loop is not contractible");
  }
  return spec;
}

std::vector<TangentVector> tangent_frame(const TorusSpec& spec, double t,
                                         std::span<const double> phases) {
  const PhasePoint p = torus_point(spec, t, phases);
  std::vector<TangentVector> frame;
  frame.reserve(static_cast<std::size_t>(spec.k()) + 1);
  for (int i = 0; i < spec.k(); ++i) {
    frame.push_back(hamiltonian_field(spec.structure.moment_field(i), p));
  }
  const PhasePoint plus = torus_point(spec, t + kFrameStep, phases);
  const PhasePoint minus = torus_point(spec, t - kFrameStep, phases);
  TangentVector vt{std::vector<Complex>(p.size())};
  for (std::size_t j = 0; j < p.size(); ++j) {
    vt.components[j] = (plus[j] - minus[j]) / (2.0 * kFrameStep);
  }
  frame.push_back(std::move(vt));
  for (const TangentVector& v : frame) {
    if (!(v.norm() > 1e-8)) throw NumericalFailure("tangent_frame: degenerate frame vector");
  }
  return frame;
}

}  // namespace ptoric
