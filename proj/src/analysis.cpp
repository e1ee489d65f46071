#include "ptoric/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ptoric {

PhasePoint random_phase_point(int k, double max_norm, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const std::size_t n = static_cast<std::size_t>(k) + 1;
  std::vector<Complex> z(n);
  double norm2 = 0.0;
  for (Complex& c : z) {
    c = Complex(gauss(rng), gauss(rng));
    norm2 += std::norm(c);
  }
  const double radius = max_norm * std::pow(uniform(rng), 1.0 / (2.0 * static_cast<double>(n)));
  const double scale = radius / std::sqrt(norm2);
  for (Complex& c : z) c *= scale;
  return PhasePoint(std::move(z));
}

VerificationReport verify_structure(const PseudotoricStructure& structure, int n_points,
                                    std::uint64_t seed, const VerificationTolerances& tol,
                                    const FlowParams& flow) {
  if (n_points < 10) throw InvalidArgument("verify_structure: need at least 10 points");
  if (tol.commutator < 0 || tol.vertical < 0 || tol.fiber_drift < 0) {
    throw InvalidArgument("verify_structure: tolerances must be non-negative");
  }
  VerificationReport report;
  report.k = structure.k();
  report.n_points = n_points;
  report.seed = seed;
  report.tolerances = tol;
  report.flow_time = 1.0;

  std::vector<ScalarField> fields;
  for (int i = 0; i < structure.k(); ++i) fields.push_back(structure.moment_field(i));

  std::mt19937_64 rng(seed);
  for (int n = 0; n < n_points; ++n) {
    const PhasePoint p = random_phase_point(structure.k(), 3.0, rng);
    const Complex a = psi_eval(p);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      for (std::size_t j = i + 1; j < fields.size(); ++j) {
        report.max_commutator =
            std::max(report.max_commutator, std::abs(poisson_bracket(fields[i], fields[j], p)));
      }
      const TangentVector x = hamiltonian_field(fields[i], p);
      report.max_vertical_defect = std::max(report.max_vertical_defect, std::abs(psi_differential(p, x)));
      const FlowResult moved = flow_integrate(fields[i], p, report.flow_time, flow);
      report.max_fiber_drift = std::max(report.max_fiber_drift, std::abs(psi_eval(moved.point) - a));
    }
  }
  report.pass = report.max_commutator <= tol.commutator &&
                report.max_vertical_defect <= tol.vertical &&
                report.max_fiber_drift <= tol.fiber_drift;
  return report;
}

double frame_defect(const std::vector<TangentVector>& frame) {
  double worst = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      const double w = std::abs(omega_eval(frame[i], frame[j]));
      worst = std::max(worst, w / (frame[i].norm() * frame[j].norm()));
    }
  }
  return worst;
}

LagrangianDefect lagrangian_defect(const TorusSpec& spec, const TorusResolution& resolution) {
  const TorusSample sample = build_torus(spec, resolution);
  LagrangianDefect out;
  out.resolution = resolution;
  out.samples = sample.points.size();
  for (std::size_t flat = 0; flat < sample.points.size(); ++flat) {
    const double t = sample.t_values[sample.t_index(flat)];
    const std::vector<double> phases = sample.phases(flat);
    out.max_defect = std::max(out.max_defect, frame_defect(tangent_frame(spec, t, phases)));
  }
  return out;
}

LagrangianDefect lagrangian_defect(const TorusSpec& spec, int n_t, int n_phi) {
  return lagrangian_defect(spec, TorusResolution::uniform(spec.k(), n_t, n_phi));
}

RefinementCheck lagrangian_refinement(const TorusSpec& spec, const TorusResolution& coarse) {
  RefinementCheck check;
  check.coarse = lagrangian_defect(spec, coarse);
  TorusResolution fine = coarse;
  fine.n_t *= 2;
  if (!fine.n_phi.empty()) fine.n_phi[0] *= 2;
  check.fine = lagrangian_defect(spec, fine);
  const double a = check.coarse.max_defect;
  const double b = check.fine.max_defect;
  const double scale = std::max(a, b);
  check.relative_change = scale > 0.0 ? std::abs(b - a) / scale : 0.0;
  check.stable = a >= kDefectStabilityFloor || scale <= kDefectNoiseFloor ||
                 check.relative_change <= kDefectStabilityRatio;
  return check;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "Equivalent";
    case Verdict::NotEquivalent: return "NotEquivalent";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

EquivalenceVerdict decide_equivalence(const TorusSpec& first, const TorusSpec& second) {
  EquivalenceVerdict v;
  if (first.k() != second.k()) {
    v.reason_code = "dimension_mismatch";
    v.reason = "tori live in different dimensions";
    return v;
  }
  first.validate();
  second.validate();
  v.types = {classify_type(first.loop), classify_type(second.loop)};
  // the torus does not depend on the loop orientation
  v.areas = {std::abs(enclosed_area(first.loop)), std::abs(enclosed_area(second.loop))};
  v.zero_count = first.levels.zero_count();

  if (first.levels.c != second.levels.c) {
    v.reason_code = "levels_differ";
    v.reason = "level vectors differ; only tori with identical levels are compared";
    return v;
  }
  if (v.types[0] != v.types[1]) {
    v.reason_code = "cross_type";
    v.reason = "loops are of different types (" + to_string(v.types[0]) + " vs " +
               to_string(v.types[1]) + "); equivalence across types is not decided";
    return v;
  }
  const double atol = 1e-8 * (1.0 + std::max(v.areas[0], v.areas[1]));
  std::ostringstream msg;
  msg.precision(12);
  if (std::abs(v.areas[0] - v.areas[1]) <= atol) {
    v.verdict = Verdict::Equivalent;
    v.reason_code = "same_type_equal_area";
    msg << "both loops are " << to_string(v.types[0]) << " type and enclose equal area "
        << v.areas[0] << " (loops taken as equivalent in the base: same type and same area)";
    if (v.zero_count < 2) {
      msg << "; the level vector has " << v.zero_count
          << " zero entries (< 2), so the loop-equivalence criterion applies as well";
    }
  } else {
    v.verdict = Verdict::NotEquivalent;
    v.reason_code = "same_type_different_area";
    msg << "both loops are " << to_string(v.types[0]) << " type but enclose different areas "
        << v.areas[0] << " and " << v.areas[1];
  }
  v.reason = msg.str();
  return v;
}

}  // namespace ptoric
