#pragma once

#include <cstddef>
#include <vector>

#include "ptoric/loops.hpp"
#include "ptoric/pseudotoric.hpp"

namespace ptoric {

/// S_{gamma, c}: the union over a in gamma of the fiber tori {F_i = c_i} in psi^{-1}(a).
struct TorusSpec {
  PseudotoricStructure structure;
  Loop loop;
  LevelValues levels;

  int k() const { return structure.k(); }
  void validate() const;
};

struct TorusResolution {
  int n_t = 32;
  std::vector<int> n_phi;  ///< one entry per angle, size k

  static TorusResolution uniform(int k, int n_t, int n_phi);
  std::size_t phase_count() const;
  std::size_t total() const { return static_cast<std::size_t>(n_t) * phase_count(); }
  void validate(int k) const;
};

/// Sampled grid of S_{gamma, c}. Point (it, m_1..m_k) sits at t = it/n_t and
/// phi_j = 2 pi m_j / n_phi_j; flattened row-major with t outermost.
struct TorusSample {
  TorusSpec spec;
  TorusResolution resolution;
  std::vector<double> t_values;
  std::vector<Complex> base_values;      ///< gamma(t)
  std::vector<double> base_arguments;    ///< continuous lift of arg gamma(t)
  std::vector<std::vector<double>> radii;  ///< per t row
  std::vector<PhasePoint> points;

  double max_level_residual = 0.0;  ///< max |F_i - c_i|
  double max_base_residual = 0.0;   ///< max |psi - gamma(t)| / (1 + |gamma(t)|)
  double closure_residual = 0.0;    ///< row at t = 1 vs row at t = 0
  int winding = 0;

  std::size_t t_index(std::size_t flat) const;
  std::vector<double> phases(std::size_t flat) const;
  double phase_value(int j, int m) const;
};

inline constexpr int kMinTorusResolution = 8;
inline constexpr double kTorusResidualTolerance = 1e-9;

/// Builds the grid and checks its defining equations and closure across t = 1.
TorusSample build_torus(const TorusSpec& spec, const TorusResolution& resolution);
TorusSample build_torus(const TorusSpec& spec, int n_t, int n_phi);

/// Point at parameter t with given phases, using a/|a| for the dependent phase.
PhasePoint torus_point(const TorusSpec& spec, double t, std::span<const double> phases);

/// Twist torus: c = 0 and loop = (sector circle)^{k+1}.
TorusSpec twist_torus(int k, const SectorSpec& sector, const SectorCircle& shape);

inline constexpr double kFrameStep = 1e-6;

/// k moment fields X_{F_i} followed by the t-derivative of the parameterization.
std::vector<TangentVector> tangent_frame(const TorusSpec& spec, double t,
                                         std::span<const double> phases);

}  // namespace ptoric
