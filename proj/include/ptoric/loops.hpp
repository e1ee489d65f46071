#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptoric/symplectic.hpp"

namespace ptoric {

enum class LoopType { Standard, Chekanov };

std::string to_string(LoopType type);

/// One harmonic of a Fourier loop: a cos(2 pi n t) + b sin(2 pi n t).
struct FourierHarmonic {
  Complex cos_coeff;
  Complex sin_coeff;
};

/// A smooth closed curve t in [0,1) -> C_a. Immutable; cheap to copy.
class Loop {
public:
  using CurveFn = std::function<Complex(double)>;

  Loop(CurveFn eval, CurveFn derivative, std::string kind, nlohmann::json description);

  /// Counterclockwise circle center + radius e^{2 pi i t}.
  static Loop circle(Complex center, double radius);
  static Loop fourier(Complex constant, std::vector<FourierHarmonic> harmonics);

  Complex operator()(double t) const { return eval_(t); }
  Complex derivative(double t) const { return derivative_(t); }
  const std::string& kind() const { return kind_; }
  const nlohmann::json& description() const { return description_; }

  /// t -> g(1 - t).
  Loop reversed() const;
  /// t -> g(t + s mod 1).
  Loop shifted(double s) const;

  /// Checks closure, regularity and origin avoidance on n uniform samples.
  void validate(int n = 512) const;

private:
  CurveFn eval_;
  CurveFn derivative_;
  std::string kind_;
  nlohmann::json description_;
};

/// Pointwise z -> z^m.
Loop power_image(const Loop& g, int m);

/// The sector {0 < arg < 2 pi/(k+1)} of the diagonal line, cut to radii [r_min, r_max]
/// inside the disc of radius k+1+epsilon.
struct SectorSpec {
  int k = 1;
  double r_min = 0.0;
  double r_max = 2.0;
  double epsilon = 0.1;
  double angular_margin = 0.05;

  double opening() const;
  void validate() const;
  /// r_min = margin, r_max = k+1+epsilon.
  static SectorSpec standard(int k, double epsilon = 0.1, double angular_margin = 0.05);
};

/// Circle in the sector: center center_r e^{i center_phi}, given radius.
struct SectorCircle {
  double center_r = 1.5;
  double center_phi = 0.0;
  double radius = 0.3;

  /// center 1.5 at mid-angle pi/(k+1), radius 0.3.
  static SectorCircle default_for(int k);
};

/// Loop in the diagonal line; throws InvalidArgument naming the violated bound.
Loop sector_loop(const SectorSpec& spec, const SectorCircle& shape);

/// power_image(sector_loop, k+1): the base loop of the twist torus.
Loop twist_loop(const SectorSpec& spec, const SectorCircle& shape);

/// Sampled min/max of |g|.
double min_modulus(const Loop& g, int n = 4096);
double max_modulus(const Loop& g, int n = 4096);

/// Continuous argument increment over one period (radians).
double total_argument_increment(const Loop& g);
int winding_number(const Loop& g);

/// Continuous lift of arg g(t) at increasing parameters ts (ts[0] >= 0), lifted
/// from the principal value at t = 0.
std::vector<double> unwrapped_argument(const Loop& g, std::span<const double> ts);

/// Signed area (1/2) \oint (x dy - y dx).
double enclosed_area(const Loop& g);

LoopType classify_type(const Loop& g);

/// Loop grammar: circle / fourier / sector (the latter yields the twist loop).
Loop loop_from_json(const nlohmann::json& j);

}  // namespace ptoric
