#include "ptoric/loops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace ptoric {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kOriginClearance = 1e-9;

Complex ipow(Complex z, int m) {
  Complex r(1.0);
  for (int i = 0; i < m; ++i) r *= z;
  return r;
}

double wrap_to_unit(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw InvalidArgument(where + ": unknown key '" + item.key() + "'");
    }
  }
}

double number_at(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InvalidArgument(where + ": missing key '" + key + "'");
  if (!j.at(key).is_number()) throw InvalidArgument(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

Complex complex_at(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InvalidArgument(where + ": missing key '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw InvalidArgument(where + ": '" + key + "' must be [re, im]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

std::string to_string(LoopType type) {
  return type == LoopType::Standard ? "Standard" : "Chekanov";
}

Loop::Loop(CurveFn eval, CurveFn derivative, std::string kind, nlohmann::json description)
    : eval_(std::move(eval)),
      derivative_(std::move(derivative)),
      kind_(std::move(kind)),
      description_(std::move(description)) {
  if (!eval_ || !derivative_) throw InvalidArgument("Loop: empty curve function");
}

Loop Loop::circle(Complex center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("circle loop: radius must be positive");
  }
  return Loop([=](double t) { return center + std::polar(radius, kTwoPi * t); },
              [=](double t) { return Complex(0.0, kTwoPi) * std::polar(radius, kTwoPi * t); },
              "circle",
              {{"kind", "circle"}, {"center", complex_json(center)}, {"radius", radius}});
}

Loop Loop::fourier(Complex constant, std::vector<FourierHarmonic> harmonics) {
  nlohmann::json hj = nlohmann::json::array();
  for (const auto& h : harmonics) {
    hj.push_back({h.cos_coeff.real(), h.cos_coeff.imag(), h.sin_coeff.real(), h.sin_coeff.imag()});
  }
  auto eval = [constant, harmonics](double t) {
    Complex z = constant;
    for (std::size_t n = 0; n < harmonics.size(); ++n) {
      const double w = kTwoPi * static_cast<double>(n + 1);
      z += harmonics[n].cos_coeff * std::cos(w * t) + harmonics[n].sin_coeff * std::sin(w * t);
    }
    return z;
  };
  auto deriv = [harmonics](double t) {
    Complex z(0.0);
    for (std::size_t n = 0; n < harmonics.size(); ++n) {
      const double w = kTwoPi * static_cast<double>(n + 1);
      z += w * (-harmonics[n].cos_coeff * std::sin(w * t) + harmonics[n].sin_coeff * std::cos(w * t));
    }
    return z;
  };
  return Loop(eval, deriv, "fourier",
              {{"kind", "fourier"}, {"const", complex_json(constant)}, {"harmonics", hj}});
}

Loop Loop::reversed() const {
  const Loop base = *this;
  return Loop([base](double t) { return base(1.0 - t); },
              [base](double t) { return -base.derivative(1.0 - t); }, "reversed",
              {{"kind", "reversed"}, {"base", description_}});
}

Loop Loop::shifted(double s) const {
  const Loop base = *this;
  return Loop([base, s](double t) { return base(wrap_to_unit(t + s)); },
              [base, s](double t) { return base.derivative(wrap_to_unit(t + s)); }, "shifted",
              {{"kind", "shifted"}, {"shift", s}, {"base", description_}});
}

void Loop::validate(int n) const {
  const Complex start = eval_(0.0);
  const Complex end = eval_(1.0);
  if (!std::isfinite(std::abs(start)) || std::abs(end - start) > 1e-12 * (1.0 + std::abs(start))) {
    throw InvalidArgument("loop is not closed: g(0) != g(1)");
  }
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    const Complex z = eval_(t);
    const Complex dz = derivative_(t);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidArgument("loop has non-finite samples");
    }
    if (std::abs(z) <= kOriginClearance) throw InvalidArgument("loop too close to origin");
    if (!(std::abs(dz) > 0.0)) throw InvalidArgument("loop is not regular (zero derivative)");
  }
}

Loop power_image(const Loop& g, int m) {
  if (m < 1) throw InvalidArgument("power_image: exponent must be positive");
  return Loop([g, m](double t) { return ipow(g(t), m); },
              [g, m](double t) { return static_cast<double>(m) * ipow(g(t), m - 1) * g.derivative(t); },
              "power", {{"kind", "power"}, {"m", m}, {"base", g.description()}});
}

double SectorSpec::opening() const { return kTwoPi / (k + 1); }

void SectorSpec::validate() const {
  std::vector<std::string> problems;
  if (k < 1) problems.push_back("k must be positive");
  if (!(epsilon > 0.0)) problems.push_back("epsilon must be positive");
  if (!(angular_margin > 0.0)) problems.push_back("angular margin must be positive");
  if (!(r_min > 0.0)) problems.push_back("r_min must be positive");
  if (!(r_min < r_max)) problems.push_back("r_min must be below r_max");
  if (r_max > k + 1 + epsilon) problems.push_back("r_max exceeds the disc radius k+1+epsilon");
  if (!problems.empty()) {
    std::string msg = "invalid sector:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw InvalidArgument(msg);
  }
}

SectorSpec SectorSpec::standard(int k, double epsilon, double angular_margin) {
  SectorSpec s;
  s.k = k;
  s.epsilon = epsilon;
  s.angular_margin = angular_margin;
  s.r_min = angular_margin;
  s.r_max = k + 1 + epsilon;
  return s;
}

SectorCircle SectorCircle::default_for(int k) {
  return SectorCircle{1.5, std::numbers::pi / (k + 1), 0.3};
}

Loop sector_loop(const SectorSpec& spec, const SectorCircle& shape) {
  spec.validate();
  std::vector<std::string> problems;
  if (!(shape.radius > 0.0)) problems.push_back("radius must be positive");
  if (!(shape.radius < shape.center_r)) {
    problems.push_back("circle contains the origin of the diagonal line");
  }
  if (problems.empty()) {
    const double half_width = std::asin(shape.radius / shape.center_r);
    if (shape.center_phi - half_width < spec.angular_margin) {
      problems.push_back("circle crosses the lower sector edge arg = 0 (with margin)");
    }
    if (shape.center_phi + half_width > spec.opening() - spec.angular_margin) {
      problems.push_back("circle crosses the upper sector edge arg = 2pi/(k+1) (with margin)");
    }
    if (shape.center_r - shape.radius < spec.r_min) problems.push_back("circle goes below r_min");
    if (shape.center_r + shape.radius > spec.r_max) problems.push_back("circle goes beyond r_max");
  }
  if (!problems.empty()) {
    std::string msg = "sector loop violates bounds:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw InvalidArgument(msg);
  }

  const Complex center = std::polar(shape.center_r, shape.center_phi);
  const double radius = shape.radius;
  Loop loop([=](double t) { return center + std::polar(radius, kTwoPi * t); },
            [=](double t) { return Complex(0.0, kTwoPi) * std::polar(radius, kTwoPi * t); },
            "sector_circle",
            {{"kind", "sector_circle"},
             {"k", spec.k},
             {"center_r", shape.center_r},
             {"center_phi", shape.center_phi},
             {"radius", shape.radius},
             {"epsilon", spec.epsilon},
             {"margin", spec.angular_margin}});

  // postcondition on samples
  const double disc = spec.k + 1 + spec.epsilon;
  for (int i = 0; i < 1024; ++i) {
    const Complex z = loop(i / 1024.0);
    const double phi = std::arg(z);
    if (!(phi > 0.0 && phi < spec.opening()) || !(std::abs(z) < disc)) {
      throw InvalidArgument("sector loop sample leaves the sector/disc region");
    }
  }
  return loop;
}

Loop twist_loop(const SectorSpec& spec, const SectorCircle& shape) {
  const Loop base = sector_loop(spec, shape);
  const Loop image = power_image(base, spec.k + 1);
  return Loop([image](double t) { return image(t); },
              [image](double t) { return image.derivative(t); }, "sector_image",
              {{"kind", "sector"},
               {"k", spec.k},
               {"center_r", shape.center_r},
               {"center_phi", shape.center_phi},
               {"radius", shape.radius},
               {"epsilon", spec.epsilon},
               {"margin", spec.angular_margin}});
}

double min_modulus(const Loop& g, int n) {
  double m = std::abs(g(0.0));
  for (int i = 1; i < n; ++i) m = std::min(m, std::abs(g(static_cast<double>(i) / n)));
  return m;
}

double max_modulus(const Loop& g, int n) {
  double m = std::abs(g(0.0));
  for (int i = 1; i < n; ++i) m = std::max(m, std::abs(g(static_cast<double>(i) / n)));
  return m;
}

double total_argument_increment(const Loop& g) {
  constexpr int kMaxSamples = 1 << 22;
  for (int n = 1024; n <= kMaxSamples; n *= 2) {
    std::vector<Complex> z(n + 1);
    for (int i = 0; i < n; ++i) {
      z[i] = g(static_cast<double>(i) / n);
      if (std::abs(z[i]) < kOriginClearance) throw InvalidArgument("loop too close to origin");
    }
    z[n] = z[0];
    double total = 0.0;
    bool coarse = false;
    for (int i = 0; i < n; ++i) {
      const double step = std::arg(z[i + 1] / z[i]);
      if (std::abs(step) > std::numbers::pi / 2) {
        coarse = true;
        break;
      }
      total += step;
    }
    if (coarse) continue;
    const double w = total / kTwoPi;
    if (std::abs(w - std::round(w)) <= 1e-6) return total;
  }
  throw NumericalFailure("winding number: angular unwrapping did not settle");
}

int winding_number(const Loop& g) {
  return static_cast<int>(std::lround(total_argument_increment(g) / kTwoPi));
}

std::vector<double> unwrapped_argument(const Loop& g, std::span<const double> ts) {
  std::vector<double> out;
  out.reserve(ts.size());
  Complex prev = g(0.0);
  if (std::abs(prev) < kOriginClearance) throw InvalidArgument("loop too close to origin");
  double prev_t = 0.0;
  double lifted = std::arg(prev);
  for (double t : ts) {
    if (t < prev_t) throw InvalidArgument("unwrapped_argument: parameters must be increasing");
    // subdivide until every angular step is below pi/2
    for (int m = 16;; m *= 2) {
      if (m > (1 << 20)) throw NumericalFailure("unwrapped_argument: cannot resolve argument");
      double acc = 0.0;
      Complex z0 = prev;
      bool ok = true;
      for (int i = 1; i <= m; ++i) {
        const Complex z1 = g(prev_t + (t - prev_t) * i / m);
        if (std::abs(z1) < kOriginClearance) throw InvalidArgument("loop too close to origin");
        const double step = std::arg(z1 / z0);
        if (std::abs(step) > std::numbers::pi / 2) {
          ok = false;
          break;
        }
        acc += step;
        z0 = z1;
      }
      if (ok) {
        lifted += acc;
        prev = z0;
        break;
      }
    }
    prev_t = t;
    out.push_back(lifted);
  }
  return out;
}

double enclosed_area(const Loop& g) {
  auto trapezoid = [&g](int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / n;
      s += (std::conj(g(t)) * g.derivative(t)).imag();
    }
    return 0.5 * s / n;
  };
  int n = 64;
  double previous = trapezoid(n);
  for (int r = 0; r < 16; ++r) {
    n *= 2;
    const double current = trapezoid(n);
    if (std::abs(current - previous) < 1e-9) return current;
    previous = current;
  }
  throw NumericalFailure("enclosed_area: trapezoid refinement did not converge");
}

LoopType classify_type(const Loop& g) {
  return winding_number(g) != 0 ? LoopType::Standard : LoopType::Chekanov;
}

Loop loop_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw InvalidArgument("loop: expected an object with a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  Loop loop = [&]() -> Loop {
    if (kind == "circle") {
      reject_unknown_keys(j, {"kind", "center", "radius"}, "circle loop");
      return Loop::circle(complex_at(j, "center", "circle loop"), number_at(j, "radius", "circle loop"));
    }
    if (kind == "fourier") {
      reject_unknown_keys(j, {"kind", "const", "harmonics"}, "fourier loop");
      std::vector<FourierHarmonic> harmonics;
      if (j.contains("harmonics")) {
        if (!j.at("harmonics").is_array()) throw InvalidArgument("fourier loop: harmonics must be an array");
        for (const auto& h : j.at("harmonics")) {
          if (!h.is_array() || h.size() != 4) {
            throw InvalidArgument("fourier loop: each harmonic is [a_re, a_im, b_re, b_im]");
          }
          for (const auto& x : h) {
            if (!x.is_number()) throw InvalidArgument("fourier loop: harmonic entries must be numbers");
          }
          harmonics.push_back({{h[0].get<double>(), h[1].get<double>()},
                               {h[2].get<double>(), h[3].get<double>()}});
        }
      }
      return Loop::fourier(complex_at(j, "const", "fourier loop"), std::move(harmonics));
    }
    if (kind == "sector") {
      reject_unknown_keys(j, {"kind", "k", "center_r", "center_phi", "radius", "epsilon", "margin"},
                          "sector loop");
      if (!j.contains("k") || !j.at("k").is_number_integer()) {
        throw InvalidArgument("sector loop: integer 'k' is required");
      }
      const int k = j.at("k").get<int>();
      if (k < 1) throw InvalidArgument("sector loop: k must be positive");
      const double eps = j.contains("epsilon") ? number_at(j, "epsilon", "sector loop") : 0.1;
      const double margin = j.contains("margin") ? number_at(j, "margin", "sector loop") : 0.05;
      SectorCircle shape = SectorCircle::default_for(k);
      if (j.contains("center_r")) shape.center_r = number_at(j, "center_r", "sector loop");
      if (j.contains("center_phi")) shape.center_phi = number_at(j, "center_phi", "sector loop");
      if (j.contains("radius")) shape.radius = number_at(j, "radius", "sector loop");
      return twist_loop(SectorSpec::standard(k, eps, margin), shape);
    }
    throw InvalidArgument("loop: unknown kind '" + kind + "'");
  }();
  loop.validate();
  return loop;
}

}  // namespace ptoric
