#include "ptoric/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ptoric {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json to_json(const VerificationReport& r) {
  return {{"k", r.k},
          {"n_points", r.n_points},
          {"seed", r.seed},
          {"flow_time", r.flow_time},
          {"max_commutator", r.max_commutator},
          {"max_vertical_defect", r.max_vertical_defect},
          {"max_fiber_drift", r.max_fiber_drift},
          {"tolerances",
           {{"commutator", r.tolerances.commutator},
            {"vertical", r.tolerances.vertical},
            {"fiber_drift", r.tolerances.fiber_drift}}},
          {"pass", r.pass}};
}

nlohmann::json to_json(const TorusResolution& res) {
  return {{"n_t", res.n_t}, {"n_phi", res.n_phi}};
}

nlohmann::json to_json(const LagrangianDefect& d) {
  return {{"max_defect", d.max_defect}, {"samples", d.samples}, {"resolution", to_json(d.resolution)}};
}

nlohmann::json to_json(const RefinementCheck& c) {
  return {{"coarse", to_json(c.coarse)},
          {"fine", to_json(c.fine)},
          {"relative_change", c.relative_change},
          {"stable", c.stable}};
}

nlohmann::json to_json(const EquivalenceVerdict& v) {
  return {{"verdict", to_string(v.verdict)},
          {"reason_code", v.reason_code},
          {"reason", v.reason},
          {"areas", v.areas},
          {"types", {to_string(v.types[0]), to_string(v.types[1])}},
          {"zero_count", v.zero_count}};
}

nlohmann::json to_json(const CutProfile& p) {
  return {{"ray_angle", p.ray_angle}, {"delta", p.delta},     {"delta_prime", p.delta_prime},
          {"r_min", p.r_min},         {"r_max", p.r_max},     {"span", p.span},
          {"theta_mid", p.theta_mid}, {"strength", p.strength}};
}

nlohmann::json to_json(const DisplacementReport& r) {
  nlohmann::json j = {{"time_elapsed", r.time_elapsed},
                      {"min_separation", r.min_separation},
                      {"base_radius_margin", r.base_radius_margin},
                      {"r_max", r.r_max},
                      {"moment_drift", r.moment_drift},
                      {"parallelism_defect", r.parallelism_defect},
                      {"ratio_defect", r.ratio_defect},
                      {"energy_drift", r.energy_drift},
                      {"radial_monotone", r.radial_monotone},
                      {"timed_out", r.timed_out},
                      {"certificate", r.certificate},
                      {"samples", r.samples},
                      {"resolution", to_json(r.resolution)},
                      {"slowest_sample",
                       {{"index", r.slowest_sample},
                        {"radius", r.slowest_radius},
                        {"kappa", r.slowest_kappa}}}};
  if (r.refined_margin) {
    j["refinement"] = {{"refined_margin", *r.refined_margin},
                       {"relative_change", *r.margin_relative_change},
                       {"stable", *r.refinement_stable}};
  }
  return j;
}

nlohmann::json to_json(const TorusSpec& spec) {
  return {{"k", spec.k()}, {"levels", spec.levels.c}, {"loop", spec.loop.description()}};
}

nlohmann::json torus_metadata(const TorusSample& s) {
  nlohmann::json warnings = nlohmann::json::array();
  for (std::size_t i : s.spec.levels.out_of_range_indices()) {
    warnings.push_back("level c_" + std::to_string(i + 1) + " lies outside (-1, 1)");
  }
  return {{"spec", to_json(s.spec)},
          {"resolution", to_json(s.resolution)},
          {"samples", s.points.size()},
          {"type", to_string(s.winding != 0 ? LoopType::Standard : LoopType::Chekanov)},
          {"winding", s.winding},
          {"residuals",
           {{"max_level", s.max_level_residual},
            {"max_base", s.max_base_residual},
            {"closure", s.closure_residual}}},
          {"warnings", warnings},
          {"columns", "t, phi_1..phi_k, Re z_1, Im z_1, ..., Re z_{k+1}, Im z_{k+1}"}};
}

namespace {

void csv_header(std::ostringstream& out, int k, bool with_time) {
  if (with_time) out << "time,";
  out << "t";
  for (int j = 1; j <= k; ++j) out << ",phi_" << j;
  for (int j = 1; j <= k + 1; ++j) out << ",re_z" << j << ",im_z" << j;
  out << '\n';
}

void csv_rows(std::ostringstream& out, const TorusSample& s, const std::vector<PhasePoint>& points,
              const double* time) {
  out << std::setprecision(17);
  for (std::size_t flat = 0; flat < points.size(); ++flat) {
    if (time) out << *time << ',';
    out << s.t_values[s.t_index(flat)];
    for (double phi : s.phases(flat)) out << ',' << phi;
    for (const Complex& z : points[flat].coords()) out << ',' << z.real() << ',' << z.imag();
    out << '\n';
  }
}

}  // namespace

std::string torus_csv(const TorusSample& s) {
  std::ostringstream out;
  csv_header(out, s.spec.k(), false);
  csv_rows(out, s, s.points, nullptr);
  return out.str();
}

std::string cloud_csv(const TorusSample& s, const std::vector<PhasePoint>& points, double time) {
  if (points.size() != s.points.size()) throw InvalidArgument("cloud_csv: size mismatch");
  std::ostringstream out;
  csv_header(out, s.spec.k(), true);
  csv_rows(out, s, points, &time);
  return out.str();
}

std::string loop_svg(const Loop& loop, const std::vector<Complex>& extra_points) {
  constexpr int kSamples = 512;
  constexpr double kSize = 400.0;
  std::vector<Complex> pts(kSamples);
  double extent = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    pts[i] = loop(static_cast<double>(i) / kSamples);
    extent = std::max(extent, std::abs(pts[i]));
  }
  for (const Complex& z : extra_points) extent = std::max(extent, std::abs(z));
  extent *= 1.1;
  auto px = [&](Complex z) {
    return std::make_pair(kSize / 2 * (1.0 + z.real() / extent), kSize / 2 * (1.0 - z.imag() / extent));
  };
  std::ostringstream out;
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<line x1=\"0\" y1=\"200\" x2=\"400\" y2=\"200\" stroke=\"#bbb\"/>\n";
  out << "<line x1=\"200\" y1=\"0\" x2=\"200\" y2=\"400\" stroke=\"#bbb\"/>\n";
  out << "<polygon fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (const Complex& z : pts) {
    const auto [x, y] = px(z);
    out << x << ',' << y << ' ';
  }
  out << "\"/>\n";
  for (const Complex& z : extra_points) {
    const auto [x, y] = px(z);
    out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"1\" fill=\"#c0392b\"/>\n";
  }
  out << "<circle cx=\"200\" cy=\"200\" r=\"2\" fill=\"black\"/>\n</svg>\n";
  return out.str();
}

}  // namespace ptoric
