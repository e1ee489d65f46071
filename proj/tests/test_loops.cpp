#include <doctest.h>

#include <numbers>

#include "ptoric/errors.hpp"
#include "ptoric/loops.hpp"

using namespace ptoric;
using std::numbers::pi;

namespace {
double shoelace(const Loop& g, int n) {
  double area = 0.0;
  Complex prev = g(0.0);
  for (int i = 1; i <= n; ++i) {
    const Complex cur = g(static_cast<double>(i % n) / n);
    area += prev.real() * cur.imag() - prev.imag() * cur.real();
    prev = cur;
  }
  return 0.5 * area;
}

Loop wobbly() {
  return Loop::fourier({0.2, -0.1}, {{{1.0, 0.0}, {0.0, 1.0}}, {{0.05, 0.02}, {-0.03, 0.04}}});
}
}  // namespace

TEST_CASE("circle evaluation") {
  const Loop c = Loop::circle({2.0, 0.0}, 0.5);
  CHECK(std::abs(c(0.0) - Complex(2.5, 0.0)) < 1e-15);
  CHECK(std::abs(c(0.25) - Complex(2.0, 0.5)) < 1e-15);
  const double h = 1e-6;
  for (double t : {0.1, 0.37, 0.8}) {
    const Complex fd = (c(t + h) - c(t - h)) / (2 * h);
    CHECK(std::abs(fd - c.derivative(t)) < 1e-7);
  }
  CHECK_THROWS_AS(Loop::circle({0.0, 0.0}, -1.0), InvalidArgument);
}

TEST_CASE("winding numbers") {
  CHECK(winding_number(Loop::circle({0.0, 0.0}, 1.0)) == 1);
  CHECK(winding_number(Loop::circle({0.0, 0.0}, 1.0).reversed()) == -1);
  CHECK(winding_number(Loop::circle({2.0, 0.0}, 0.5)) == 0);
  CHECK(winding_number(power_image(Loop::circle({0.0, 0.0}, 1.0), 2)) == 2);
  CHECK(winding_number(wobbly()) == 1);
  for (int k : {1, 2, 3}) {
    const Loop g = twist_loop(SectorSpec::standard(k), SectorCircle::default_for(k));
    CHECK(winding_number(g) == 0);
  }
}

TEST_CASE("winding is invariant under shifts and sampling") {
  const std::vector<Loop> loops = {Loop::circle({0.0, 0.0}, 1.0), Loop::circle({2.0, 0.0}, 0.5), wobbly(),
                                   power_image(Loop::circle({0.3, 0.1}, 1.0), 3),
                                   twist_loop(SectorSpec::standard(2), SectorCircle::default_for(2))};
  for (const Loop& g : loops) {
    const int w = winding_number(g);
    for (double s : {0.1, 0.5, 0.77}) CHECK(winding_number(g.shifted(s)) == w);
    for (int n : {2048, 4096}) {
      std::vector<double> ts(n + 1);
      for (int i = 0; i <= n; ++i) ts[i] = static_cast<double>(i) / n;
      const auto arg = unwrapped_argument(g, ts);
      CHECK(std::abs((arg.back() - arg.front()) / (2 * pi) - w) < 1e-9);
    }
  }
}

TEST_CASE("loops through the origin have no winding number") {
  const Loop bad(
      [](double t) { return Complex(std::cos(2 * pi * t) - 1.0, std::sin(2 * pi * t)); },
      [](double t) { return 2 * pi * Complex(-std::sin(2 * pi * t), std::cos(2 * pi * t)); }, "custom", {});
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK_THROWS(winding_number(bad));
}

TEST_CASE("enclosed area") {
  CHECK(std::abs(enclosed_area(Loop::circle({0.0, 0.0}, 2.0)) - 4 * pi) <= 1e-8);
  CHECK(std::abs(enclosed_area(Loop::circle({0.0, 0.0}, 2.0).reversed()) + 4 * pi) <= 1e-8);
  CHECK(std::abs(enclosed_area(Loop::circle({2.0, 1.0}, 0.5)) - 0.25 * pi) <= 1e-8);

  const Loop g = wobbly();
  CHECK(std::abs(enclosed_area(g) - shoelace(g, 1000000)) <= 1e-8);

  for (const Loop& h : {g, Loop::circle({3.0, -1.0}, 0.7),
                        twist_loop(SectorSpec::standard(2), SectorCircle::default_for(2))}) {
    CHECK(std::abs(enclosed_area(h.reversed()) + enclosed_area(h)) <= 1e-10);
    CHECK(std::abs(enclosed_area(h.shifted(0.3)) - enclosed_area(h)) <= 1e-9);
  }
}

TEST_CASE("type classification") {
  CHECK(classify_type(Loop::circle({0.0, 0.0}, 1.0)) == LoopType::Standard);
  CHECK(classify_type(Loop::circle({2.0, 0.0}, 0.5)) == LoopType::Chekanov);
  CHECK(classify_type(twist_loop(SectorSpec::standard(1), SectorCircle::default_for(1))) == LoopType::Chekanov);
  CHECK(to_string(LoopType::Standard) == "Standard");
  CHECK(to_string(LoopType::Chekanov) == "Chekanov");
}

TEST_CASE("sector loops") {
  const SectorSpec spec = SectorSpec::standard(2);
  CHECK(spec.opening() == doctest::Approx(2 * pi / 3));
  for (double phi : {pi / 3, pi / 6}) {
    const Loop g = sector_loop(spec, SectorCircle{1.5, phi, 0.3});
    for (int i = 0; i < 1000; ++i) {
      const Complex z = g(i / 1000.0);
      CHECK(std::arg(z) > 0.0);
      CHECK(std::arg(z) < spec.opening());
      CHECK(std::abs(z) < 3.1);
    }
  }
  CHECK_THROWS_AS(sector_loop(spec, SectorCircle{1.5, pi / 3, 1.4}), InvalidArgument);
  CHECK_THROWS_AS(sector_loop(spec, SectorCircle{2.9, pi / 3, 0.3}), InvalidArgument);
  CHECK_THROWS_AS(sector_loop(spec, SectorCircle{1.5, pi / 3, 0.0}), InvalidArgument);
  try {
    sector_loop(spec, SectorCircle{1.5, pi / 3, 1.4});
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("sector") != std::string::npos);
  }
  CHECK(twist_loop(spec, SectorCircle::default_for(2)).kind() == "sector_image");
}

TEST_CASE("power image") {
  const Loop g = wobbly();
  const Loop one = power_image(g, 1);
  for (int i = 0; i < 100; ++i) CHECK(std::abs(one(i / 100.0) - g(i / 100.0)) == 0.0);

  const Loop c = Loop::circle({0.0, 0.0}, 1.0);
  const Loop c2 = power_image(c, 2);
  for (int i = 0; i < 100; ++i) {
    const double t = i / 100.0;
    CHECK(std::abs(c2(t) - std::polar(1.0, 4 * pi * t)) < 1e-14);
  }
  const Loop s = sector_loop(SectorSpec::standard(3), SectorCircle::default_for(3));
  for (const Loop& h : {g, s, Loop::circle({2.0, 0.5}, 0.4)}) {
    for (int m : {2, 3, 4}) {
      CHECK(std::abs(total_argument_increment(power_image(h, m)) - m * total_argument_increment(h)) <= 1e-6);
    }
  }
  CHECK_THROWS_AS(power_image(g, 0), InvalidArgument);
}

TEST_CASE("loop json grammar") {
  using nlohmann::json;
  const Loop c = loop_from_json(json::parse(R"({"kind":"circle","center":[2,0],"radius":0.5})"));
  CHECK(std::abs(c(0.0) - Complex(2.5, 0.0)) < 1e-15);

  const Loop f = loop_from_json(json::parse(R"({"kind":"fourier","const":[0.2,-0.1],
      "harmonics":[[1,0,0,1],[0.05,0.02,-0.03,0.04]]})"));
  for (int i = 0; i < 50; ++i) CHECK(std::abs(f(i / 50.0) - wobbly()(i / 50.0)) < 1e-14);

  const Loop s = loop_from_json(json::parse(R"({"kind":"sector","k":2})"));
  CHECK(classify_type(s) == LoopType::Chekanov);
  const Loop ref = twist_loop(SectorSpec::standard(2), SectorCircle::default_for(2));
  for (int i = 0; i < 50; ++i) CHECK(std::abs(s(i / 50.0) - ref(i / 50.0)) < 1e-14);

  CHECK_THROWS_AS(loop_from_json(json::parse(R"({"kind":"circle","center":[2,0],"radius":0.5,"x":1})")),
                  InvalidArgument);
  CHECK_THROWS_AS(loop_from_json(json::parse(R"({"kind":"square"})")), InvalidArgument);
  CHECK_THROWS_AS(loop_from_json(json::parse(R"({"kind":"circle","center":[1,0],"radius":1})")), InvalidArgument);
  CHECK_THROWS_AS(loop_from_json(json::parse(R"({"kind":"circle","center":[1],"radius":1})")), InvalidArgument);
  CHECK_THROWS_AS(loop_from_json(json::parse(R"({"kind":"sector","k":1,"radius":5})")), InvalidArgument);
}
