#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "curve.hpp"
#include "errors.hpp"

using namespace curveflow;
using std::numbers::pi;

namespace {

SupportState cosine(int m, double a, double b, int n, int N) {
  return generate_support({CosinePerturbed{a, b, n}, m}, N);
}

// Closed forms for h = a + b cos(k theta), k = n/m.
double area_closed(int m, double a, double b, int n) {
  const double k = double(n) / m;
  return m * pi * (a * a + 0.5 * b * b * (1 - k * k));
}

}  // namespace

TEST_CASE("flow kind names") {
  CHECK(parse_flow_kind("AP") == FlowKind::AreaPreserving);
  CHECK(parse_flow_kind("lp") == FlowKind::LengthPreserving);
  CHECK_THROWS_AS(parse_flow_kind("XP"), SpecError);
  CHECK(to_string(FlowKind::LengthPreserving) == "LP");
  CHECK(FlowParams{2.0, 1, FlowKind::AreaPreserving}.p() == 1.5);
  CHECK_THROWS_AS((FlowParams{0.0, 1, FlowKind::AreaPreserving}.validate()), SpecError);
}

TEST_CASE("generators") {
  const auto c = generate_support({MFoldCircle{2.0}, 3}, 64);
  for (int j = 0; j < 64; ++j) CHECK(c.h[j] == 2.0);
  const auto kc = curvature_of(c, 1.0);
  for (int j = 0; j < 64; ++j) CHECK(kc.v[j] == doctest::Approx(0.5).epsilon(1e-14));

  const auto h25 = cosine(2, 1.0, 0.12, 5, 256);
  CHECK(h25.h[0] == doctest::Approx(1.12).epsilon(1e-15));
  CHECK(convexity_margin(h25) == doctest::Approx(1 - 0.12 * (25.0 / 4 - 1)).epsilon(1e-12));
  CHECK(cosine_convexity_margin({1.0, 0.12, 5}, 2) == doctest::Approx(0.37).epsilon(1e-15));

  CHECK_THROWS_AS(cosine(2, 1.0, 0.5, 5, 256), ConvexityError);
  CHECK_THROWS_AS(generate_support({MFoldCircle{-1.0}, 1}, 64), SpecError);
  CHECK_THROWS_AS(cosine(2, -1.0, 0.0, 5, 64), SpecError);
}

TEST_CASE("curvature of the pentagram preset") {
  const auto s = cosine(2, 1.0, 0.12, 5, 256);
  const auto k = curvature_of(s, 1.0);
  CHECK(k.v[0] == doctest::Approx(1 / 0.37).epsilon(1e-12));
  // cos(5 theta / 2) = -1 at theta = 2 pi / 5, which is not a node: check the bound
  // on the grid and the interpolated radius of curvature there.
  const double ext = 1.0 / (1 + 0.12 * (25.0 / 4 - 1));
  CHECK(k.v.min() >= ext - 1e-12);
  const auto rho = radius_of_curvature(s);
  CHECK(evaluate_at(rho, 2 * pi / 5) == doctest::Approx(1.63).epsilon(1e-12));

  const auto k2 = curvature_of(s, 2.0);
  CHECK(k2.v[0] == doctest::Approx(1 / (0.37 * 0.37)).epsilon(1e-12));
}

TEST_CASE("support recovery") {
  const auto circ = CurvatureState{PeriodicField::constant(build_grid(2, 64), std::pow(3.0, -0.5)), 0};
  const auto hc = support_of(circ, 0.5);
  for (int j = 0; j < 64; ++j) CHECK(hc.h[j] == doctest::Approx(3.0).epsilon(1e-13));

  for (double alpha : {0.5, 1.0, 2.0}) {
    for (auto [m, a, b, n] : {std::tuple{2, 1.0, 0.12, 5}, std::tuple{3, 1.0, 0.5, 4},
                              std::tuple{7, 0.35, 1.0, 8}, std::tuple{3, 1.0, 0.3, 2}}) {
      const auto s = cosine(m, a, b, n, 256);
      const auto back = support_of(curvature_of(s, alpha), alpha);
      double worst = 0.0;
      for (int j = 0; j < 256; ++j) worst = std::max(worst, std::abs(back.h[j] - s.h[j]));
      CHECK(worst <= 1e-10 * std::max(std::abs(a), std::abs(b)));
    }
  }

  const auto g1 = build_grid(1, 64);
  const auto bad = CurvatureState{
      PeriodicField::sample(g1, [](double t) { return 1.0 / (1 + 0.1 * std::cos(t)); }), 0};
  CHECK_THROWS_AS(support_of(bad, 1.0), ResonanceError);
  CHECK(closure_defect(bad, 1.0) == doctest::Approx(0.1 * pi).epsilon(1e-10));
  CHECK(closure_defect(bad, 1.0) > 1e-3);
  CHECK(closure_defect(curvature_of(generate_support({MFoldCircle{1.0}, 2}, 64), 1.0), 1.0) <
        1e-12);
  CHECK(closure_defect(curvature_of(cosine(2, 1.0, 0.12, 5, 256), 1.0), 1.0) < 1e-12);
}

TEST_CASE("geometry against closed forms") {
  const auto c = generate_support({MFoldCircle{1.5}, 3}, 256);
  const auto gc = geometry(c);
  CHECK(gc.L == doctest::Approx(2 * 3 * pi * 1.5).epsilon(1e-14));
  CHECK(gc.A == doctest::Approx(3 * pi * 2.25).epsilon(1e-14));
  CHECK(std::abs(gc.isop_gap) < 1e-10 * gc.L * gc.L);

  for (auto [m, a, b, n] : {std::tuple{2, 1.0, 0.12, 5}, std::tuple{3, 1.0, 0.5, 4},
                            std::tuple{7, 0.35, 1.0, 8}, std::tuple{3, 1.0, 0.3, 2},
                            std::tuple{1, 2.0, 0.1, 3}}) {
    const auto s = cosine(m, a, b, n, 256);
    const auto g = geometry(s);
    const double L = 2 * m * pi * a;
    const double A = area_closed(m, a, b, n);
    CHECK(g.L == doctest::Approx(L).epsilon(1e-10));
    CHECK(std::abs(g.A - A) <= 1e-10 * std::abs(A));
    const double k = double(n) / m;
    CHECK(g.isop_gap == doctest::Approx(-2 * m * m * pi * pi * b * b * (1 - k * k)).epsilon(1e-9));
    CHECK(g.rado_gap >= -1e-8 * g.L * g.L);
    CHECK(g.h_max == doctest::Approx(a + std::abs(b)).epsilon(1e-12));
  }

  const auto neg = geometry(cosine(7, 0.35, 1.0, 8, 256));
  CHECK(neg.A == doctest::Approx(7 * pi * (0.1225 - 0.5 * (64.0 / 49 - 1))).epsilon(1e-12));
  CHECK(neg.A == doctest::Approx(-0.672).epsilon(1e-3));

  // Sign rule: negative isoperimetric gap iff n < m.
  CHECK(geometry(cosine(3, 1.0, 0.3, 2, 256)).isop_gap < 0);
  CHECK(geometry(cosine(2, 1.0, 0.12, 5, 256)).isop_gap > 0);
}

TEST_CASE("point reconstruction") {
  const auto c = generate_support({MFoldCircle{2.0}, 3}, 96);
  const auto pts = reconstruct_points(c);
  REQUIRE(pts.size() == 96);
  for (int j = 0; j < 96; ++j) {
    CHECK(std::hypot(pts[j].x, pts[j].y) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(pts[j].x == doctest::Approx(2 * std::cos(c.grid().theta(j))).epsilon(1e-14));
  }
  const auto s = cosine(2, 1.0, 0.12, 5, 256);
  const auto p = reconstruct_points(s);
  CHECK(p[0].x == doctest::Approx(1.12).epsilon(1e-14));
  CHECK(std::abs(p[0].y) < 1e-13);

  // Total turning of the polygon: the edge directions wind m times.
  double turning = 0.0;
  const std::size_t n = p.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& a = p[j];
    const auto& b = p[(j + 1) % n];
    const auto& c2 = p[(j + 2) % n];
    const double a1 = std::atan2(b.y - a.y, b.x - a.x);
    const double a2 = std::atan2(c2.y - b.y, c2.x - b.x);
    turning += std::remainder(a2 - a1, 2 * pi);
  }
  CHECK(turning == doctest::Approx(4 * pi).epsilon(1e-9));
}

TEST_CASE("classification") {
  const auto h25 = classify(cosine(2, 1.0, 0.12, 5, 256));
  CHECK(h25.n == 5);
  CHECK(h25.coprime);
  CHECK(h25.membership == CurveClass::HighlySymmetric);

  const auto a34 = classify(cosine(3, 1.0, 0.5, 4, 256));
  CHECK(a34.n == 4);
  CHECK(a34.property_p);
  CHECK(a34.membership == CurveClass::ALType);

  const auto c32 = classify(cosine(3, 1.0, 0.3, 2, 256));
  CHECK(c32.n == 2);
  CHECK(c32.membership == CurveClass::Unclassified);

  // Oracle for property P on the A-L preset: h_theta = -(2/3) sin(4 theta / 3) <= 0 on (0, 3 pi / 4).
  const auto s34 = cosine(3, 1.0, 0.5, 4, 256);
  const auto hth = differentiate(s34.h, 1);
  for (int j = 1; s34.grid().theta(j) < 3 * pi / 4; ++j) {
    const double th = s34.grid().theta(j);
    CHECK(hth[j] == doctest::Approx(-(2.0 / 3) * std::sin(4 * th / 3)).epsilon(1e-10));
    CHECK(hth[j] <= 0);
  }

  // Invariance under scaling and under a rotation by one symmetry period.
  const auto scaled = SupportState{s34.h.map([](double x) { return 2.5 * x; }), 0};
  CHECK(classify(scaled).membership == CurveClass::ALType);
  const auto g = s34.grid();
  const int shift = g.size() / 4;  // 2 m pi / n = 6 pi / 4 -> N / 4 nodes
  std::vector<double> rot(g.size());
  for (int j = 0; j < g.size(); ++j) rot[j] = s34.h[(j + shift) % g.size()];
  const auto rotated = SupportState{PeriodicField(g, rot), 0};
  CHECK(classify(rotated).membership == CurveClass::ALType);
  CHECK(classify(rotated).n == 4);

  const auto circle = classify(generate_support({MFoldCircle{1.0}, 3}, 64));
  CHECK(circle.n == 0);
  CHECK(circle.membership == CurveClass::Unclassified);
}

TEST_CASE("sample file input") {
  const auto dir = std::filesystem::temp_directory_path() / "curveflow_test_curve";
  std::filesystem::create_directories(dir);
  const auto path = dir / "h.txt";
  {
    std::ofstream os(path);
    os << "2 32\n";
    const auto g = build_grid(2, 32);
    os.precision(17);
    for (int j = 0; j < 32; ++j) os << 1 + 0.12 * std::cos(2.5 * g.theta(j)) << '\n';
  }
  const auto spec = load_support_samples(path);
  CHECK(spec.m == 2);
  const auto s = generate_support(spec, 32);
  CHECK(s.h[0] == doctest::Approx(1.12).epsilon(1e-15));
  CHECK_THROWS_AS(generate_support(spec, 64), SpecError);

  {
    std::ofstream os(path);
    os << "2 32\n1.0\n1.0\nabc\n";
  }
  try {
    load_support_samples(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(load_support_samples(dir / "missing.txt"), IoError);
  std::filesystem::remove_all(dir);
}
