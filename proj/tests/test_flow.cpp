#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "flow.hpp"
#include "run.hpp"

using namespace curveflow;
using std::numbers::pi;

namespace {

constexpr FlowKind kAP = FlowKind::AreaPreserving;
constexpr FlowKind kLP = FlowKind::LengthPreserving;

SupportState h25(int N) { return generate_support({CosinePerturbed{1.0, 0.12, 5}, 2}, N); }

double sup_diff(const PeriodicField& a, const PeriodicField& b) {
  double w = 0.0;
  for (int j = 0; j < a.size(); ++j) w = std::max(w, std::abs(a[j] - b[j]));
  return w;
}

}  // namespace

TEST_CASE("multiplier") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto c = generate_support({MFoldCircle{1.7}, 3}, 64);
    for (auto kind : {kAP, kLP}) {
      const FlowParams p{alpha, 3, kind};
      CHECK(lambda_of(c, p) == doctest::Approx(std::pow(1.7, -alpha)).epsilon(1e-13));
      CHECK(lambda_of(curvature_of(c, alpha), p) ==
            doctest::Approx(std::pow(1.7, -alpha)).epsilon(1e-13));
    }
  }
  // AP, alpha = 1: lambda = 2 m pi / L = 1 for a = 1.
  CHECK(lambda_of(h25(256), {1.0, 2, kAP}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("support-form right-hand side") {
  const auto c = generate_support({MFoldCircle{2.0}, 2}, 64);
  for (auto kind : {kAP, kLP}) {
    const auto r = rhs_support(c, {1.5, 2, kind});
    CHECK(std::max(std::abs(r.min()), std::abs(r.max())) <= 1e-12);
  }
  const auto r = rhs_support(h25(256), {1.0, 2, kAP});
  CHECK(r[0] == doctest::Approx(1 - 1 / 0.37).epsilon(1e-12));
  CHECK(r[0] == doctest::Approx(-1.7027).epsilon(1e-4));
}

TEST_CASE("curvature-form right-hand side") {
  const auto circle = CurvatureState{PeriodicField::constant(build_grid(3, 64), 0.25), 0};
  for (double alpha : {0.5, 2.0}) {
    const auto r = rhs_curvature(circle, {alpha, 3, kLP});
    CHECK(std::max(std::abs(r.min()), std::abs(r.max())) <= 1e-12);
  }

  // Closed form at theta = 0 for h = a + b cos(k theta): 1/kappa = a + c cos(k theta),
  // c = b (1 - k^2), so kappa_thth(0) = c k^2 / (a + c)^2.
  const double a = 1.0, b = 0.12, k = 2.5, c = b * (1 - k * k);
  const double kap0 = 1 / (a + c);
  const double kap_thth0 = c * k * k / ((a + c) * (a + c));
  const double expected = kap0 * kap0 * (kap_thth0 + kap0 - 1.0);  // lambda = 1

  const auto s = h25(512);
  const FlowParams p{1.0, 2, kAP};
  const auto rc = rhs_curvature(curvature_of(s, 1.0), p);
  // Two spectral derivatives amplify roundoff by about (N/2m)^2: ~1e-9 here.
  CHECK(rc[0] == doctest::Approx(expected).epsilon(1e-7));

  // Chain rule from the support form: kappa_t = -kappa^2 (r + r_thth).
  const auto rs = rhs_support(s, p);
  const auto rs2 = differentiate(rs, 2);
  const auto kap = curvature_of(s, 1.0).v;
  double worst = 0.0, scale = 0.0;
  for (int j = 0; j < s.grid().size(); ++j) {
    const double chain = -kap[j] * kap[j] * (rs[j] + rs2[j]);
    worst = std::max(worst, std::abs(chain - rc[j]));
    scale = std::max(scale, std::abs(rc[j]));
  }
  CHECK(worst <= 1e-6 * scale);

  // General alpha: v_t = alpha v^{1 - 1/alpha} kappa_t with kappa_t from the chain rule.
  for (double alpha : {0.5, 2.0}) {
    const FlowParams q{alpha, 2, kAP};
    const auto r2 = rhs_support(s, q);
    const auto r2tt = differentiate(r2, 2);
    const auto v = curvature_of(s, alpha).v;
    const auto rv = rhs_curvature(curvature_of(s, alpha), q);
    double w = 0.0, sc = 0.0;
    for (int j = 0; j < s.grid().size(); ++j) {
      const double kt = -kap[j] * kap[j] * (r2[j] + r2tt[j]);
      const double vt = alpha * v[j] / kap[j] * kt;
      w = std::max(w, std::abs(vt - rv[j]));
      sc = std::max(sc, std::abs(rv[j]));
    }
    CHECK(w <= 1e-6 * sc);
  }
}

TEST_CASE("step size contract") {
  const auto s = h25(256);
  const FlowParams p{2.0, 2, kAP};
  StepControl ctl = StepControl::for_horizon(10.0);
  const double kmax = curvature_of(s, 1.0).v.max();
  const double bound = ctl.cfl * std::pow(s.grid().dtheta(), 2) / (2.0 * std::pow(kmax, 3.0));
  CHECK(stable_dt(s.grid(), kmax, p, ctl) <= bound * (1 + 1e-15));
  const auto r = advance(s, p, ctl);
  CHECK(r.dt <= bound * (1 + 1e-15));
  CHECK(r.state.t == doctest::Approx(r.dt).epsilon(1e-15));

  ctl.dt_min = 1.0;
  ctl.dt_max = 2.0;
  CHECK_THROWS_AS(advance(s, p, ctl), StepFloorError);
}

TEST_CASE("fixed point") {
  for (double alpha : {0.5, 1.0, 2.0})
    for (auto kind : {kAP, kLP}) {
      const auto c = generate_support({MFoldCircle{1.0}, 3}, 128);
      const FlowParams p{alpha, 3, kind};
      auto s = c;
      for (int i = 0; i < 50; ++i) s = rk4_step(s, p, 1e-3);
      CHECK(sup_diff(s.h, c.h) <= 1e-12);
      auto v = curvature_of(c, alpha);
      const auto v0 = v.v;
      for (int i = 0; i < 50; ++i) v = rk4_step(v, p, 1e-3);
      CHECK(sup_diff(v.v, v0) <= 1e-12);
    }
}

TEST_CASE("one accurate step conserves area") {
  const auto s = h25(256);
  const FlowParams p{1.0, 2, kAP};
  const double A0 = geometry(s).A;
  const auto s1 = rk4_step(s, p, 1e-4);
  CHECK(std::abs(geometry(s1).A - A0) <= 1e-8 * std::abs(A0));

  const FlowParams q{1.0, 2, kLP};
  const double L0 = geometry(s).L;
  CHECK(std::abs(geometry(rk4_step(s, q, 1e-4)).L - L0) <= 1e-8 * L0);
}

TEST_CASE("scaling covariance") {
  // h -> c h together with t -> c^{1+alpha} t maps solutions to solutions.
  const double scale = 2.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const FlowParams p{alpha, 2, kAP};
    auto s = h25(128);
    auto big = SupportState{s.h.map([&](double x) { return scale * x; }), 0};
    const double dt = 2e-5 / alpha;
    const double tscale = std::pow(scale, 1 + alpha);
    for (int i = 0; i < 200; ++i) {
      s = rk4_step(s, p, dt);
      big = rk4_step(big, p, dt * tscale);
    }
    const auto back = big.h.map([&](double x) { return x / scale; });
    CHECK(sup_diff(back, s.h) <= 1e-6);
    CHECK(big.t == doctest::Approx(s.t * tscale).epsilon(1e-12));
  }
}

TEST_CASE("run verdicts") {
  SUBCASE("circle reaches the time limit unchanged") {
    const auto c = generate_support({MFoldCircle{1.0}, 3}, 128);
    const auto out = run(c, {1.0, 3, kAP}, StepControl::for_horizon(1.0), 1e-3);
    CHECK(out.kind() == Verdict::TimeLimit);
    CHECK(out.final_state.t == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sup_diff(out.final_state.h, c.h) <= 1e-10);
  }
  SUBCASE("pentagram converges to a double circle") {
    const auto s0 = h25(256);
    const double A0 = geometry(s0).A;
    const auto out = run(s0, {1.0, 2, kAP}, StepControl::for_horizon(20.0), 1e-3);
    REQUIRE(out.kind() == Verdict::Converged);
    const auto& c = std::get<ConvergedVerdict>(out.verdict);
    CHECK(c.shape_error <= 1e-3);
    CHECK(c.residual <= 1e-3);
    CHECK(c.r_inf == doctest::Approx(std::sqrt(A0 / (2 * pi))).epsilon(1e-3));
  }
  SUBCASE("verdict kind is scale invariant") {
    const double alpha = 1.0, scale = 2.0;
    const auto s0 = h25(128);
    const auto big = SupportState{s0.h.map([&](double x) { return scale * x; }), 0};
    const FlowParams p{alpha, 2, kAP};
    auto ctl = StepControl::for_horizon(20.0);
    const auto a = run(s0, p, ctl, 1e-3);
    auto ctl2 = StepControl::for_horizon(20.0 * std::pow(scale, 1 + alpha));
    ctl2.kappa_blowup = ctl.kappa_blowup / scale;
    const auto b = run(big, p, ctl2, 1e-3);
    CHECK(a.kind() == b.kind());
    CHECK(a.kind() == Verdict::Converged);
  }
  SUBCASE("kappa threshold is a certified blow-up") {
    const auto s0 = generate_support({CosinePerturbed{0.35, 1.0, 8}, 7}, 256);
    auto ctl = StepControl::for_horizon(1.0);
    ctl.kappa_blowup = 50.0;
    const auto out = run(s0, {1.0, 7, kAP}, ctl, 1e-3);
    REQUIRE(out.kind() == Verdict::BlowUp);
    const auto& b = std::get<BlowUpVerdict>(out.verdict);
    CHECK(b.witness == BlowUpWitness::KappaThreshold);
    CHECK(b.certified);
    CHECK(b.kappa_max >= 50.0);
  }
  SUBCASE("invalid controls are rejected") {
    auto ctl = StepControl::for_horizon(1.0);
    ctl.kappa_blowup = 0.5;
    CHECK_THROWS_AS(run(h25(64), {1.0, 2, kAP}, ctl, 1e-3), SpecError);
  }
}
