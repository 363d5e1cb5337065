#include <catch2/catch_amalgamated.hpp>

#include "gaugeflow/nls_hm.hpp"

using namespace gaugeflow;

namespace {

Grid2 grid(int n) { return tx_grid(0.0, 1.0, -1.0, 1.0, n, n); }

double linf(const FieldC& f, int margin = kMargin, const Mask& m = {}) { return norms(f, margin, m).linf; }

double mat_linf(const MatField& f) {
  double w = 0.0;
  for (const auto& a : f.values) w = std::max(w, a.cwiseAbs().maxCoeff());
  return w;
}

// Max |a - c b| after fitting the constant phase c at the base node.
double phase_fit_error(const FieldC& a, const FieldC& b, const Mask& m = {}) {
  const Grid2& g = a.grid;
  const std::size_t k0 = g.index(g.base_i(), g.base_j());
  const cplx c = a[k0] / b[k0];
  CHECK(std::abs(std::abs(c) - 1.0) < 1e-2);
  FieldC d(g);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = a[k] - c * b[k];
  return linf(d, kMargin, m);
}

}  // namespace

TEST_CASE("NLS residual of plane waves and a non-solution", "[nls]") {
  const double a = 0.8, k = 1.3, w = 2 * a * a - k * k;
  REQUIRE(linf(nls_residual(nls_from_closure(grid(17), plane_wave(a, k, w)))) < 1e-13);
  REQUIRE(linf(nls_residual(nls_from_closure(grid(17), plane_wave(0.0, 0.0, 0.0)))) == 0.0);

  // finite differences converge at second order
  const double r1 = linf(nls_residual(nls_sampled(nls_from_closure(grid(41), plane_wave(a, k, w)).Q)));
  const double r2 = linf(nls_residual(nls_sampled(nls_from_closure(grid(81), plane_wave(a, k, w)).Q)));
  CHECK(order_estimate(r1, r2) > 1.8);

  // e^{it} leaves residual e^{it}
  const NLSField q = nls_from_closure(grid(9), plane_wave(1.0, 0.0, 1.0));
  const FieldC r = nls_residual(q);
  for (std::size_t n = 0; n < r.size(); ++n) REQUIRE(std::abs(r[n] - q.Q[n]) < 1e-14);

  const double es = linf(nls_residual(nls_from_closure(tx_grid(0, 1, -5, 5, 21, 21), bright_soliton(1.3))));
  CHECK(es < 1e-13);
}

TEST_CASE("HM residual", "[nls]") {
  const Grid2 g = grid(21);
  CHECK(norms(hm_residual(Vec3Field(g, Vec3(0, 0, 1)))).linf == 0.0);
  const Vec3Field prec = sample(g, [](double t, double) { return Vec3(std::cos(t), std::sin(t), 0.0); });
  const Vec3Field r = hm_residual(prec);
  for (int j = 2; j < g.ny - 2; ++j)
    for (int i = 2; i < g.nx - 2; ++i) CHECK(std::abs(r(i, j).norm() - 1.0) < 2e-3);
  CHECK_THROWS_AS(hm_residual(Vec3Field(g, Vec3(0, 0, 2))), invalid_input);
}

TEST_CASE("spin from NLS solves HM and is path independent", "[nls]") {
  const double a = 0.7, k = 0.9, w = 2 * a * a - k * k;
  double r[2], p[2];
  for (int s = 0; s < 2; ++s) {
    const Grid2 g = grid(s == 0 ? 41 : 81);
    const NLSField q = nls_from_closure(g, plane_wave(a, k, w));
    const SpinFrameField sf = spin_from_nls(q);
    CHECK(sf.frame_defect() < 1e-12);
    r[s] = norms(hm_residual(sf.S)).linf;
    const SpinFrameField sw = spin_from_nls(q, Mat2::Identity(), PathOrder::row_then_columns);
    p[s] = norms(sf.S - sw.S, 0).linf;
  }
  CHECK(r[1] < 1e-3);
  CHECK(order_estimate(r[0], r[1]) > 1.8);
  CHECK(p[1] < 1e-6);

  const SpinFrameField c = spin_from_nls(nls_from_closure(grid(11), plane_wave(0, 0, 0)));
  for (std::size_t n = 0; n < c.S.size(); ++n) REQUIRE((c.S[n] - Vec3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("NLS round trip through the spin frame", "[nls]") {
  SECTION("constant frame gives zero") {
    const Grid2 g = grid(11);
    const SpinFrameField sf{Vec3Field(g, Vec3(0, 0, 1)), Vec3Field(g, Vec3(1, 0, 0)), {}};
    const NLSRecovery rec = nls_from_spin(sf);
    CHECK(linf(rec.Q.Q, 0) == 0.0);
    CHECK(rec.warning.empty());
  }
  SECTION("plane wave and soliton up to a constant phase") {
    for (auto [c, dom] : {std::pair{plane_wave(0.7, 0.9, 2 * 0.49 - 0.81), 1.0}, std::pair{bright_soliton(0.8), 5.0}}) {
      double e[2], cons[2];
      for (int s = 0; s < 2; ++s) {
        const Grid2 g = tx_grid(0.0, 1.0, -dom, dom, s == 0 ? 41 : 81, s == 0 ? 201 : 401);
        const NLSField q = nls_from_closure(g, c);
        const NLSRecovery rec = nls_from_spin(spin_from_nls(q));
        CHECK(rec.warning.empty());
        e[s] = phase_fit_error(rec.Q.Q, q.Q);
        cons[s] = linf(rec.constraint);
        CHECK(norms(rec.closedness).linf < 1e-2);
      }
      CHECK(e[1] < 1e-3);
      CHECK(order_estimate(e[0], e[1]) > 1.7);
      CHECK(order_estimate(cons[0], cons[1]) > 1.7);
    }
  }
  SECTION("non-HM input is flagged") {
    const Grid2 g = grid(21);
    const Vec3Field S = sample(g, [](double t, double x) {
      return Vec3(std::sin(x) * std::cos(3 * t), std::sin(x) * std::sin(3 * t), std::cos(x));
    });
    const Vec3Field t = sample(g, [](double t, double x) {
      return Vec3(std::cos(x) * std::cos(3 * t), std::cos(x) * std::sin(3 * t), -std::sin(x));
    });
    const NLSRecovery rec = nls_from_spin({S, t, {}}, 1e-6);
    CHECK(norms(hm_residual(S)).linf > 0.1);
    CHECK_FALSE(rec.warning.empty());
  }
}

TEST_CASE("Galileo boosts", "[nls]") {
  const Grid2 g = tx_grid(0.0, 1.0, -2.0, 2.0, 21, 41);
  const double a = 0.9, v = 0.6, w = -0.35;

  SECTION("boosted constant-amplitude wave") {
    const NLSField q = nls_from_closure(g, plane_wave(a, 0.0, 2 * a * a));
    const NLSField qv = galileo_boost(q, v);
    const NLSField want = nls_from_closure(g, plane_wave(a, v, 2 * a * a - v * v));
    CHECK(linf(qv.Q - want.Q, 0) < 1e-13);
    CHECK(linf(nls_residual(qv), 0) < 1e-13);
    CHECK(linf(galileo_boost(nls_from_closure(g, plane_wave(0, 0, 0)), v).Q, 0) == 0.0);
  }
  SECTION("group law is exact on closures") {
    const NLSField q = nls_from_closure(g, bright_soliton(1.2));
    const NLSField a1 = galileo_boost(galileo_boost(q, v), w);
    const NLSField a2 = galileo_boost(q, v + w);
    for (std::size_t n = 0; n < a1.Q.size(); ++n) REQUIRE(a1.Q[n] == a2.Q[n]);
    CHECK(linf(nls_residual(a2), 0) < 1e-12);
  }
  SECTION("inverse relation") {
    const NLSField q = nls_from_closure(g, bright_soliton(1.2));
    const FieldC back = unboost(galileo_boost(q, v), v);
    CHECK(linf(back - q.Q, 0) < 1e-14);
  }
  SECTION("sampled boost agrees with the closure inside the grid") {
    const NLSField q = nls_from_closure(tx_grid(0.0, 1.0, -6.0, 6.0, 41, 241), bright_soliton(1.2));
    const NLSField s = galileo_boost(nls_sampled(q.Q), v);
    const NLSField e = galileo_boost(q, v);
    bool masked = false;
    for (auto m : s.mask) masked = masked || m;
    CHECK(masked);
    CHECK(norms(s.Q - e.Q, 0, s.mask).linf < 1e-4);
  }
}

TEST_CASE("moving-frame equation for q1", "[nls]") {
  const double v = 0.4, rho = 0.3;
  double r[2];
  for (int s = 0; s < 2; ++s) {
    const int n = s == 0 ? 81 : 161;
    const Grid2 g = tx_grid(0.0, 1.0, -5.0, 5.0, n / 2 + 1, n);
    const NLSField p = nls_from_closure(g, bright_soliton(1.0));
    const FieldC q1 = sample(g, [&](double t, double x) { return std::polar(1.0, rho * t + v * x); });
    FieldC f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = q1[k] * p.Q[k];
    r[s] = linf(eq36_residual(f, rho, v));
    if (s == 0) CHECK(linf(eq36_residual(p.Q, 0, 0) - nls_residual(nls_sampled(p.Q))) < 1e-13);
  }
  CHECK(order_estimate(r[0], r[1]) > 1.8);

  const double a = 0.7;
  const Grid2 g = grid(11);
  CHECK(linf(eq36_residual(FieldC(g, cplx(a)), v * v - 2 * a * a, v), 0) < 1e-14);
}

TEST_CASE("Zakharov-Shabat curvature", "[nls]") {
  const Grid2 g = grid(13);
  const std::vector<cplx> lams{cplx(0), cplx(1), cplx(-1), cplx(0.7, 0.3), cplx(5)};

  CHECK(zs_sign_selftest() < 1e-13);
  for (cplx lam : lams) CHECK(mat_linf(zs_curvature(zs_lax(nls_from_closure(g, plane_wave(0, 0, 0)), lam))) == 0.0);

  const double a = 0.8, k = -0.6;
  for (cplx lam : lams) {
    CHECK(mat_linf(zs_curvature(zs_lax(nls_from_closure(g, plane_wave(a, k, 2 * a * a - k * k)), lam))) < 1e-10);
    CHECK(mat_linf(zs_curvature(zs_lax(nls_from_closure(g, bright_soliton(1.4)), lam))) < 1e-10);
  }

  // lambda independence on a non-solution
  const NLSField bad = nls_from_closure(g, [](double t, double x) {
    const cplx q(std::sin(x) + 0.2 * t, 0.5 * x * x);
    return NLSJet{q, cplx(0.2, 0), cplx(std::cos(x), x), cplx(-std::sin(x), 1.0)};
  });
  const FieldC r = nls_residual(bad);
  double lo = 1e300, hi = 0;
  for (cplx lam : lams) {
    const MatField kf = zs_curvature(zs_lax(bad, lam));
    double n2 = 0;
    for (std::size_t m = 0; m < kf.size(); ++m) {
      n2 += kf[m].squaredNorm();
      REQUIRE(std::abs(kf[m](1, 0) + I_unit * r[m]) < 1e-12);
      REQUIRE(std::abs(kf[m](0, 1) + I_unit * std::conj(r[m])) < 1e-12);
      REQUIRE(std::abs(kf[m](0, 0)) < 1e-12);
    }
    lo = std::min(lo, std::sqrt(n2));
    hi = std::max(hi, std::sqrt(n2));
  }
  CHECK((hi - lo) / hi < 1e-9);

  // boosts preserve the curvature norm of the non-solution e^{it}
  const NLSField e = nls_from_closure(g, plane_wave(1.0, 0.0, 1.0));
  const double n0 = mat_linf(zs_curvature(zs_lax(e, 0.5)));
  const double n1 = mat_linf(zs_curvature(zs_lax(galileo_boost(e, 0.7), 0.5)));
  CHECK(std::abs(n0 - n1) < 1e-12);

  // finite-difference curvature converges for a solution
  double f[2];
  for (int s = 0; s < 2; ++s) {
    const Grid2 gg = grid(s == 0 ? 41 : 81);
    const MatField kf = zs_curvature(zs_lax(nls_sampled(nls_from_closure(gg, plane_wave(a, k, 2 * a * a - k * k)).Q), 0.7));
    f[s] = norms(kf).linf;
  }
  CHECK(order_estimate(f[0], f[1]) > 1.8);
}
