#include "gaugeflow/sigma_gauge.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace gaugeflow;
using Catch::Approx;

namespace {

// Smooth non-holomorphic test map.
cplx test_map(cplx z) { return 0.4 * z + 0.3 * std::conj(z) * z * 0.5 + cplx(0.1, 0.2); }

SpinFrameField test_frame(const Grid2& g) { return frames_of_map(sample_z(g, test_map)); }

CVec3 bcross(const CVec3& a, const CVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double frame_error(const SpinFrameField& a, const SpinFrameField& b) {
  double e = 0;
  for (std::size_t k = 0; k < a.S.size(); ++k)
    e = std::max({e, (a.S[k] - b.S[k]).norm(), (a.t[k] - b.t[k]).norm()});
  return e;
}

}  // namespace

TEST_CASE("stereographic projection") {
  REQUIRE((stereo(0) - Vec3(0, 0, 1)).norm() < 1e-15);
  REQUIRE((stereo(1) - Vec3(1, 0, 0)).norm() < 1e-15);
  REQUIRE((stereo(I_unit) - Vec3(0, 1, 0)).norm() < 1e-15);
  for (cplx z : {cplx(0.3, -2.0), cplx(-5, 7), cplx(1e-3, 0)}) {
    const auto p = stereo_inv(stereo(z));
    REQUIRE_FALSE(p.at_infinity);
    REQUIRE(std::abs(p.zeta - z) < 1e-13 * std::max(1.0, std::abs(z)));
  }
  REQUIRE(stereo_inv(Vec3(0, 0, -1)).at_infinity);
}

TEST_CASE("frames of a map satisfy the frame identities") {
  const Grid2 g = Grid2::square(-2, 2, 17);
  const SpinFrameField sf = frames_of_map(sample_z(g, [](cplx z) { return z * z - 0.3; }));
  REQUIRE(sf.frame_defect() < 1e-13);
  for (std::size_t k = 0; k < sf.S.size(); ++k) {
    const CVec3 tp = sf.tplus(k), tm = tp.conjugate();
    REQUIRE(std::abs(bdot(tp, tp)) < 1e-13);
    REQUIRE(std::abs(bdot(tp, tm) - 2.0) < 1e-13);
    REQUIRE((bcross(tm, tp) - 2.0 * I_unit * sf.S[k].cast<cplx>()).norm() < 1e-13);
  }
  REQUIRE((tplus_of(0) - CVec3(1, I_unit, 0)).norm() < 1e-15);
}

TEST_CASE("spin_to_gauge of a constant frame vanishes") {
  const Grid2 g = Grid2::square(-1, 1, 9);
  const SpinFrameField sf{Vec3Field(g, Vec3(0, 0, 1)), Vec3Field(g, Vec3(1, 0, 0)), {}};
  const GaugeData gd = spin_to_gauge(sf).gauge;
  REQUIRE(norms(gd.q.c0, 0).linf == 0.0);
  REQUIRE(norms(gd.V.c1, 0).linf == 0.0);
}

TEST_CASE("spin_to_gauge of zeta = z matches the Fubini-Study pair at second order") {
  auto err = [](int n) {
    const Grid2 g = Grid2::square(-1, 1, n);
    const RationalMap m = RationalMap::parse("z");
    const SpinToGauge sg = spin_to_gauge(frames_of_map(sample_map(m, g)));
    const GaugeData fs = fubini_pair(m, g);
    double e = 0;
    for (int mu = 0; mu < 2; ++mu) {
      e = std::max(e, norms(sg.gauge.q[mu] - fs.q[mu]).linf);
      e = std::max(e, norms(sg.gauge.V[mu] - fs.V[mu]).linf);
    }
    // q_x - i q_y = 2 / (1 + |z|^2)
    const FieldC qq = sg.gauge.q.c0 - I_unit * sg.gauge.q.c1;
    const FieldC ref = sample_z(g, [](cplx z) { return cplx(2.0 / (1.0 + std::norm(z))); });
    e = std::max(e, norms(qq - ref).linf);
    e = std::max(e, norms(sg.reconstruction[0]).linf);
    return e;
  };
  REQUIRE(order_estimate(err(33), err(65)) == Approx(2.0).margin(0.3));
  const GaugeData at0 = fubini_pair(RationalMap::parse("z"), Grid2::square(-1, 1, 5));
  const std::size_t c = Grid2::square(-1, 1, 5).index(2, 2);
  REQUIRE(std::abs(at0.q.c0[c] - 1.0) < 1e-15);
  REQUIRE(std::abs(at0.V.c0[c]) < 1e-15);
}

TEST_CASE("spin_to_gauge is invariant under a global rotation") {
  const Grid2 g = Grid2::square(-1, 1, 17);
  const SpinFrameField sf = test_frame(g);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  const Mat3 r = adjoint_rotation(exp_algebra({Vec3(n(rng), n(rng), n(rng)), AlgebraKind::su2}));
  SpinFrameField rs = sf;
  for (std::size_t k = 0; k < sf.S.size(); ++k) {
    rs.S[k] = r * sf.S[k];
    rs.t[k] = r * sf.t[k];
  }
  const GaugeData a = spin_to_gauge(sf).gauge, b = spin_to_gauge(rs).gauge;
  for (int mu = 0; mu < 2; ++mu) {
    REQUIRE(norms(a.q[mu] - b.q[mu], 0).linf < 1e-13);
    REQUIRE(norms(a.V[mu] - b.V[mu], 0).linf < 1e-13);
  }
}

TEST_CASE("gauge_to_frame of zero data is the base frame") {
  const Grid2 g = Grid2::square(-1, 1, 9);
  const SpinFrameField sf = gauge_to_frame(GaugeData::zero(g));
  for (std::size_t k = 0; k < sf.S.size(); ++k) {
    REQUIRE((sf.S[k] - Vec3(0, 0, 1)).norm() < 1e-15);
    REQUIRE((sf.t[k] - Vec3(1, 0, 0)).norm() < 1e-15);
  }
}

TEST_CASE("round trip spin -> gauge -> frame converges at second order") {
  auto err = [](int n) {
    const Grid2 g = Grid2::square(-1, 1, n);
    const SpinFrameField sf = test_frame(g);
    const std::size_t b = g.index(g.base_i(), g.base_j());
    const Mat2 g0 = frame_lift(sf.S[b], sf.t[b]);
    return frame_error(gauge_to_frame(spin_to_gauge(sf).gauge, g0), sf);
  };
  const double e1 = err(33), e2 = err(65);
  REQUIRE(e2 < 1e-3);
  REQUIRE(order_estimate(e1, e2) == Approx(2.0).margin(0.3));
}

TEST_CASE("diagonal change of base with the matching phase rotates the tangent frame") {
  const Grid2 g = Grid2::square(-1, 1, 33);
  const SpinFrameField sf = test_frame(g);
  const std::size_t b = g.index(g.base_i(), g.base_j());
  const Mat2 g0 = frame_lift(sf.S[b], sf.t[b]);
  const GaugeData gd = spin_to_gauge(sf).gauge;
  const double xi = 0.4;
  Mat2 h;
  h << std::polar(1.0, xi), 0, 0, std::polar(1.0, -xi);
  // g -> g h is a constant gauge change: q picks up the phase e^{2 i xi}
  const SpinFrameField a = gauge_to_frame(gd, g0), c = gauge_to_frame(gauge_transform(gd, FieldR(g, 2 * xi)), g0 * h);
  for (std::size_t k = 0; k < a.S.size(); ++k) {
    REQUIRE((a.S[k] - c.S[k]).norm() < 1e-12);
    const double ang = std::atan2(a.t[k].cross(c.t[k]).dot(a.S[k]), a.t[k].dot(c.t[k]));
    REQUIRE(std::abs(std::abs(ang) - 2 * xi) < 1e-10);
  }
}

TEST_CASE("curvature residual") {
  const Grid2 g = Grid2::square(-1, 1, 9);
  const CurvatureResidual z = curvature_residual(GaugeData::zero(g));
  REQUIRE(norms(z.RF, 0).linf == 0.0);
  REQUIRE(norms(z.Rq, 0).linf == 0.0);
  GaugeData c = GaugeData::zero(g);
  c.V.c0 = sample(g, [](double, double y) { return y; });
  const CurvatureResidual r = curvature_residual(c);
  for (double v : r.RF.values) REQUIRE(v == Approx(-1.0));

  auto res = [](int n) {
    const Grid2 gg = Grid2::square(-1, 1, n);
    const CurvatureResidual cr = curvature_residual(spin_to_gauge(test_frame(gg)).gauge);
    return std::max(norms(cr.RF).l2, norms(cr.Rq).l2);
  };
  REQUIRE(order_estimate(res(33), res(65)) == Approx(2.0).margin(0.3));
}

TEST_CASE("gauge transformations") {
  const Grid2 g = Grid2::square(-1, 1, 33);
  const GaugeData gd = spin_to_gauge(test_frame(g)).gauge;
  const GaugeData same = gauge_transform(gd, FieldR(g));
  REQUIRE(norms(same.q.c0 - gd.q.c0, 0).linf == 0.0);
  const GaugeData ph = gauge_transform(gd, FieldR(g, 0.7));
  REQUIRE(norms(ph.V.c0 - gd.V.c0, 0).linf < 1e-14);
  REQUIRE(norms(ph.q.c1 - std::polar(1.0, 0.7) * gd.q.c1, 0).linf < 1e-15);

  const CurvatureResidual before = curvature_residual(gd);
  const FieldR alpha = sample(g, [](double x, double y) { return std::sin(2 * x + y) + x * y; });
  const CurvatureResidual after = curvature_residual(gauge_transform(gd, alpha));
  REQUIRE(std::abs(norms(after.RF).l2 - norms(before.RF).l2) < 1e-10);
}

TEST_CASE("topological charge") {
  const Grid2 g = Grid2::square(-1, 1, 9);
  REQUIRE(top_charge(Vec3Field(g, Vec3(0, 0, 1))) == 0.0);
  const Grid2 big = Grid2::square(-50, 50, 401);
  const double q1 = top_charge(frames_of_map(sample_map(RationalMap::parse("z"), big)).S, 50.0);
  const double q2 = top_charge(frames_of_map(sample_map(RationalMap::parse("z^2"), big)).S, 50.0);
  REQUIRE(q1 == Approx(2.0).epsilon(0.02));
  REQUIRE(q2 == Approx(4.0).epsilon(0.02));
}
