#pragma once

/// Spin frames on S^2 and abelian gauge pairs (V, q).
///
/// A unit spin S with unit tangent t defines t+ = t + i S x t. The pair is
/// tied to the frame by dS = q t- + conj(q) t+ and d_A t+ = -2 q S with
/// A = -iV, and to an SU(2) field g by dg = g (q s- - conj(q) s+ + V e3).

#include "gaugeflow/path_integrate.hpp"
#include "gaugeflow/rational_map.hpp"

#include <numbers>

namespace gaugeflow {

// ------------------------------------------------------------ stereographic

inline Vec3 stereo(cplx zeta) {
  const double n = std::norm(zeta);
  const cplx w = 2.0 * zeta / (1.0 + n);
  return {w.real(), w.imag(), (1.0 - n) / (1.0 + n)};
}

struct StereoPoint {
  cplx zeta = 0;
  bool at_infinity = false;
};

inline StereoPoint stereo_inv(const Vec3& s) {
  const double d = 1.0 + s[2];
  if (d <= 1e-300) return {cplx(0), true};
  return {cplx(s[0], s[1]) / d, false};
}

// ------------------------------------------------------------ data types

struct SpinFrameField {
  Vec3Field S, t;
  Mask mask;

  const Grid2& grid() const { return S.grid; }

  CVec3 tplus(std::size_t k) const { return t[k].cast<cplx>() + I_unit * S[k].cross(t[k]).cast<cplx>(); }

  CVec3Field tplus_field() const {
    CVec3Field out(S.grid);
    for (std::size_t k = 0; k < S.size(); ++k) out[k] = tplus(k);
    return out;
  }

  /// Largest violation of |S| = |t| = 1, S.t = 0 over unmasked nodes.
  double frame_defect() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < S.size(); ++k) {
      if (!mask.empty() && mask[k]) continue;
      worst = std::max({worst, std::abs(S[k].norm() - 1.0), std::abs(t[k].norm() - 1.0), std::abs(S[k].dot(t[k]))});
    }
    return worst;
  }
};

struct GaugeData {
  OneFormR V;
  OneFormC q;
  Mask mask;

  const Grid2& grid() const { return V.c0.grid; }

  static GaugeData zero(const Grid2& g) {
    return {{FieldR(g), FieldR(g)}, {FieldC(g), FieldC(g)}, {}};
  }
};

/// Bilinear (non-conjugating) dot product.
inline cplx bdot(const CVec3& a, const CVec3& b) { return (a.array() * b.array()).sum(); }

// ------------------------------------------------------------ frames

/// t+ = (1 - zeta^2, i (1 + zeta^2), -2 zeta) / (1 + |zeta|^2).
inline CVec3 tplus_of(cplx zeta) {
  const double n = 1.0 + std::norm(zeta);
  const cplx z2 = zeta * zeta;
  return CVec3(1.0 - z2, I_unit * (1.0 + z2), -2.0 * zeta) / n;
}

/// Spin frame of a sampled map; non-finite nodes are masked with a
/// placeholder frame.
inline SpinFrameField frames_of_map(const FieldC& zeta, const Mask& mask = {}) {
  SpinFrameField sf{Vec3Field(zeta.grid), Vec3Field(zeta.grid), mask.empty() ? empty_mask(zeta.grid) : mask};
  for (std::size_t k = 0; k < zeta.size(); ++k) {
    const cplx z = zeta[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || sf.mask[k]) {
      sf.mask[k] = 1;
      sf.S[k] = Vec3(0, 0, -1);
      sf.t[k] = Vec3(1, 0, 0);
      continue;
    }
    sf.S[k] = stereo(z);
    sf.t[k] = tplus_of(z).real();
  }
  return sf;
}

inline FieldC sample_map(const RationalMap& m, const Grid2& g) {
  return sample_z(g, [&](cplx z) { return m(z); });
}

// ------------------------------------------------------------ dictionary

struct SpinToGauge {
  GaugeData gauge;
  /// d_mu S - q_mu t- - conj(q_mu) t+ per axis.
  std::array<Vec3Field, 2> reconstruction;
};

/// q_mu = t+ . d_mu S / 2 and V_mu = Re[t- . d_mu t+ / 2i].
inline SpinToGauge spin_to_gauge(const SpinFrameField& sf) {
  const Grid2& g = sf.grid();
  const CVec3Field tp = sf.tplus_field();
  SpinToGauge out{GaugeData::zero(g), {Vec3Field(g), Vec3Field(g)}};
  out.gauge.mask = sf.mask;
  for (int mu = 0; mu < 2; ++mu) {
    const Vec3Field dS = diff(sf.S, mu);
    const CVec3Field dtp = diff(tp, mu);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const cplx q = 0.5 * bdot(tp[k], dS[k].cast<cplx>());
      out.gauge.q[mu][k] = q;
      out.gauge.V[mu][k] = (tp[k].dot(dtp[k]) / (2.0 * I_unit)).real();
      out.reconstruction[mu][k] = dS[k] - 2.0 * (q * tp[k].conjugate()).real();
    }
  }
  return out;
}

/// Connection matrix q s- - conj(q) s+ + V e3 of the su(2) linear system.
inline Mat2 su2_connection(cplx q, double V) {
  Mat2 j;
  j << 0.5 * I_unit * V, -std::conj(q), q, -0.5 * I_unit * V;
  return j;
}

inline std::pair<MatField, MatField> connection_fields(const GaugeData& gd) {
  const Grid2& g = gd.grid();
  MatField j0(g), j1(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    j0[k] = su2_connection(gd.q.c0[k], gd.V.c0[k]);
    j1[k] = su2_connection(gd.q.c1[k], gd.V.c1[k]);
  }
  return {j0, j1};
}

/// S and t are the third and first columns of Ad(g).
inline SpinFrameField frame_of_group(const MatField& g) {
  SpinFrameField sf{Vec3Field(g.grid), Vec3Field(g.grid), {}};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Mat3 r = adjoint_rotation(g[k], AlgebraKind::su2);
    sf.S[k] = r.col(2);
    sf.t[k] = r.col(0);
  }
  return sf;
}

/// Integrate the linear system from g0 at the base node and read off the frame.
inline SpinFrameField gauge_to_frame(const GaugeData& gd, const Mat2& g0 = Mat2::Identity(),
                                     PathOrder order = PathOrder::column_then_rows) {
  const auto [j0, j1] = connection_fields(gd);
  SpinFrameField sf = frame_of_group(integrate_connection(j0, j1, g0, AlgebraKind::su2, order));
  sf.mask = gd.mask;
  return sf;
}

/// SU(2) element whose adjoint columns are (t, S x t, S) at one node.
inline Mat2 frame_lift(const Vec3& S, const Vec3& t) {
  Mat3 r;
  r.col(0) = t;
  r.col(1) = S.cross(t);
  r.col(2) = S;
  return lift_rotation_su2(r);
}

struct CurvatureResidual {
  FieldR RF;
  FieldC Rq;
};

/// R_F = d0 V1 - d1 V0 - sgn 2i (q0 conj q1 - conj q0 q1),
/// R_q = (d0 - i V0) q1 - (d1 - i V1) q0. sgn = +1 on S^2, -1 on the hyperboloid.
inline CurvatureResidual curvature_residual_signed(const GaugeData& gd, double sgn) {
  const Grid2& g = gd.grid();
  const FieldR dV = diff(gd.V.c1, 0) - diff(gd.V.c0, 1);
  const FieldC d0q1 = diff(gd.q.c1, 0), d1q0 = diff(gd.q.c0, 1);
  CurvatureResidual r{FieldR(g), FieldC(g)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx q0 = gd.q.c0[k], q1 = gd.q.c1[k];
    const cplx src = 2.0 * I_unit * (q0 * std::conj(q1) - std::conj(q0) * q1);
    r.RF[k] = dV[k] - sgn * src.real();
    r.Rq[k] = (d0q1[k] - I_unit * gd.V.c0[k] * q1) - (d1q0[k] - I_unit * gd.V.c1[k] * q0);
  }
  return r;
}

inline CurvatureResidual curvature_residual(const GaugeData& gd) { return curvature_residual_signed(gd, 1.0); }

/// q -> e^{i alpha} q, V -> V + d alpha.
inline GaugeData gauge_transform(const GaugeData& gd, const FieldR& alpha) {
  GaugeData out = gd;
  for (int mu = 0; mu < 2; ++mu) {
    out.V[mu] = gd.V[mu] + diff(alpha, mu);
    for (std::size_t k = 0; k < alpha.size(); ++k) out.q[mu][k] = std::polar(1.0, alpha[k]) * gd.q[mu][k];
  }
  return out;
}

// ------------------------------------------------------------ topology

/// Charge density S . (dx S x dy S) / 2 pi.
inline FieldR charge_density(const Vec3Field& S) {
  const Vec3Field sx = diff(S, 0), sy = diff(S, 1);
  FieldR rho(S.grid);
  for (std::size_t k = 0; k < S.size(); ++k) rho[k] = S[k].dot(sx[k].cross(sy[k])) / (2.0 * std::numbers::pi);
  return rho;
}

namespace detail {

inline double trapezoid_charge(const Vec3Field& S, double radius, const Mask& mask) {
  const FieldR rho = charge_density(S);
  const Grid2& g = S.grid;
  double sum = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      if (!mask.empty() && mask[k]) continue;
      if (radius > 0.0 && std::hypot(g.x(i), g.y(j)) > radius) continue;
      const double w = ((i == 0 || i == g.nx - 1) ? 0.5 : 1.0) * ((j == 0 || j == g.ny - 1) ? 0.5 : 1.0);
      sum += w * rho[k];
    }
  return sum * g.hx * g.hy;
}

}  // namespace detail

/// Trapezoid integral of the density over nodes with |z| <= radius
/// (radius <= 0: the whole grid), skipping masked nodes. On grids with odd
/// node counts the h and 2h sums are Richardson-combined, which removes the
/// leading O(h^2) differencing error of the density.
inline double top_charge(const Vec3Field& S, double radius = 0.0, const Mask& mask = {}) {
  const Grid2& g = S.grid;
  const double fine = detail::trapezoid_charge(S, radius, mask);
  if (g.nx % 2 == 0 || g.ny % 2 == 0 || g.nx < 11 || g.ny < 11) return fine;
  Grid2 cg = g;
  cg.nx = (g.nx + 1) / 2;
  cg.ny = (g.ny + 1) / 2;
  cg.hx = 2 * g.hx;
  cg.hy = 2 * g.hy;
  const double coarse = detail::trapezoid_charge(coarsen(S, cg), radius, coarsen_mask(mask, g, cg));
  return (4.0 * fine - coarse) / 3.0;
}

// ------------------------------------------------------------ Fubini-Study

/// Pull-back of the invariant pair along a holomorphic map, evaluated from
/// exact values zeta and zeta' (no differencing):
///   q_x = zeta' / (1 + |zeta|^2), q_y = i q_x,
///   V_x = 2 Im w, V_y = 2 Re w, w = conj(zeta) zeta' / (1 + |zeta|^2).
inline GaugeData fubini_pair(const FieldC& zeta, const FieldC& dzeta, const Mask& mask = {}) {
  const Grid2& g = zeta.grid;
  GaugeData gd = GaugeData::zero(g);
  gd.mask = mask;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!mask.empty() && mask[k]) continue;
    const double n = 1.0 + std::norm(zeta[k]);
    const cplx qx = dzeta[k] / n;
    const cplx w = std::conj(zeta[k]) * dzeta[k] / n;
    gd.q.c0[k] = qx;
    gd.q.c1[k] = I_unit * qx;
    gd.V.c0[k] = 2.0 * w.imag();
    gd.V.c1[k] = 2.0 * w.real();
  }
  return gd;
}

inline GaugeData fubini_pair(const RationalMap& m, const Grid2& g, const Mask& mask = {}) {
  return fubini_pair(sample_map(m, g), sample_z(g, [&](cplx z) { return m.derivative(z); }), mask);
}

}  // namespace gaugeflow
