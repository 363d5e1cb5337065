#pragma once

/// The SU(1,1) sector on the upper half-plane z = t + i r: hyperboloid spin
/// fields, the hyperbolic Liouville equation, and the change of variables to
/// the cylindrically symmetric self-dual Yang-Mills system.

#include "gaugeflow/holo_models.hpp"

namespace gaugeflow {

/// Grid over t in [t0, t1], r in [r0, r1]. 1/r terms need r bounded away from 0.
inline Grid2 half_plane_band(double t0, double t1, double r0, double r1, int nt, int nr) {
  if (r0 < 0.25) throw invalid_input("half-plane band: r_min must be at least 0.25");
  return Grid2::span(t0, t1, r0, r1, nt, nr, {"t", "r"});
}

inline void require_half_plane(const Grid2& g) {
  if (!(g.y0 > 0.0)) throw invalid_input("half-plane grid: r must stay positive");
}

// ------------------------------------------------------------ hyperboloid

/// Disc point to the upper sheet: S1 + i S2 = 2 zeta / (1 - |zeta|^2), S3 = (1 + |zeta|^2) / (1 - |zeta|^2).
inline Vec3 hyp_stereo(cplx zeta) {
  const double n = std::norm(zeta);
  if (!(n < 1.0)) throw invalid_input("hyp_stereo: |zeta| must be below 1");
  const cplx w = 2.0 * zeta / (1.0 - n);
  return {w.real(), w.imag(), (1.0 + n) / (1.0 - n)};
}

/// Cayley map from the upper half-plane to the disc.
inline cplx cayley(cplx tau) { return (tau - I_unit) / (tau + I_unit); }

inline double hyperboloid_defect(const Vec3& s) { return std::abs(-s[0] * s[0] - s[1] * s[1] + s[2] * s[2] - 1.0); }

/// Throws unless every node lies on the upper sheet.
inline void require_hyperboloid(const Vec3Field& S, double tol = 1e-10) {
  for (const auto& s : S.values)
    if (hyperboloid_defect(s) > tol * std::max(1.0, s[2] * s[2]) || s[2] < 1.0 - tol)
      throw invalid_input("hyperbolic spin field leaves the upper sheet of the hyperboloid");
}

/// S = p(cayley(tau(z))) on every node.
inline Vec3Field hyp_spin_from_map(const RationalMap& tau, const Grid2& g) {
  return sample_z(g, [&](cplx z) { return hyp_stereo(cayley(tau(z))); });
}

/// d0 S + S x d1 S with the su(1,1) cross product (minus the bracket product).
inline Vec3Field hyp_spin_residual(const Vec3Field& S) {
  require_hyperboloid(S);
  const Vec3Field s0 = diff(S, 0), s1 = diff(S, 1);
  Vec3Field r(S.grid);
  for (std::size_t k = 0; k < S.size(); ++k) r[k] = s0[k] + cross(AlgebraKind::su11, S[k], s1[k]);
  return r;
}

/// F(A) = -2 q q-bar pattern: the sigma-model curvature residual with the source sign flipped.
inline CurvatureResidual hyp_curvature_residual(const GaugeData& gd) { return curvature_residual_signed(gd, -1.0); }

/// J = q s- + conj(q) s+ + V e3.
inline Mat2 su11_connection(cplx q, double V) {
  Mat2 j;
  j << 0.5 * I_unit * V, std::conj(q), q, -0.5 * I_unit * V;
  return j;
}

/// Integrate dg = g J in SU(1,1) and read S, t off Ad(g).
inline SpinFrameField hyp_frame_from_gauge(const GaugeData& gd, const Mat2& g0 = Mat2::Identity(),
                                           PathOrder order = PathOrder::column_then_rows) {
  const Grid2& g = gd.grid();
  MatField j0(g), j1(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    j0[k] = su11_connection(gd.q.c0[k], gd.V.c0[k]);
    j1[k] = su11_connection(gd.q.c1[k], gd.V.c1[k]);
  }
  const MatField G = integrate_connection(j0, j1, g0, AlgebraKind::su11, order);
  SpinFrameField sf{Vec3Field(g), Vec3Field(g), gd.mask};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Mat3 r = adjoint_rotation(G[k], AlgebraKind::su11);
    sf.S[k] = r.col(2);
    sf.t[k] = r.col(0);
  }
  return sf;
}

/// (V, q) from a holomorphic gauge: q = Phi dz, V = i A.
inline GaugeData gauge_from_holomorphic(const HolomorphicGauge& h) {
  const Grid2& g = h.Phi.grid;
  GaugeData gd = GaugeData::zero(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    gd.q.c0[k] = h.Phi[k];
    gd.q.c1[k] = I_unit * h.Phi[k];
    gd.V.c0[k] = (I_unit * (h.Az[k] + h.Azbar[k])).real();
    gd.V.c1[k] = -(h.Az[k] - h.Azbar[k]).real();
  }
  return gd;
}

// ------------------------------------------------------------ Liouville

struct HypLiouville {
  RationalMap tau;
  /// log(|tau'|^2 / (4 Im(tau)^2))
  FieldR phi;
  /// phi + 2 log r
  FieldR psi;
  Mask mask;
};

/// Sampled solution with analytic tau'. Nodes with Im tau <= 0, tau' = 0 or a
/// pole nearby are masked.
inline HypLiouville hyp_liouville_from_map(const RationalMap& tau, const Grid2& g) {
  require_half_plane(g);
  if (tau.is_constant()) throw invalid_input("hyp_liouville_from_map: constant map");
  HypLiouville s{tau, FieldR(g), FieldR(g), empty_mask(g)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const cplx z = g.z(i, j);
      const std::size_t k = g.index(i, j);
      const cplx d = tau.denominator()(z);
      const double dn = std::norm(tau.wronskian()(z) / (d * d));
      const double im = (tau.numerator()(z) / d).imag();
      const double r = g.y(j);
      if (!(im > 0.0) || !(dn > 0.0) || !std::isfinite(dn)) {
        s.mask[k] = 1;
        continue;
      }
      s.phi[k] = std::log(dn / (4.0 * im * im));
      s.psi[k] = std::log(dn * (r * r) / (4.0 * (im * im)));
    }
  return s;
}

/// (d0^2 + d1^2) phi - 8 e^phi.
inline FieldR hyp_liouville_residual(const FieldR& phi) {
  return zip(laplacian(phi), phi, [](double lap, double p) { return lap - 8.0 * std::exp(p); });
}

/// r^2 (d0^2 + d1^2) psi + 2 - 8 e^psi.
inline FieldR curved_liouville_residual(const FieldR& psi) {
  require_half_plane(psi.grid);
  const FieldR lap = laplacian(psi);
  FieldR out(psi.grid);
  for (int j = 0; j < psi.grid.ny; ++j) {
    const double r = psi.grid.y(j);
    for (int i = 0; i < psi.grid.nx; ++i) out(i, j) = r * r * lap(i, j) + 2.0 - 8.0 * std::exp(psi(i, j));
  }
  return out;
}

// ------------------------------------------------------------ Witten system

/// B = B0 dt + B1 dr (imaginary), Higgs-like phi, constant kappa.
struct WittenData {
  OneFormC B;
  FieldC phi;
  double kappa = 1.0;

  const Grid2& grid() const { return phi.grid; }
  cplx Bz(std::size_t k) const { return 0.5 * (B.c0[k] - I_unit * B.c1[k]); }
  cplx Bzbar(std::size_t k) const { return 0.5 * (B.c0[k] + I_unit * B.c1[k]); }
  /// W = i B, real.
  FieldR W(int mu) const { return real_part(map(B[mu], [](cplx b) { return I_unit * b; })); }
  /// 2 phi = phi1 + i phi2.
  FieldR phi1() const { return map(phi, [](cplx p) { return 2.0 * p.real(); }); }
  FieldR phi2() const { return map(phi, [](cplx p) { return 2.0 * p.imag(); }); }
};

/// A0 = B0 + i kappa / r, A1 = B1, Phi = phi / r.
inline WittenData witten_transform(const HolomorphicGauge& h, double kappa) {
  const Grid2& g = h.Phi.grid;
  require_half_plane(g);
  WittenData w{{FieldC(g), FieldC(g)}, FieldC(g), kappa};
  for (int j = 0; j < g.ny; ++j) {
    const double r = g.y(j);
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      const cplx a0 = h.Az[k] + h.Azbar[k], a1 = I_unit * (h.Az[k] - h.Azbar[k]);
      w.B.c0[k] = a0 - I_unit * kappa / r;
      w.B.c1[k] = a1;
      w.phi[k] = r * h.Phi[k];
    }
  }
  return w;
}

/// Real phi = e^{psi/2} with B_z = d_z psi / 2 - i(kappa - 1)/2r and
/// B_zbar = -d_zbar psi / 2 - i(kappa - 1)/2r.
inline WittenData witten_from_psi(const FieldR& psi, double kappa) {
  const Grid2& g = psi.grid;
  require_half_plane(g);
  const auto [pz, pzb] = wirtinger(psi);
  WittenData w{{FieldC(g), FieldC(g)}, FieldC(g), kappa};
  for (int j = 0; j < g.ny; ++j) {
    const cplx shift = I_unit * (kappa - 1.0) / (2.0 * g.y(j));
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      const cplx bz = 0.5 * pz[k] - shift, bzb = -0.5 * pzb[k] - shift;
      w.B.c0[k] = bz + bzb;
      w.B.c1[k] = I_unit * (bz - bzb);
      w.phi[k] = std::exp(0.5 * psi[k]);
    }
  }
  return w;
}

/// B -> B - i d alpha, phi -> e^{i alpha} phi.
inline WittenData witten_gauge(const WittenData& w, const FieldR& alpha) {
  WittenData out = w;
  for (int mu = 0; mu < 2; ++mu) {
    const FieldR da = diff(alpha, mu);
    for (std::size_t k = 0; k < alpha.size(); ++k) out.B[mu][k] = w.B[mu][k] - I_unit * da[k];
  }
  for (std::size_t k = 0; k < alpha.size(); ++k) out.phi[k] = std::polar(1.0, alpha[k]) * w.phi[k];
  return out;
}

struct Eq51Residual {
  /// i r^2 (d0 B1 - d1 B0) - kappa + 4 |phi|^2
  FieldC field;
  /// (d_zbar + B_zbar) phi + i (kappa - 1) phi / 2r
  FieldC higgs;
};

inline Eq51Residual eq51_residual(const WittenData& w) {
  const Grid2& g = w.grid();
  require_half_plane(g);
  const FieldC curl = diff(w.B.c1, 0) - diff(w.B.c0, 1);
  const FieldC pzb = d_zbar(w.phi);
  Eq51Residual r{FieldC(g), FieldC(g)};
  for (int j = 0; j < g.ny; ++j) {
    const double rr = g.y(j);
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      r.field[k] = (I_unit * rr * rr * curl[k] + 4.0 * std::norm(w.phi[k])) - w.kappa;
      r.higgs[k] = pzb[k] + w.Bzbar(k) * w.phi[k] + I_unit * (w.kappa - 1.0) / (2.0 * rr) * w.phi[k];
    }
  }
  return r;
}

struct SDYMResidual {
  FieldR field, first, second;
};

/// The three real equations at kappa = 1 in W = iB, 2 phi = phi1 + i phi2.
inline SDYMResidual sdym_residual(const WittenData& w) {
  if (w.kappa != 1.0) throw invalid_input("sdym_residual: needs kappa = 1");
  const Grid2& g = w.grid();
  require_half_plane(g);
  const FieldR W0 = w.W(0), W1 = w.W(1), p1 = w.phi1(), p2 = w.phi2();
  const FieldR curl = diff(W1, 0) - diff(W0, 1);
  const FieldR p1t = diff(p1, 0), p1r = diff(p1, 1), p2t = diff(p2, 0), p2r = diff(p2, 1);
  SDYMResidual s{FieldR(g), FieldR(g), FieldR(g)};
  for (int j = 0; j < g.ny; ++j) {
    const double r = g.y(j);
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      s.field[k] = r * r * curl[k] - 1.0 + p1[k] * p1[k] + p2[k] * p2[k];
      s.first[k] = p1t[k] + W0[k] * p2[k] - p2r[k] + W1[k] * p1[k];
      s.second[k] = p1r[k] + W1[k] * p2[k] + p2t[k] - W0[k] * p1[k];
    }
  }
  return s;
}

/// tau -> Liouville -> holomorphic gauge -> Witten data at kappa.
inline WittenData witten_pipeline(const RationalMap& tau, const Grid2& g, double kappa = 1.0) {
  return witten_transform(liouville_gauge(hyp_liouville_from_map(tau, g).phi), kappa);
}

}  // namespace gaugeflow
