#pragma once

/// Heisenberg ferromagnet <-> cubic NLS on a (t, x) grid, Galilean boosts and
/// the Zakharov-Shabat Lax family. Axis 0 is t, axis 1 is x.

#include "gaugeflow/sigma_gauge.hpp"

#include <functional>

namespace gaugeflow {

/// Value and the derivatives the residuals need at one point.
struct NLSJet {
  cplx Q = 0, Qt = 0, Qx = 0, Qxx = 0;
};

using NLSClosure = std::function<NLSJet(double t, double x)>;

inline Grid2 tx_grid(double t0, double t1, double x0, double x1, int nt, int nx) {
  return Grid2::span(t0, t1, x0, x1, nt, nx, {"t", "x"});
}

struct NLSField {
  FieldC Q;
  /// Unboosted closed form; empty for purely sampled data.
  NLSClosure base;
  /// Total boost applied to `base`. Composition adds velocities so boosts
  /// of closures compose exactly.
  double velocity = 0.0;
  Mask mask;

  const Grid2& grid() const { return Q.grid; }
  bool analytic() const { return static_cast<bool>(base); }

  NLSJet jet(double t, double x) const {
    if (!base) throw invalid_input("NLSField: no closed form");
    const double v = velocity;
    if (v == 0.0) return base(t, x);
    const NLSJet b = base(t, x - 2.0 * v * t);
    const cplx e = std::polar(1.0, -v * v * t + v * x);
    const cplx iv(0.0, v);
    return {e * b.Q, e * (-iv * v * b.Q + b.Qt - 2.0 * v * b.Qx), e * (iv * b.Q + b.Qx),
            e * (-v * v * b.Q + 2.0 * iv * b.Qx + b.Qxx)};
  }
};

inline NLSField nls_sampled(const FieldC& Q) { return {Q, {}, 0.0, empty_mask(Q.grid)}; }

inline NLSField nls_from_closure(const Grid2& g, NLSClosure c, double velocity = 0.0) {
  NLSField f{FieldC(g), std::move(c), velocity, empty_mask(g)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f.Q(i, j) = f.jet(g.x(i), g.y(j)).Q;
  return f;
}

/// a exp(i(kx + omega t)); a solution iff omega = 2a^2 - k^2.
inline NLSClosure plane_wave(double a, double k, double omega) {
  return [=](double t, double x) {
    const cplx q = a * std::polar(1.0, k * x + omega * t);
    return NLSJet{q, cplx(0, omega) * q, cplx(0, k) * q, -k * k * q};
  };
}

/// Bright soliton eta sech(eta x) exp(i eta^2 t).
inline NLSClosure bright_soliton(double eta) {
  return [=](double t, double x) {
    const double s = 1.0 / std::cosh(eta * x), th = std::tanh(eta * x);
    const cplx p = std::polar(1.0, eta * eta * t);
    const double f = eta * s, f1 = -eta * eta * s * th, f2 = eta * eta * eta * (s - 2.0 * s * s * s);
    return NLSJet{f * p, cplx(0, eta * eta) * f * p, f1 * p, f2 * p};
  };
}

/// i Q_t + Q_xx + 2|Q|^2 Q.
inline FieldC nls_residual(const NLSField& q) {
  const Grid2& g = q.grid();
  FieldC r(g);
  if (q.analytic()) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const NLSJet e = q.jet(g.x(i), g.y(j));
        r(i, j) = I_unit * e.Qt + e.Qxx + 2.0 * std::norm(e.Q) * e.Q;
      }
    return r;
  }
  const FieldC qt = diff(q.Q, 0), qxx = diff(diff(q.Q, 1), 1);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = I_unit * qt[k] + qxx[k] + 2.0 * std::norm(q.Q[k]) * q.Q[k];
  return r;
}

/// d_t S - S x d_x^2 S.
inline Vec3Field hm_residual(const Vec3Field& S) {
  for (std::size_t k = 0; k < S.size(); ++k)
    if (std::abs(S[k].norm() - 1.0) > 1e-10) throw invalid_input("hm_residual: S is not unit length");
  const Vec3Field st = diff(S, 0), sxx = diff(diff(S, 1), 1);
  Vec3Field r(S.grid);
  for (std::size_t k = 0; k < S.size(); ++k) r[k] = st[k] - S[k].cross(sxx[k]);
  return r;
}

/// Gauge with q1 = Q, V1 = 0, q0 = i Q_x, V0 = 2|Q|^2.
inline GaugeData nls_gauge(const NLSField& q) {
  const Grid2& g = q.grid();
  GaugeData gd = GaugeData::zero(g);
  gd.mask = q.mask;
  FieldC qx(g);
  if (q.analytic()) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) qx(i, j) = q.jet(g.x(i), g.y(j)).Qx;
  } else {
    qx = diff(q.Q, 1);
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    gd.q.c1[k] = q.Q[k];
    gd.q.c0[k] = I_unit * qx[k];
    gd.V.c0[k] = 2.0 * std::norm(q.Q[k]);
  }
  return gd;
}

/// Spin frame of a NLS field: integrate dg = gJ in the gauge above, x first.
inline SpinFrameField spin_from_nls(const NLSField& q, const Mat2& g0 = Mat2::Identity(),
                                    PathOrder order = PathOrder::column_then_rows) {
  return gauge_to_frame(nls_gauge(q), g0, order);
}

struct NLSRecovery {
  NLSField Q;
  /// q0 - i (d_1 - i V_1) q1
  FieldC constraint;
  /// d_0 W_1 - d_1 W_0 with W = (V0 - 2|q1|^2, V1)
  FieldR closedness;
  FieldR alpha;
  std::string warning;
};

/// Inverse direction: read (V, q) off the frame, then gauge away W.
inline NLSRecovery nls_from_spin(const SpinFrameField& sf, double closedness_warn = 1e-2) {
  const Grid2& g = sf.grid();
  const GaugeData gd = spin_to_gauge(sf).gauge;
  NLSRecovery out;
  const FieldC dq1 = diff(gd.q.c1, 1);
  out.constraint = FieldC(g);
  OneFormR w{FieldR(g), FieldR(g)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    out.constraint[k] = gd.q.c0[k] - I_unit * (dq1[k] - I_unit * gd.V.c1[k] * gd.q.c1[k]);
    w.c0[k] = -(gd.V.c0[k] - 2.0 * std::norm(gd.q.c1[k]));
    w.c1[k] = -gd.V.c1[k];
  }
  out.closedness = diff(w.c0, 1) - diff(w.c1, 0);
  const double worst = norms(out.closedness, kMargin, sf.mask).linf;
  if (worst > closedness_warn)
    out.warning = "closedness residual " + format_double(worst) + " suggests the spin field does not solve HM";
  out.alpha = integrate_exact_form(w);
  FieldC Q(g);
  for (std::size_t k = 0; k < g.size(); ++k) Q[k] = std::polar(1.0, out.alpha[k]) * gd.q.c1[k];
  out.Q = nls_sampled(Q);
  out.Q.mask = sf.mask.empty() ? empty_mask(g) : sf.mask;
  return out;
}

/// Q_v(t, x) = exp(i(-v^2 t + v x)) Q(t, x - 2vt). Closures are boosted
/// exactly; sampled fields are resampled bicubically and nodes whose source
/// leaves the grid are masked.
inline NLSField galileo_boost(const NLSField& q, double v) {
  const Grid2& g = q.grid();
  if (q.analytic()) {
    NLSField out = nls_from_closure(g, q.base, q.velocity + v);
    out.mask = q.mask;
    return out;
  }
  NLSField out = nls_sampled(FieldC(g));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double t = g.x(i), x = g.y(j);
      const auto s = interpolate(q.Q, t, x - 2.0 * v * t);
      if (!s) {
        out.mask[g.index(i, j)] = 1;
        continue;
      }
      out.Q(i, j) = std::polar(1.0, -v * v * t + v * x) * *s;
    }
  if (!q.mask.empty()) out.mask = mask_union(out.mask, q.mask);
  return out;
}

/// Recover Q from Q_v: pull back exp(i(v^2 t - v x)) Q_v along (t, x) -> (t, x + 2vt).
inline FieldC unboost(const NLSField& qv, double v, Mask* outside = nullptr) {
  const Grid2& g = qv.grid();
  FieldC r(g);
  if (outside) *outside = empty_mask(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double t = g.x(i), x = g.y(j), xs = x + 2.0 * v * t;
      cplx val;
      if (qv.analytic()) {
        val = qv.jet(t, xs).Q;
      } else {
        const auto s = interpolate(qv.Q, t, xs);
        if (!s) {
          if (outside) (*outside)[g.index(i, j)] = 1;
          continue;
        }
        val = *s;
      }
      r(i, j) = std::polar(1.0, v * v * t - v * xs) * val;
    }
  return r;
}

/// i(d_t - 2v d_x) q + q_xx + 2|q|^2 q + (rho - v^2) q, finite differences.
inline FieldC eq36_residual(const FieldC& q1, double rho, double v) {
  const FieldC qt = diff(q1, 0), qx = diff(q1, 1), qxx = diff(qx, 1);
  FieldC r(q1.grid);
  for (std::size_t k = 0; k < r.size(); ++k)
    r[k] = I_unit * (qt[k] - 2.0 * v * qx[k]) + qxx[k] + 2.0 * std::norm(q1[k]) * q1[k] + (rho - v * v) * q1[k];
  return r;
}

// ------------------------------------------------------------ Zakharov-Shabat

struct ZSLax {
  cplx lambda = 0;
  /// d_x psi = psi U, d_t psi = psi V.
  MatField U, V;
  /// d_t U and d_x V from the closed form when available.
  std::optional<MatField> Ut, Vx;
};

namespace detail {

inline Mat2 zs_U(const NLSJet& e, cplx lam) {
  Mat2 u;
  u << 0.5 * I_unit * lam, -std::conj(e.Q), e.Q, -0.5 * I_unit * lam;
  return u;
}

inline Mat2 zs_V(const NLSJet& e, cplx lam) {
  const double a = std::norm(e.Q);
  Mat2 v;
  v << I_unit * a - 0.5 * I_unit * lam * lam, I_unit * std::conj(e.Qx) + lam * std::conj(e.Q),
      I_unit * e.Qx - lam * e.Q, -I_unit * a + 0.5 * I_unit * lam * lam;
  return v;
}

inline Mat2 zs_Ut(const NLSJet& e) {
  Mat2 u;
  u << 0, -std::conj(e.Qt), e.Qt, 0;
  return u;
}

inline Mat2 zs_Vx(const NLSJet& e, cplx lam) {
  const double da = 2.0 * (std::conj(e.Q) * e.Qx).real();
  Mat2 v;
  v << I_unit * da, I_unit * std::conj(e.Qxx) + lam * std::conj(e.Qx), I_unit * e.Qxx - lam * e.Qx, -I_unit * da;
  return v;
}

}  // namespace detail

/// U = [[i lam/2, -conj Q], [Q, -i lam/2]], V = V0 - lam U0 - lam^2 e3.
inline ZSLax zs_lax(const NLSField& q, cplx lambda) {
  const Grid2& g = q.grid();
  ZSLax lx{lambda, MatField(g), MatField(g), std::nullopt, std::nullopt};
  if (q.analytic()) {
    lx.Ut = MatField(g);
    lx.Vx = MatField(g);
  }
  const FieldC qx = q.analytic() ? FieldC() : diff(q.Q, 1);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      NLSJet e;
      if (q.analytic()) {
        e = q.jet(g.x(i), g.y(j));
        (*lx.Ut)(i, j) = detail::zs_Ut(e);
        (*lx.Vx)(i, j) = detail::zs_Vx(e, lambda);
      } else {
        e.Q = q.Q(i, j);
        e.Qx = qx(i, j);
      }
      lx.U(i, j) = detail::zs_U(e, lambda);
      lx.V(i, j) = detail::zs_V(e, lambda);
    }
  return lx;
}

/// d_t U - d_x V - [U, V]. At lambda = 0 the off-diagonal entries are
/// -i conj(R) and -i R with R the NLS residual.
inline MatField zs_curvature(const ZSLax& lx) {
  const MatField ut = lx.Ut ? *lx.Ut : diff(lx.U, 0);
  const MatField vx = lx.Vx ? *lx.Vx : diff(lx.V, 1);
  MatField k(lx.U.grid);
  for (std::size_t n = 0; n < k.size(); ++n) k[n] = ut[n] - vx[n] - commutator(lx.U[n], lx.V[n]);
  return k;
}

/// Sign check of the curvature against the NLS residual on the non-solution
/// Q = e^{it}, whose residual is e^{it}. Returns the largest entry mismatch.
inline double zs_sign_selftest() {
  const Grid2 g = tx_grid(0.0, 1.0, -1.0, 1.0, 5, 5);
  const NLSField q = nls_from_closure(g, plane_wave(1.0, 0.0, 1.0));
  const FieldC r = nls_residual(q);
  double worst = 0.0;
  for (cplx lam : {cplx(0), cplx(1.0), cplx(0.7, 0.3)}) {
    const MatField k = zs_curvature(zs_lax(q, lam));
    for (std::size_t n = 0; n < k.size(); ++n) {
      Mat2 want;
      want << 0, -I_unit * std::conj(r[n]), -I_unit * r[n], 0;
      worst = std::max(worst, (k[n] - want).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace gaugeflow
