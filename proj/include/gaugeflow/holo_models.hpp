#pragma once

/// Constrained models on the plane: self-duality, Liouville, conformal
/// sinh-Gordon and light-cone sine-Gordon, with their gauge forms and Lax
/// families.

#include "gaugeflow/sigma_gauge.hpp"

#include <Eigen/Sparse>

#include <random>

namespace gaugeflow {

/// Wirtinger derivatives of any field type (matrices, vectors).
template <class T>
std::pair<Field<T>, Field<T>> wirtinger_any(const Field<T>& f) {
  const Field<T> fx = diff(f, 0), fy = diff(f, 1);
  const cplx hi(0.0, 0.5);
  return {zip(fx, fy, [&](const T& a, const T& b) -> T { return 0.5 * a - hi * b; }),
          zip(fx, fy, [&](const T& a, const T& b) -> T { return 0.5 * a + hi * b; })};
}

// ------------------------------------------------------------ self-duality

/// dx S - sign S x dy S. Holomorphic maps zero the sign = -1 residual,
/// antiholomorphic ones the sign = +1 residual.
inline Vec3Field selfdual_residual(const Vec3Field& S, int sign) {
  if (sign != 1 && sign != -1) throw invalid_input("selfdual_residual: sign must be +1 or -1");
  const Vec3Field sx = diff(S, 0), sy = diff(S, 1);
  Vec3Field r(S.grid);
  for (std::size_t k = 0; k < S.size(); ++k) r[k] = sx[k] - sign * S[k].cross(sy[k]);
  return r;
}

/// S x (dx^2 + dy^2) S.
inline Vec3Field harmonic_map_residual(const Vec3Field& S) {
  const Vec3Field lap = laplacian(S);
  Vec3Field r(S.grid);
  for (std::size_t k = 0; k < S.size(); ++k) r[k] = S[k].cross(lap[k]);
  return r;
}

// ------------------------------------------------------------ Liouville

struct LiouvilleSolution {
  RationalMap source;
  FieldR phi;
  FieldC zeta, dzeta;
  Mask mask;
};

/// Physical exclusion radius around critical points of the map.
inline constexpr double kCriticalRadius = 0.3;

/// phi = log(|zeta'|^2 / (1 + |zeta|^2)^2), evaluated through the
/// Wronskian W = N'D - ND' as log(|W|^2 / (|N|^2 + |D|^2)^2) so poles are
/// regular. Nodes near zeros of W are masked.
inline LiouvilleSolution liouville_from_map(const RationalMap& m, const Grid2& g,
                                            double exclusion = kCriticalRadius) {
  if (m.is_constant()) throw invalid_input("liouville_from_map: constant map");
  LiouvilleSolution s{m, FieldR(g), FieldC(g), FieldC(g), empty_mask(g)};
  const Polynomial w = m.wronskian();
  const auto crit = m.critical_points();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const cplx z = g.z(i, j);
      const std::size_t k = g.index(i, j);
      const cplx n = m.numerator()(z), d = m.denominator()(z);
      s.phi[k] = std::log(std::norm(w(z)) / std::pow(std::norm(n) + std::norm(d), 2));
      s.zeta[k] = n / d;
      s.dzeta[k] = w(z) / (d * d);
      for (const cplx& c : crit)
        if (std::abs(z - c) < exclusion) s.mask[k] = 1;
      if (!std::isfinite(s.phi[k])) s.mask[k] = 1;
    }
  return s;
}

/// -(dx^2 + dy^2) phi - 8 e^phi.
inline FieldR liouville_residual(const FieldR& phi) {
  return zip(laplacian(phi), phi, [](double lap, double p) { return -lap - 8.0 * std::exp(p); });
}

/// Connection (A_z, A_zbar) and Higgs coefficient Phi (of dz).
struct HolomorphicGauge {
  FieldC Az, Azbar, Phi;
};

/// A_zbar = -dzbar(phi)/2, A_z = -conj(A_zbar), Phi = e^{phi/2}.
inline HolomorphicGauge liouville_gauge(const FieldR& phi) {
  const auto [pz, pzb] = wirtinger(phi);
  HolomorphicGauge h{FieldC(phi.grid), FieldC(phi.grid), FieldC(phi.grid)};
  for (std::size_t k = 0; k < phi.size(); ++k) {
    h.Azbar[k] = -0.5 * pzb[k];
    h.Az[k] = -std::conj(h.Azbar[k]);
    h.Phi[k] = std::exp(0.5 * phi[k]);
  }
  return h;
}

struct HolomorphicGaugeResidual {
  FieldC F;   // dz A_zbar - dzbar A_z - sgn 2 |Phi|^2
  FieldC dA;  // (dzbar + A_zbar) Phi
};

/// sgn = +1 for F = 2 Phi Phi*, -1 for F = -2 Phi Phi*.
inline HolomorphicGaugeResidual holomorphic_gauge_residual(const HolomorphicGauge& h, double sgn = 1.0) {
  const FieldC dzAzb = d_z(h.Azbar), dzbAz = d_zbar(h.Az), dzbPhi = d_zbar(h.Phi);
  HolomorphicGaugeResidual r{FieldC(h.Phi.grid), FieldC(h.Phi.grid)};
  for (std::size_t k = 0; k < h.Phi.size(); ++k) {
    r.F[k] = dzAzb[k] - dzbAz[k] - sgn * 2.0 * std::norm(h.Phi[k]);
    r.dA[k] = dzbPhi[k] + h.Azbar[k] * h.Phi[k];
  }
  return r;
}

// ------------------------------------------------------------ sinh-Gordon

struct ShGData {
  FieldR phi;
  FieldC U;
  int k = 0;
  cplx lambda = 1.0;
  Mask mask;
  /// Exact U(z) when known.
  std::function<cplx(cplx)> U_fn;
  /// Exact phi(z) when known (used by conformal_transform instead of resampling).
  std::function<double(cplx)> phi_fn;
};

inline cplx ipow(cplx z, int k) {
  cplx r = 1.0;
  for (int n = 0; n < k; ++n) r *= z;
  return r;
}

/// ShGData with U = z^k sampled exactly.
inline ShGData shg_power(const FieldR& phi, int k, cplx lambda = 1.0) {
  ShGData d;
  d.phi = phi;
  d.k = k;
  d.lambda = lambda;
  d.U_fn = [k](cplx z) { return ipow(z, k); };
  d.U = sample_z(phi.grid, d.U_fn);
  return d;
}

struct ShGResidual {
  FieldR equation;  // -lap(phi) - 8 (|U|^2 e^phi - e^-phi)
  FieldC dbarU;
};

inline ShGResidual shg_residual(const ShGData& d) {
  const FieldR lap = laplacian(d.phi);
  ShGResidual r{FieldR(d.phi.grid), d_zbar(d.U)};
  for (std::size_t k = 0; k < d.phi.size(); ++k)
    r.equation[k] = -lap[k] - 8.0 * (std::norm(d.U[k]) * std::exp(d.phi[k]) - std::exp(-d.phi[k]));
  return r;
}

struct ShGGauge {
  GaugeData gauge;
  FieldC qz, qzbar, Az, Azbar;
  /// F - 2(|q_z|^2 - |q_zbar|^2), (dzbar + A_zbar) q_z, (dz + A_z) q_zbar.
  FieldC res_F, res_qz, res_qzbar;
};

/// s = U e^{phi/2} dz + e^{-phi/2} dzbar, A = (dz phi / 2) dz - (dzbar phi / 2) dzbar,
/// expressed also as real components (V = iA, q_x, q_y).
inline ShGGauge shg_gauge(const ShGData& d) {
  const Grid2& g = d.phi.grid;
  const auto [pz, pzb] = wirtinger(d.phi);
  ShGGauge s{GaugeData::zero(g), FieldC(g), FieldC(g), FieldC(g), FieldC(g), {}, {}, {}};
  s.gauge.mask = d.mask;
  for (std::size_t k = 0; k < g.size(); ++k) {
    s.qz[k] = d.U[k] * std::exp(0.5 * d.phi[k]);
    s.qzbar[k] = std::exp(-0.5 * d.phi[k]);
    s.Az[k] = 0.5 * pz[k];
    s.Azbar[k] = -0.5 * pzb[k];
    s.gauge.q.c0[k] = s.qz[k] + s.qzbar[k];
    s.gauge.q.c1[k] = I_unit * (s.qz[k] - s.qzbar[k]);
    const cplx Ax = s.Az[k] + s.Azbar[k], Ay = I_unit * (s.Az[k] - s.Azbar[k]);
    s.gauge.V.c0[k] = (I_unit * Ax).real();
    s.gauge.V.c1[k] = (I_unit * Ay).real();
  }
  const FieldC F = d_z(s.Azbar) - d_zbar(s.Az);
  const FieldC dzb_qz = d_zbar(s.qz), dz_qzb = d_z(s.qzbar);
  s.res_F = FieldC(g);
  s.res_qz = FieldC(g);
  s.res_qzbar = FieldC(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    s.res_F[k] = F[k] - 2.0 * (std::norm(s.qz[k]) - std::norm(s.qzbar[k]));
    s.res_qz[k] = dzb_qz[k] + s.Azbar[k] * s.qz[k];
    s.res_qzbar[k] = dz_qzb[k] + s.Az[k] * s.qzbar[k];
  }
  return s;
}

struct LaxPair {
  MatField M0, M1;
  /// d0 M1 - d1 M0 + [M0, M1] for the system d_mu g = g M_mu.
  MatField curvature;
};

/// Flatness defect of d_mu g = g M_mu with respect to derivative operators D0, D1.
template <class D0, class D1>
MatField zero_curvature(const MatField& m0, const MatField& m1, D0&& d0, D1&& d1) {
  const MatField a = d0(m1), b = d1(m0);
  MatField k(m0.grid);
  for (std::size_t n = 0; n < m0.size(); ++n) k[n] = a[n] - b[n] + commutator(m0[n], m1[n]);
  return k;
}

/// M_z = [[-dz phi/4, -e^{-phi/2}], [lambda U e^{phi/2}, dz phi/4]],
/// M_zbar = [[dzbar phi/4, -conj(U) e^{phi/2}/lambda], [e^{-phi/2}, -dzbar phi/4]].
/// The (1,1) curvature entry is -1/8 of the equation residual.
inline LaxPair shg_lax(const ShGData& d, std::optional<cplx> lambda_override = std::nullopt) {
  const cplx lam = lambda_override.value_or(d.lambda);
  if (lam == cplx(0)) throw invalid_input("shg_lax: lambda = 0");
  const Grid2& g = d.phi.grid;
  const auto [pz, pzb] = wirtinger(d.phi);
  LaxPair lp{MatField(g), MatField(g), {}};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double ep = std::exp(0.5 * d.phi[k]), em = std::exp(-0.5 * d.phi[k]);
    lp.M0[k] << -0.25 * pz[k], -em, lam * d.U[k] * ep, 0.25 * pz[k];
    lp.M1[k] << 0.25 * pzb[k], -std::conj(d.U[k]) * ep / lam, em, -0.25 * pzb[k];
  }
  lp.curvature = zero_curvature(
      lp.M0, lp.M1, [](const MatField& f) { return wirtinger_any(f).first; },
      [](const MatField& f) { return wirtinger_any(f).second; });
  return lp;
}

/// phi_theta(z) = phi(e^{i theta} z) by bicubic resampling, lambda = e^{-(k+2) i theta}.
/// Nodes whose rotated position leaves the grid are masked.
inline ShGData shg_rotate(const ShGData& d, double theta) {
  ShGData out = d;
  const Grid2& g = d.phi.grid;
  out.mask = empty_mask(g);
  const cplx rot = std::polar(1.0, theta);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const cplx w = rot * g.z(i, j);
      const std::size_t k = g.index(i, j);
      const auto v = interpolate(d.phi, w.real(), w.imag());
      if (v) {
        out.phi[k] = *v;
        if (!d.mask.empty()) {
          const int ii = static_cast<int>(std::lround((w.real() - g.x0) / g.hx));
          const int jj = static_cast<int>(std::lround((w.imag() - g.y0) / g.hy));
          if (d.mask[g.index(std::clamp(ii, 0, g.nx - 1), std::clamp(jj, 0, g.ny - 1))]) out.mask[k] = 1;
        }
      } else {
        out.phi[k] = 0.0;
        out.mask[k] = 1;
      }
    }
  out.lambda = std::polar(1.0, -(d.k + 2) * theta);
  out.phi_fn = d.phi_fn ? std::function<double(cplx)>([f = d.phi_fn, rot](cplx z) { return f(rot * z); })
                        : std::function<double(cplx)>();
  return out;
}

/// phi~(z) = phi(f(z)) + 2 log|f'(z)|, U~(z) = U(f(z)) f'(z)^2.
inline ShGData conformal_transform(const ShGData& d, const RationalMap& f) {
  const Grid2& g = d.phi.grid;
  ShGData out = d;
  out.mask = empty_mask(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const cplx z = g.z(i, j);
      const std::size_t k = g.index(i, j);
      const cplx w = f(z), fp = f.derivative(z);
      std::optional<double> p;
      if (d.phi_fn)
        p = d.phi_fn(w);
      else
        p = interpolate(d.phi, w.real(), w.imag());
      std::optional<cplx> u;
      if (d.U_fn)
        u = d.U_fn(w);
      else
        u = interpolate(d.U, w.real(), w.imag());
      if (!p || !u || std::abs(fp) == 0.0) {
        out.mask[k] = 1;
        out.phi[k] = 0.0;
        out.U[k] = 0.0;
        continue;
      }
      out.phi[k] = *p + 2.0 * std::log(std::abs(fp));
      out.U[k] = *u * fp * fp;
    }
  if (d.phi_fn)
    out.phi_fn = [pf = d.phi_fn, f](cplx z) { return pf(f(z)) + 2.0 * std::log(std::abs(f.derivative(z))); };
  if (d.U_fn)
    out.U_fn = [uf = d.U_fn, f](cplx z) {
      const cplx fp = f.derivative(z);
      return uf(f(z)) * fp * fp;
    };
  return out;
}

struct RelaxationResult {
  FieldR phi;
  int iterations = 0;
  /// Max-norm of the discrete (compact five-point) residual at exit.
  double discrete_residual = 0.0;
  bool converged = false;
};

/// Seed for relaxation oracles from GAUGEFLOW_SEED (default 0).
inline std::uint64_t oracle_seed() {
  const char* s = std::getenv("GAUGEFLOW_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw invalid_input("GAUGEFLOW_SEED must be a non-negative integer");
  }
}

/// Newton relaxation of -lap(phi) = 8 (|U|^2 e^phi - e^-phi) with Dirichlet
/// data phi = boundary(x, y) on the grid edge. The Jacobian
/// -lap - 8 (|U|^2 e^phi + e^-phi) is symmetric; on small domains it stays
/// definite and a sparse LDL^T factorization is used.
inline RelaxationResult relax_shg(const Grid2& g, const std::function<cplx(cplx)>& U,
                                  const std::function<double(double, double)>& boundary, std::uint64_t seed,
                                  double tol = 1e-12, int max_iter = 50) {
  RelaxationResult res{sample(g, boundary)};
  const int mx = g.nx - 2, my = g.ny - 2;
  const int n = mx * my;
  auto id = [&](int i, int j) { return (j - 1) * mx + (i - 1); };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pert(-0.05, 0.05);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) res.phi(i, j) += pert(rng);
  FieldR u2 = sample_z(g, [&](cplx z) { return std::norm(U(z)); });
  const double ax = 1.0 / (g.hx * g.hx), ay = 1.0 / (g.hy * g.hy);
  auto residual = [&](Eigen::VectorXd& F) {
    F.resize(n);
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i) {
        const double p = res.phi(i, j);
        const double lap = ax * (res.phi(i + 1, j) - 2 * p + res.phi(i - 1, j)) +
                           ay * (res.phi(i, j + 1) - 2 * p + res.phi(i, j - 1));
        F[id(i, j)] = -lap - 8.0 * (u2(i, j) * std::exp(p) - std::exp(-p));
      }
  };
  Eigen::VectorXd F;
  residual(F);
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    res.discrete_residual = F.lpNorm<Eigen::Infinity>();
    if (res.discrete_residual < tol) {
      res.converged = true;
      break;
    }
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * n);
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i) {
        const int r = id(i, j);
        const double p = res.phi(i, j);
        trip.emplace_back(r, r, 2 * ax + 2 * ay - 8.0 * (u2(i, j) * std::exp(p) + std::exp(-p)));
        if (i > 1) trip.emplace_back(r, id(i - 1, j), -ax);
        if (i < g.nx - 2) trip.emplace_back(r, id(i + 1, j), -ax);
        if (j > 1) trip.emplace_back(r, id(i, j - 1), -ay);
        if (j < g.ny - 2) trip.emplace_back(r, id(i, j + 1), -ay);
      }
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(J);
    if (solver.info() != Eigen::Success) break;
    const Eigen::VectorXd delta = solver.solve(-F);
    for (int j = 1; j < g.ny - 1; ++j)
      for (int i = 1; i < g.nx - 1; ++i) res.phi(i, j) += delta[id(i, j)];
    residual(F);
    // the discrete residual carries roundoff of order eps / h^2; a vanishing
    // Newton update is the other exit
    if (delta.lpNorm<Eigen::Infinity>() < 1e-13) {
      res.discrete_residual = F.lpNorm<Eigen::Infinity>();
      res.converged = res.discrete_residual < 1e-8;
      ++res.iterations;
      break;
    }
  }
  return res;
}

// ------------------------------------------------------------ sine-Gordon

/// Fields on a (t, x) grid with light-cone coordinates t+- = t +- x,
/// d+- = (dt +- dx) / 2.
struct SGData {
  FieldR Phi;
  std::function<double(double)> r_plus = [](double) { return 1.0; };
  std::function<double(double)> r_minus = [](double) { return 1.0; };
  double m = 1.0;
  cplx lambda = 1.0;

  FieldR W() const {
    return sample(Phi.grid, [&](double t, double x) { return std::log(r_plus(t + x)) + std::log(r_minus(t - x)); });
  }
};

template <class T>
Field<T> d_plus(const Field<T>& f) {
  return 0.5 * (diff(f, 0) + diff(f, 1));
}
template <class T>
Field<T> d_minus(const Field<T>& f) {
  return 0.5 * (diff(f, 0) - diff(f, 1));
}

struct SGResidual {
  FieldR equation;  // d+ d- Phi + 4 e^W sin Phi
  FieldR dW;        // d+ d- W
};

inline SGResidual sg_residual(const SGData& d) {
  const FieldR ppm = d_plus(d_minus(d.Phi));
  const FieldR W = d.W();
  SGResidual r{FieldR(d.Phi.grid), d_plus(d_minus(W))};
  for (std::size_t k = 0; k < d.Phi.size(); ++k) r.equation[k] = ppm[k] + 4.0 * std::exp(W[k]) * std::sin(d.Phi[k]);
  return r;
}

struct SGGauge {
  GaugeData gauge;
  FieldC s_plus, s_minus, A_minus;
  /// F_{+-} - 2 (s+ conj s- - s- conj s+), (d+ + A+) s-, (d- + A-) s+.
  FieldC res_F, res_plus, res_minus;
};

/// s = r+ e^{i Phi} dt+ + r- dt-, A = -i d-Phi dt-.
inline SGGauge sg_gauge(const SGData& d) {
  const Grid2& g = d.Phi.grid;
  const FieldR dmPhi = d_minus(d.Phi);
  SGGauge s{GaugeData::zero(g), FieldC(g), FieldC(g), FieldC(g), {}, {}, {}};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      const double t = g.x(i), x = g.y(j);
      s.s_plus[k] = d.r_plus(t + x) * std::polar(1.0, d.Phi[k]);
      s.s_minus[k] = d.r_minus(t - x);
      s.A_minus[k] = -I_unit * dmPhi[k];
      s.gauge.q.c0[k] = s.s_plus[k] + s.s_minus[k];
      s.gauge.q.c1[k] = s.s_plus[k] - s.s_minus[k];
      s.gauge.V.c0[k] = dmPhi[k];
      s.gauge.V.c1[k] = -dmPhi[k];
    }
  const FieldC F = d_plus(s.A_minus);
  const FieldC dp_sm = d_plus(s.s_minus), dm_sp = d_minus(s.s_plus);
  s.res_F = FieldC(g);
  s.res_plus = FieldC(g);
  s.res_minus = FieldC(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    s.res_F[k] = F[k] - 2.0 * (s.s_plus[k] * std::conj(s.s_minus[k]) - s.s_minus[k] * std::conj(s.s_plus[k]));
    s.res_plus[k] = dp_sm[k];
    s.res_minus[k] = dm_sp[k] + s.A_minus[k] * s.s_plus[k];
  }
  return s;
}

/// M+ = [[0, -(m^2/lambda) e^{-i Phi}], [(m^2/lambda) e^{i Phi}, 0]],
/// M- = [[(i/2) d-Phi, -lambda], [lambda, -(i/2) d-Phi]];
/// curvature d+ M- - d- M+ + [M+, M-], whose (1,1) entry is (i/2) times
/// d+d-Phi + 4 m^2 sin Phi.
inline LaxPair sg_lax(const FieldR& Phi, double m, cplx lambda) {
  if (lambda == cplx(0)) throw invalid_input("sg_lax: lambda = 0");
  const Grid2& g = Phi.grid;
  const FieldR dmPhi = d_minus(Phi);
  const double m2 = m * m;
  LaxPair lp{MatField(g), MatField(g), {}};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx e = std::polar(1.0, Phi[k]);
    lp.M0[k] << 0.0, -(m2 / lambda) * std::conj(e), (m2 / lambda) * e, 0.0;
    lp.M1[k] << 0.5 * I_unit * dmPhi[k], -lambda, lambda, -0.5 * I_unit * dmPhi[k];
  }
  lp.curvature = zero_curvature(
      lp.M0, lp.M1, [](const MatField& f) { return d_plus(f); }, [](const MatField& f) { return d_minus(f); });
  return lp;
}

/// Static kink Phi(x) with Phi'' = 16 m^2 sin Phi on [xa, xb], Phi(xa) = 0,
/// Phi(xb) = 2 pi, relaxed by damped Newton from a seeded ramp.
inline std::vector<double> relax_sg_kink(double xa, double xb, int n, double m, std::uint64_t seed,
                                         int max_iter = 100) {
  const double h = (xb - xa) / (n - 1);
  std::vector<double> phi(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pert(-0.05, 0.05);
  const double width = 1.0 / (4.0 * m);
  for (int k = 0; k < n; ++k) {
    const double x = xa + k * h - 0.5 * (xa + xb);
    phi[k] = std::numbers::pi * (1.0 + std::tanh(x / width));
    if (k > 0 && k < n - 1) phi[k] += pert(rng);
  }
  phi[0] = 0.0;
  phi[n - 1] = 2.0 * std::numbers::pi;
  const double c = 16.0 * m * m, ih2 = 1.0 / (h * h);
  auto resid = [&](const std::vector<double>& p, Eigen::VectorXd& F) {
    F.resize(n - 2);
    for (int k = 1; k < n - 1; ++k) F[k - 1] = (p[k + 1] - 2 * p[k] + p[k - 1]) * ih2 - c * std::sin(p[k]);
  };
  Eigen::VectorXd F;
  resid(phi, F);
  for (int it = 0; it < max_iter && F.lpNorm<Eigen::Infinity>() > 1e-11; ++it) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 1; k < n - 1; ++k) {
      trip.emplace_back(k - 1, k - 1, -2 * ih2 - c * std::cos(phi[k]));
      if (k > 1) trip.emplace_back(k - 1, k - 2, ih2);
      if (k < n - 2) trip.emplace_back(k - 1, k, ih2);
    }
    Eigen::SparseMatrix<double> J(n - 2, n - 2);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
    const Eigen::VectorXd delta = lu.solve(-F);
    const double f0 = F.norm();
    double step = 1.0;
    std::vector<double> trial = phi;
    for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
      for (int k = 1; k < n - 1; ++k) trial[k] = phi[k] + step * delta[k - 1];
      resid(trial, F);
      if (F.norm() < f0) break;
    }
    phi = trial;
  }
  return phi;
}

}  // namespace gaugeflow
