#pragma once

/// Exact 2x2 matrix algebra for su(2) and su(1,1).
///
/// Both algebras are handled through a three-element matrix basis. The
/// structure constants c^{ij}_k are recomputed from matrix commutators once
/// per algebra, never transcribed, so su(1,1) and su(2) share one code path.
///
///   su(2):   e^j = (i/2) sigma^j,                      metric diag(1, 1, 1)
///   su(1,1): e^1 = -sigma^1/2, e^2 = -sigma^2/2,
///            e^3 = (i/2) sigma^3,                      metric diag(-1, -1, 1)

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace gaugeflow {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr cplx I_unit{0.0, 1.0};

/// Raised for malformed arguments (mismatched algebras, out-of-domain input).
struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class AlgebraKind { su2, su11 };

inline const char* to_string(AlgebraKind k) { return k == AlgebraKind::su2 ? "su2" : "su11"; }

namespace pauli {
inline Mat2 identity() { return Mat2::Identity(); }
inline Mat2 s1() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}
inline Mat2 s2() {
  Mat2 m;
  m << 0, -I_unit, I_unit, 0;
  return m;
}
inline Mat2 s3() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}
inline Mat2 plus() {
  Mat2 m;
  m << 0, 1, 0, 0;
  return m;
}
inline Mat2 minus() {
  Mat2 m;
  m << 0, 0, 1, 0;
  return m;
}
}  // namespace pauli

/// Basis matrices, metric signature and structure constants of one algebra.
class Algebra {
 public:
  explicit Algebra(AlgebraKind kind) : kind_(kind) {
    if (kind == AlgebraKind::su2) {
      basis_ = {0.5 * I_unit * pauli::s1(), 0.5 * I_unit * pauli::s2(), 0.5 * I_unit * pauli::s3()};
      signature_ = {1.0, 1.0, 1.0};
    } else {
      basis_ = {-0.5 * pauli::s1(), -0.5 * pauli::s2(), 0.5 * I_unit * pauli::s3()};
      signature_ = {-1.0, -1.0, 1.0};
    }
    for (int k = 0; k < 3; ++k) gram_[k] = (basis_[k] * basis_[k]).trace();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Mat2 comm = basis_[i] * basis_[j] - basis_[j] * basis_[i];
        const CVec3 coeff = project_complex(comm);
        for (int k = 0; k < 3; ++k) c_[i][j][k] = coeff[k].real();
      }
  }

  /// Shared immutable instances.
  static const Algebra& get(AlgebraKind kind) {
    static const Algebra su2(AlgebraKind::su2);
    static const Algebra su11(AlgebraKind::su11);
    return kind == AlgebraKind::su2 ? su2 : su11;
  }

  AlgebraKind kind() const { return kind_; }
  const Mat2& basis(int j) const { return basis_[j]; }
  /// c^{ij}_k with [e^i, e^j] = sum_k c^{ij}_k e^k.
  double c(int i, int j, int k) const { return c_[i][j][k]; }
  double signature(int j) const { return signature_[j]; }
  Mat3 metric() const { return Vec3(signature_[0], signature_[1], signature_[2]).asDiagonal(); }

  /// Complex coefficients of a traceless matrix in this basis.
  CVec3 project_complex(const Mat2& m) const {
    CVec3 out;
    for (int k = 0; k < 3; ++k) out[k] = (basis_[k] * m).trace() / gram_[k];
    return out;
  }

  Vec3 project(const Mat2& m) const { return project_complex(m).real(); }

  Mat2 matrix(const Vec3& x) const { return x[0] * basis_[0] + x[1] * basis_[1] + x[2] * basis_[2]; }

  Mat2 matrix(const CVec3& x) const { return x[0] * basis_[0] + x[1] * basis_[1] + x[2] * basis_[2]; }

  /// Bracket-induced product (u x_c v)_k = c^{ij}_k u_i v_j.
  Vec3 bracket_product(const Vec3& u, const Vec3& v) const {
    Vec3 out = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) out[k] += c_[i][j][k] * u[i] * v[j];
    return out;
  }

  CVec3 bracket_product(const CVec3& u, const CVec3& v) const {
    CVec3 out = CVec3::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) out[k] += c_[i][j][k] * u[i] * v[j];
    return out;
  }

 private:
  AlgebraKind kind_;
  std::array<Mat2, 3> basis_;
  std::array<cplx, 3> gram_{};
  std::array<double, 3> signature_{};
  double c_[3][3][3]{};
};

/// Cross product on the algebra playing the role of the R^3 cross product.
/// For su(2) this is the ordinary cross product, which equals minus the
/// bracket-induced product; su(1,1) uses the same sign relation.
inline Vec3 cross(AlgebraKind kind, const Vec3& u, const Vec3& v) {
  return -Algebra::get(kind).bracket_product(u, v);
}

struct AlgebraVector {
  Vec3 coeffs = Vec3::Zero();
  AlgebraKind kind = AlgebraKind::su2;

  static AlgebraVector basis(AlgebraKind kind, int j) {
    AlgebraVector v{Vec3::Zero(), kind};
    v.coeffs[j] = 1.0;
    return v;
  }

  Mat2 matrix() const { return Algebra::get(kind).matrix(coeffs); }
};

inline AlgebraVector operator*(double s, const AlgebraVector& v) { return {s * v.coeffs, v.kind}; }

/// sum c^{ij}_k x_i y_j e^k
inline AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) {
  if (x.kind != y.kind) throw invalid_input("bracket: mismatched algebra kinds");
  return {Algebra::get(x.kind).bracket_product(x.coeffs, y.coeffs), x.kind};
}

inline Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(const Mat2& g, AlgebraKind kind, double tol = 1e-12) : g_(g), kind_(kind) {
    if (!is_valid(g, kind, tol)) throw invalid_input("GroupElement: matrix violates group invariants");
  }

  static GroupElement identity(AlgebraKind kind) { return GroupElement(Mat2::Identity(), kind); }

  static bool is_valid(const Mat2& g, AlgebraKind kind, double tol = 1e-12) {
    if (std::abs(g.determinant() - 1.0) > tol) return false;
    const Mat2 eta = kind == AlgebraKind::su2 ? Mat2(Mat2::Identity()) : pauli::s3();
    return (g.adjoint() * eta * g - eta).cwiseAbs().maxCoeff() <= tol;
  }

  const Mat2& matrix() const { return g_; }
  AlgebraKind kind() const { return kind_; }

  GroupElement operator*(const GroupElement& o) const {
    if (o.kind_ != kind_) throw invalid_input("GroupElement: mismatched algebra kinds");
    return GroupElement(g_ * o.g_, kind_, 1e-10);
  }
  GroupElement operator-() const { return GroupElement(-g_, kind_); }
  GroupElement inverse() const {
    Mat2 inv;
    inv << g_(1, 1), -g_(0, 1), -g_(1, 0), g_(0, 0);
    return GroupElement(inv, kind_, 1e-10);
  }

 private:
  Mat2 g_ = Mat2::Identity();
  AlgebraKind kind_ = AlgebraKind::su2;
};

/// R with Ad(g) e^j = sum_k e^k R_kj.
inline Mat3 adjoint_rotation(const Mat2& g, AlgebraKind kind) {
  const Algebra& alg = Algebra::get(kind);
  Mat2 ginv;
  ginv << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  const cplx det = g.determinant();
  ginv /= det;
  Mat3 r;
  for (int j = 0; j < 3; ++j) r.col(j) = alg.project(g * alg.basis(j) * ginv);
  return r;
}

inline Mat3 adjoint_rotation(const GroupElement& g) { return adjoint_rotation(g.matrix(), g.kind()); }

inline bool is_rotation(const Mat3& r, AlgebraKind kind, double tol = 1e-12) {
  const Mat3 eta = Algebra::get(kind).metric();
  return (r.transpose() * eta * r - eta).cwiseAbs().maxCoeff() <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

/// Derivation matrix of ad(alpha): M(k, i) = sum_j c^{ji}_k alpha_j.
/// Column i holds the image of e^i.
inline Mat3 derivation_matrix(const AlgebraVector& alpha) {
  const Algebra& alg = Algebra::get(alpha.kind);
  Mat3 m = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) m(k, i) += alg.c(j, i, k) * alpha.coeffs[j];
  return m;
}

/// Largest violation of the derivation identity
///   sum_s M(k,s) c^{ij}_s = sum_s M(s,i) c^{sj}_k + sum_s M(s,j) c^{is}_k.
inline double derivation_defect(const Mat3& m, AlgebraKind kind) {
  const Algebra& alg = Algebra::get(kind);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double lhs = 0.0, rhs = 0.0;
        for (int s = 0; s < 3; ++s) {
          lhs += m(k, s) * alg.c(i, j, s);
          rhs += m(s, i) * alg.c(s, j, k) + m(s, j) * alg.c(i, s, k);
        }
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

inline bool is_derivation(const Mat3& m, AlgebraKind kind, double tol = 1e-12) {
  return derivation_defect(m, kind) <= tol;
}

/// exp of a traceless 2x2 matrix. X^2 = delta I with delta = -det X, so
/// exp X = cosh(s) I + sinh(s)/s X with s^2 = delta. Near delta = 0 the two
/// scalar functions switch to their power series in delta.
inline Mat2 expm_traceless(const Mat2& x) {
  const cplx delta = -x.determinant();
  cplx ch, shc;
  if (std::abs(delta) < 1e-6) {
    const cplx d2 = delta * delta;
    ch = 1.0 + delta / 2.0 + d2 / 24.0 + d2 * delta / 720.0 + d2 * d2 / 40320.0;
    shc = 1.0 + delta / 6.0 + d2 / 120.0 + d2 * delta / 5040.0 + d2 * d2 / 362880.0;
  } else {
    const cplx s = std::sqrt(delta);
    ch = std::cosh(s);
    shc = std::sinh(s) / s;
  }
  return ch * Mat2::Identity() + shc * x;
}

inline GroupElement exp_algebra(const AlgebraVector& x) {
  return GroupElement(expm_traceless(x.matrix()), x.kind, 1e-10);
}

/// Nearest group element of a slightly drifted matrix. Elements of SU(2)
/// have the form [[a, b], [-conj b, conj a]] and SU(1,1) elements
/// [[a, b], [conj b, conj a]]; project on that form and renormalize.
inline Mat2 reproject(const Mat2& g, AlgebraKind kind) {
  const cplx a = 0.5 * (g(0, 0) + std::conj(g(1, 1)));
  Mat2 out;
  if (kind == AlgebraKind::su2) {
    const cplx b = 0.5 * (g(0, 1) - std::conj(g(1, 0)));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    out << a / n, b / n, -std::conj(b) / n, std::conj(a) / n;
  } else {
    const cplx b = 0.5 * (g(0, 1) + std::conj(g(1, 0)));
    const double n = std::sqrt(std::norm(a) - std::norm(b));
    out << a / n, b / n, std::conj(b) / n, std::conj(a) / n;
  }
  return out;
}

/// max |g^dagger eta g - eta| : distance from the group.
inline double unitarity_drift(const Mat2& g, AlgebraKind kind) {
  const Mat2 eta = kind == AlgebraKind::su2 ? Mat2(Mat2::Identity()) : pauli::s3();
  return (g.adjoint() * eta * g - eta).cwiseAbs().maxCoeff();
}

/// An SU(2) element whose adjoint rotation is r (unique up to sign).
inline Mat2 lift_rotation_su2(const Mat3& r) {
  // Quaternion of r (Shepperd); U = w I - i (x s1 + y s2 + z s3) rotates
  // Pauli vectors by r under U (v.s) U^dagger.
  double w, x, y, z;
  const double tr = r.trace();
  if (tr > 0) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  Mat2 u = w * Mat2::Identity() - I_unit * (x * pauli::s1() + y * pauli::s2() + z * pauli::s3());
  return reproject(u, AlgebraKind::su2);
}

}  // namespace gaugeflow
