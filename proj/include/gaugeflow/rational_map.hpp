#pragma once

/// Exact rational functions of one complex variable.

#include "gaugeflow/lie_core.hpp"

#include <Eigen/Eigenvalues>

#include <cctype>
#include <string>
#include <vector>

namespace gaugeflow {

/// Polynomial with complex coefficients, lowest degree first.
struct Polynomial {
  std::vector<cplx> c;

  Polynomial() : c{cplx(0)} {}
  Polynomial(std::vector<cplx> coeffs) : c(std::move(coeffs)) { trim(); }
  static Polynomial constant(cplx a) { return Polynomial({a}); }
  static Polynomial z() { return Polynomial({cplx(0), cplx(1)}); }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.size() == 1 && c[0] == cplx(0); }
  cplx leading() const { return c.back(); }

  void trim(double tol = 0.0) {
    double scale = 0.0;
    for (const auto& a : c) scale = std::max(scale, std::abs(a));
    while (c.size() > 1 && std::abs(c.back()) <= tol * scale) c.pop_back();
    if (c.empty()) c.push_back(0);
  }

  cplx operator()(cplx z) const {
    cplx acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c.size() == 1) return Polynomial();
    std::vector<cplx> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    return Polynomial(d);
  }

  /// Roots from the companion-matrix eigenvalues.
  std::vector<cplx> roots() const {
    const int n = degree();
    if (n < 1) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
    for (int k = 0; k < n; ++k) comp(k, n - 1) = -c[k] / leading();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + n};
  }
};

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> r(std::max(a.c.size(), b.c.size()), cplx(0));
  for (std::size_t k = 0; k < a.c.size(); ++k) r[k] += a.c[k];
  for (std::size_t k = 0; k < b.c.size(); ++k) r[k] += b.c[k];
  return Polynomial(r);
}

inline Polynomial operator*(cplx s, const Polynomial& a) {
  std::vector<cplx> r = a.c;
  for (auto& v : r) v *= s;
  return Polynomial(r);
}

inline Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + cplx(-1) * b; }

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> r(a.c.size() + b.c.size() - 1, cplx(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  return Polynomial(r);
}

/// Quotient and remainder of a / b.
inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw invalid_input("polynomial division by zero");
  std::vector<cplx> rem = a.c;
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial(), a};
  std::vector<cplx> q(a.degree() - db + 1, cplx(0));
  for (int k = a.degree() - db; k >= 0; --k) {
    const cplx f = rem[k + db] / b.leading();
    q[k] = f;
    for (int j = 0; j <= db; ++j) rem[k + j] -= f * b.c[j];
  }
  rem.resize(std::max(db, 1));
  Polynomial r(rem);
  r.trim(1e-13);
  return {Polynomial(q), r};
}

/// Monic gcd by the Euclidean algorithm with a relative zero tolerance.
inline Polynomial gcd(Polynomial a, Polynomial b) {
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return Polynomial::constant(1);
  return (1.0 / a.leading()) * a;
}

/// zeta(z) = N(z) / D(z) with gcd(N, D) constant.
class RationalMap {
 public:
  RationalMap() : num_(Polynomial::z()), den_(Polynomial::constant(1)) {}
  RationalMap(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw invalid_input("RationalMap: zero denominator");
    const Polynomial g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = divmod(num_, g).first;
      den_ = divmod(den_, g).first;
    }
    const cplx lead = den_.leading();
    num_ = (1.0 / lead) * num_;
    den_ = (1.0 / lead) * den_;
  }

  /// Parse an expression in z over complex constants: + - * / ^n, parentheses,
  /// decimal literals and the imaginary unit i (e.g. "(z-1)/(z+1)", "-1/z").
  static RationalMap parse(const std::string& text);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  int degree() const { return std::max(num_.degree(), den_.degree()); }
  bool is_constant() const { return num_.degree() == 0 && den_.degree() == 0; }

  cplx operator()(cplx z) const { return num_(z) / den_(z); }

  /// N'D - ND'; zeta' = wronskian / D^2.
  Polynomial wronskian() const { return num_.derivative() * den_ - num_ * den_.derivative(); }

  cplx derivative(cplx z) const {
    const cplx d = den_(z);
    return wronskian()(z) / (d * d);
  }

  std::vector<cplx> poles() const { return den_.roots(); }
  std::vector<cplx> critical_points() const { return wronskian().roots(); }

  RationalMap operator+(const RationalMap& o) const { return {num_ * o.den_ + o.num_ * den_, den_ * o.den_}; }
  RationalMap operator-(const RationalMap& o) const { return {num_ * o.den_ - o.num_ * den_, den_ * o.den_}; }
  RationalMap operator*(const RationalMap& o) const { return {num_ * o.num_, den_ * o.den_}; }
  RationalMap operator/(const RationalMap& o) const {
    if (o.num_.is_zero()) throw invalid_input("RationalMap: division by zero map");
    return {num_ * o.den_, den_ * o.num_};
  }

  /// Composition this(inner(z)).
  RationalMap compose(const RationalMap& inner) const {
    auto eval = [&](const Polynomial& p) {
      // Homogenized p(N/D) * D^d with d = degree()
      const int d = degree();
      Polynomial acc;
      Polynomial npow = Polynomial::constant(1);
      for (int k = 0; k <= d; ++k) {
        Polynomial term = npow;
        for (int m = 0; m < d - k; ++m) term = term * inner.den_;
        if (k < static_cast<int>(p.c.size())) acc = acc + p.c[k] * term;
        npow = npow * inner.num_;
      }
      return acc;
    };
    return {eval(num_), eval(den_)};
  }

 private:
  Polynomial num_, den_;
};

namespace detail {

class MapParser {
 public:
  explicit MapParser(const std::string& s) : s_(s) {}

  RationalMap run() {
    RationalMap r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return r;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw invalid_input("map '" + s_ + "': " + why + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static RationalMap constant(cplx a) { return {Polynomial::constant(a), Polynomial::constant(1)}; }

  RationalMap expr() {
    RationalMap r = term();
    for (;;) {
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }
  RationalMap term() {
    RationalMap r = unary();
    for (;;) {
      if (eat('*'))
        r = r * unary();
      else if (eat('/'))
        r = r / unary();
      else
        return r;
    }
  }
  RationalMap unary() {
    if (eat('-')) return constant(-1) * unary();
    if (eat('+')) return unary();
    return power();
  }
  RationalMap power() {
    RationalMap base = atom();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      const int n = std::stoi(s_.substr(start, pos_ - start));
      if (n > 32) fail("exponent too large");
      RationalMap r = constant(1);
      for (int k = 0; k < n; ++k) r = r * base;
      return r;
    }
    return base;
  }
  RationalMap atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      RationalMap r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (ch == 'z') {
      ++pos_;
      return {Polynomial::z(), Polynomial::constant(1)};
    }
    if (ch == 'i') {
      ++pos_;
      return constant(I_unit);
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      pos_ += static_cast<std::size_t>(end - begin);
      // juxtaposed literal: 0.3i, 2z^2, 3(z+1)
      if (pos_ < s_.size() && (s_[pos_] == 'z' || s_[pos_] == 'i' || s_[pos_] == '(')) return constant(v) * power();
      return constant(v);
    }
    fail(std::string("unexpected character '") + ch + "'");
  }
};

}  // namespace detail

inline RationalMap RationalMap::parse(const std::string& text) { return detail::MapParser(text).run(); }

}  // namespace gaugeflow
