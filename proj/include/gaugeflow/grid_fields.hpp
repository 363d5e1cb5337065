#pragma once

/// Rectangular 2D grids and sampled fields.
///
/// Node (i, j) sits at (x0 + i hx, y0 + j hy) and is stored at j*nx + i,
/// so axis 0 is the fastest index. Derivatives are nodal and second order.

#include "gaugeflow/lie_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace gaugeflow {

struct Grid2 {
  int nx = 5, ny = 5;
  double x0 = 0.0, y0 = 0.0;
  double hx = 1.0, hy = 1.0;
  std::array<std::string, 2> axis_labels{"x", "y"};

  /// nx by ny nodes spanning [xa, xb] x [ya, yb] inclusive.
  static Grid2 span(double xa, double xb, double ya, double yb, int nx, int ny,
                    std::array<std::string, 2> labels = {"x", "y"}) {
    if (nx < 5 || ny < 5) throw invalid_input("Grid2: need at least 5 nodes per axis");
    if (!(xb > xa) || !(yb > ya)) throw invalid_input("Grid2: empty domain");
    Grid2 g;
    g.nx = nx;
    g.ny = ny;
    g.x0 = xa;
    g.y0 = ya;
    g.hx = (xb - xa) / (nx - 1);
    g.hy = (yb - ya) / (ny - 1);
    g.axis_labels = std::move(labels);
    return g;
  }

  /// Square grid [-a, a]^2 (or [a, b]^2) with n nodes per axis.
  static Grid2 square(double a, double b, int n) { return span(a, b, a, b, n, n); }

  /// Same domain with spacing halved.
  Grid2 refined() const {
    Grid2 g = *this;
    g.nx = 2 * nx - 1;
    g.ny = 2 * ny - 1;
    g.hx = hx / 2;
    g.hy = hy / 2;
    return g;
  }

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  double x(int i) const { return x0 + i * hx; }
  double y(int j) const { return y0 + j * hy; }
  double x_max() const { return x(nx - 1); }
  double y_max() const { return y(ny - 1); }
  cplx z(int i, int j) const { return {x(i), y(j)}; }
  int extent(int axis) const { return axis == 0 ? nx : ny; }
  double spacing(int axis) const { return axis == 0 ? hx : hy; }

  /// Node nearest the coordinate origin (clamped into the grid).
  int base_i() const { return std::clamp(static_cast<int>(std::lround(-x0 / hx)), 0, nx - 1); }
  int base_j() const { return std::clamp(static_cast<int>(std::lround(-y0 / hy)), 0, ny - 1); }

  bool same_as(const Grid2& o) const {
    return nx == o.nx && ny == o.ny && x0 == o.x0 && y0 == o.y0 && hx == o.hx && hy == o.hy;
  }
};

/// Additive zero; Eigen fixed-size types are not zeroed by T{}.
template <class T>
T zero_value() {
  if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, cplx>)
    return T{};
  else
    return T::Zero();
}

template <class T>
struct Field {
  Grid2 grid;
  std::vector<T> values;

  Field() = default;
  explicit Field(const Grid2& g, T fill = zero_value<T>()) : grid(g), values(g.size(), fill) {}

  T& operator()(int i, int j) { return values[grid.index(i, j)]; }
  const T& operator()(int i, int j) const { return values[grid.index(i, j)]; }
  T& operator[](std::size_t k) { return values[k]; }
  const T& operator[](std::size_t k) const { return values[k]; }
  std::size_t size() const { return values.size(); }
};

using FieldR = Field<double>;
using FieldC = Field<cplx>;
using Vec3Field = Field<Vec3>;
using CVec3Field = Field<CVec3>;
using MatField = Field<Mat2>;

/// Boolean node mask; true marks an excluded node.
using Mask = std::vector<unsigned char>;

inline Mask empty_mask(const Grid2& g) { return Mask(g.size(), 0); }

inline Mask mask_union(const Mask& a, const Mask& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Mask m(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) m[k] = a[k] || b[k];
  return m;
}

/// Mask of the nodes outside the box [xa, xb] x [ya, yb].
inline Mask mask_outside(const Grid2& g, double xa, double xb, double ya, double yb) {
  Mask m(g.size(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      m[g.index(i, j)] = g.x(i) < xa - 1e-12 || g.x(i) > xb + 1e-12 || g.y(j) < ya - 1e-12 || g.y(j) > yb + 1e-12;
  return m;
}

/// Field sampled from f(x, y).
template <class F>
auto sample(const Grid2& g, F&& f) {
  using T = std::decay_t<decltype(f(0.0, 0.0))>;
  Field<T> out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out(i, j) = f(g.x(i), g.y(j));
  return out;
}

/// Complex field sampled from f(z), z = x + i y.
template <class F>
auto sample_z(const Grid2& g, F&& f) {
  return sample(g, [&](double x, double y) { return f(cplx(x, y)); });
}

template <class T, class F>
auto map(const Field<T>& a, F&& f) {
  using R = std::decay_t<decltype(f(a.values[0]))>;
  Field<R> out;
  out.grid = a.grid;
  out.values.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out.values[k] = f(a.values[k]);
  return out;
}

template <class T, class U, class F>
auto zip(const Field<T>& a, const Field<U>& b, F&& f) {
  using R = std::decay_t<decltype(f(a.values[0], b.values[0]))>;
  if (a.size() != b.size()) throw invalid_input("zip: fields on different grids");
  Field<R> out;
  out.grid = a.grid;
  out.values.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out.values[k] = f(a.values[k], b.values[k]);
  return out;
}

template <class T>
Field<T> operator+(const Field<T>& a, const Field<T>& b) {
  return zip(a, b, [](const T& u, const T& v) -> T { return u + v; });
}
template <class T>
Field<T> operator-(const Field<T>& a, const Field<T>& b) {
  return zip(a, b, [](const T& u, const T& v) -> T { return u - v; });
}
template <class T, class S>
Field<T> operator*(S s, const Field<T>& a) {
  return map(a, [s](const T& u) -> T { return s * u; });
}

inline FieldC to_complex(const FieldR& f) {
  return map(f, [](double v) { return cplx(v, 0.0); });
}
inline FieldR real_part(const FieldC& f) {
  return map(f, [](const cplx& v) { return v.real(); });
}
inline FieldR imag_part(const FieldC& f) {
  return map(f, [](const cplx& v) { return v.imag(); });
}

/// One-form with components along axis 0 and axis 1.
template <class T>
struct OneForm {
  Field<T> c0, c1;
  const Field<T>& operator[](int axis) const { return axis == 0 ? c0 : c1; }
  Field<T>& operator[](int axis) { return axis == 0 ? c0 : c1; }
};

using OneFormR = OneForm<double>;
using OneFormC = OneForm<cplx>;

/// Pointwise magnitude used by the residual norms.
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.norm();
}

/// Second-order derivative along one axis: central in the interior,
/// one-sided three-point at the two boundary rows.
template <class T>
Field<T> diff(const Field<T>& f, int axis) {
  if (axis != 0 && axis != 1) throw invalid_input("diff: axis out of range");
  const Grid2& g = f.grid;
  const int n = g.extent(axis);
  if (n < 3) throw invalid_input("diff: fewer than 3 nodes along axis");
  const double inv2h = 1.0 / (2.0 * g.spacing(axis));
  Field<T> out(g);
  const int m = axis == 0 ? g.ny : g.nx;
  for (int l = 0; l < m; ++l) {
    auto at = [&](int k) -> const T& { return axis == 0 ? f(k, l) : f(l, k); };
    auto put = [&](int k) -> T& { return axis == 0 ? out(k, l) : out(l, k); };
    // written in differences so constants give exactly zero
    put(0) = (3.0 * (at(1) - at(0)) + (at(1) - at(2))) * inv2h;
    for (int k = 1; k < n - 1; ++k) put(k) = (at(k + 1) - at(k - 1)) * inv2h;
    put(n - 1) = (3.0 * (at(n - 1) - at(n - 2)) + (at(n - 3) - at(n - 2))) * inv2h;
  }
  return out;
}

/// Laplacian as the composed first-derivative stencil. Composition keeps
/// discrete identities such as d(dV) and Wirtinger splittings exact.
template <class T>
Field<T> laplacian(const Field<T>& f) {
  return diff(diff(f, 0), 0) + diff(diff(f, 1), 1);
}

/// (d/dz f, d/dzbar f) with z = x + i y on axes (0, 1).
inline std::pair<FieldC, FieldC> wirtinger(const FieldC& f) {
  const FieldC fx = diff(f, 0), fy = diff(f, 1);
  const cplx half_i(0.0, 0.5);
  return {zip(fx, fy, [&](cplx a, cplx b) { return 0.5 * a - half_i * b; }),
          zip(fx, fy, [&](cplx a, cplx b) { return 0.5 * a + half_i * b; })};
}

inline std::pair<FieldC, FieldC> wirtinger(const FieldR& f) { return wirtinger(to_complex(f)); }

inline FieldC d_z(const FieldC& f) { return wirtinger(f).first; }
inline FieldC d_zbar(const FieldC& f) { return wirtinger(f).second; }

struct Norms {
  double linf = 0.0;
  double l2 = 0.0;
};

/// Default boundary margin for residual norms, in nodes.
inline constexpr int kMargin = 2;

/// L-infinity and weighted L2 norms over nodes at least `margin` nodes
/// from every boundary, skipping masked and non-finite-masked nodes.
template <class T>
Norms norms(const Field<T>& f, int margin = kMargin, const Mask& mask = {}) {
  if (margin < 0) throw invalid_input("norms: negative margin");
  const Grid2& g = f.grid;
  if (2 * margin >= g.nx || 2 * margin >= g.ny) throw invalid_input("norms: empty interior");
  Norms out;
  double sum = 0.0;
  std::size_t count = 0;
  for (int j = margin; j < g.ny - margin; ++j)
    for (int i = margin; i < g.nx - margin; ++i) {
      const std::size_t k = g.index(i, j);
      if (!mask.empty() && mask[k]) continue;
      const double m = magnitude(f.values[k]);
      out.linf = std::max(out.linf, m);
      sum += m * m;
      ++count;
    }
  if (count == 0) throw invalid_input("norms: every interior node masked");
  out.l2 = std::sqrt(sum * g.hx * g.hy);
  return out;
}

/// Observed convergence order between spacings h and h/2.
inline double order_estimate(double r_h, double r_h2) {
  if (!(r_h > 0.0) || !(r_h2 > 0.0)) throw invalid_input("order_estimate: norms must be positive");
  return std::log2(r_h / r_h2);
}

/// Restrict a field on g.refined() back onto g (shared nodes).
template <class T>
Field<T> coarsen(const Field<T>& fine, const Grid2& coarse) {
  Field<T> out(coarse);
  for (int j = 0; j < coarse.ny; ++j)
    for (int i = 0; i < coarse.nx; ++i) out(i, j) = fine(2 * i, 2 * j);
  return out;
}

inline Mask coarsen_mask(const Mask& fine, const Grid2& fine_grid, const Grid2& coarse) {
  if (fine.empty()) return {};
  Mask out(coarse.size());
  for (int j = 0; j < coarse.ny; ++j)
    for (int i = 0; i < coarse.nx; ++i) out[coarse.index(i, j)] = fine[fine_grid.index(2 * i, 2 * j)];
  return out;
}

/// Four-point Lagrange weights for fractional offset s in [0, 1] between
/// nodes 1 and 2 of the stencil (-1, 0, 1, 2).
inline std::array<double, 4> cubic_weights(double s) {
  return {-s * (s - 1.0) * (s - 2.0) / 6.0, (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
          -(s + 1.0) * s * (s - 2.0) / 2.0, (s + 1.0) * s * (s - 1.0) / 6.0};
}

/// Bicubic (tensor four-point Lagrange) interpolation; nullopt outside the grid.
template <class T>
std::optional<T> interpolate(const Field<T>& f, double x, double y) {
  const Grid2& g = f.grid;
  const double u = (x - g.x0) / g.hx, v = (y - g.y0) / g.hy;
  const double tol = 1e-9;
  if (u < -tol || v < -tol || u > g.nx - 1 + tol || v > g.ny - 1 + tol) return std::nullopt;
  const int i = std::clamp(static_cast<int>(std::floor(u)), 1, g.nx - 3);
  const int j = std::clamp(static_cast<int>(std::floor(v)), 1, g.ny - 3);
  const auto wx = cubic_weights(u - i), wy = cubic_weights(v - j);
  T acc = zero_value<T>();
  for (int b = 0; b < 4; ++b) {
    T row = zero_value<T>();
    for (int a = 0; a < 4; ++a) row = row + wx[a] * f(i - 1 + a, j - 1 + b);
    acc = acc + wy[b] * row;
  }
  return acc;
}

/// Four-point Lagrange interpolation of 1D samples f(x0 + k h).
template <class T>
std::optional<T> interpolate_1d(const std::vector<T>& f, double x0, double h, double x) {
  const int n = static_cast<int>(f.size());
  if (n < 4) return std::nullopt;
  const double u = (x - x0) / h;
  if (u < -1e-9 || u > n - 1 + 1e-9) return std::nullopt;
  const int i = std::clamp(static_cast<int>(std::floor(u)), 1, n - 3);
  const auto w = cubic_weights(u - i);
  T acc = w[0] * f[i - 1];
  for (int a = 1; a < 4; ++a) acc = acc + w[a] * f[i - 1 + a];
  return acc;
}

// ---------------------------------------------------------------- CSV

/// Column table over a grid, one row per node, axis 0 fastest.
struct CsvTable {
  Grid2 grid;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  void add(const std::string& name, const FieldR& f) {
    names.push_back(name);
    columns.push_back(f.values);
  }
  void add(const std::string& name, const FieldC& f) {
    add(name + "_re", real_part(f));
    add(name + "_im", imag_part(f));
  }
  void add(const std::string& name, const Vec3Field& f) {
    for (int c = 0; c < 3; ++c) add(name + std::to_string(c + 1), map(f, [c](const Vec3& v) { return v[c]; }));
  }

  int find(const std::string& name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) return static_cast<int>(k);
    return -1;
  }
  bool has(const std::string& name) const { return find(name) >= 0; }

  FieldR real(const std::string& name) const {
    const int k = find(name);
    if (k < 0) throw invalid_input("csv: missing column " + name);
    FieldR f(grid);
    f.values = columns[k];
    return f;
  }
  FieldC complex(const std::string& name) const {
    const FieldR re = real(name + "_re"), im = real(name + "_im");
    return zip(re, im, [](double a, double b) { return cplx(a, b); });
  }
  Vec3Field vec3(const std::string& name) const {
    const FieldR a = real(name + "1"), b = real(name + "2"), c = real(name + "3");
    Vec3Field f(grid);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = Vec3(a[k], b[k], c[k]);
    return f;
  }
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const CsvTable& t) {
  os << "x,y";
  for (const auto& n : t.names) os << ',' << n;
  os << '\n';
  const Grid2& g = t.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      os << format_double(g.x(i)) << ',' << format_double(g.y(j));
      const std::size_t k = g.index(i, j);
      for (const auto& c : t.columns) os << ',' << format_double(c[k]);
      os << '\n';
    }
}

inline void write_csv(const std::string& path, const CsvTable& t) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(os, t);
}

/// Parse a dump written by write_csv; the grid is recovered from the x, y
/// columns (x fastest, uniform spacing).
inline CsvTable read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw invalid_input("csv: empty input");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header[0] != "x" || header[1] != "y") throw invalid_input("csv: header must start with x,y");
  const std::size_t ncol = header.size();
  std::vector<std::vector<double>> cols(ncol);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= ncol) throw invalid_input("csv: too many fields in row");
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw invalid_input("csv: non-numeric field '" + cell + "'");
      cols[c++].push_back(v);
    }
    if (c != ncol) throw invalid_input("csv: short row");
  }
  const std::size_t rows = cols[0].size();
  if (rows < 25) throw invalid_input("csv: too few rows for a grid");
  std::size_t nx = 1;
  while (nx < rows && cols[1][nx] == cols[1][0]) ++nx;
  if (rows % nx != 0) throw invalid_input("csv: rows do not form a rectangular grid");
  const std::size_t ny = rows / nx;
  CsvTable t;
  t.grid = Grid2::span(cols[0][0], cols[0][nx - 1], cols[1][0], cols[1][rows - 1], static_cast<int>(nx),
                       static_cast<int>(ny));
  for (std::size_t k = 0; k < rows; ++k) {
    const int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
    if (std::abs(cols[0][k] - t.grid.x(i)) > 1e-9 * (1 + std::abs(cols[0][k])) ||
        std::abs(cols[1][k] - t.grid.y(j)) > 1e-9 * (1 + std::abs(cols[1][k])))
      throw invalid_input("csv: node coordinates are not a uniform x-fastest grid");
  }
  for (std::size_t c = 2; c < ncol; ++c) {
    t.names.push_back(header[c]);
    t.columns.push_back(std::move(cols[c]));
  }
  return t;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw invalid_input("cannot open " + path);
  return read_csv(is);
}

}  // namespace gaugeflow
