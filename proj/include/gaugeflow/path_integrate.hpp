#pragma once

/// Integration of dg = g J and d(alpha) = w over a rectangular grid.
///
/// Paths start at the base node, run along axis 1 through the base column,
/// then along axis 0 in every row. Swapping the order gives a second path
/// family used for flatness checks.

#include "gaugeflow/grid_fields.hpp"

namespace gaugeflow {

enum class PathOrder { column_then_rows, row_then_columns };

namespace detail {

/// Midpoint value between samples k and k+1 from the four-point cubic,
/// falling back to three-point quadratics next to either end.
template <class T, class At>
T midpoint(At&& f, int k, int n) {
  if (n == 2) return 0.5 * (f(k) + f(k + 1));
  if (k == 0) return (3.0 * f(0) + 6.0 * f(1) - f(2)) / 8.0;
  if (k == n - 2) return (-f(n - 3) + 6.0 * f(n - 2) + 3.0 * f(n - 1)) / 8.0;
  return (-f(k - 1) + 9.0 * f(k) + 9.0 * f(k + 1) - f(k + 2)) / 16.0;
}

/// One RK4 step of g' = g J over signed step h with J at start, mid, end.
inline Mat2 rk4_step(const Mat2& g, const Mat2& j0, const Mat2& jm, const Mat2& j1, double h) {
  const Mat2 k1 = g * j0 * h;
  const Mat2 k2 = (g + 0.5 * k1) * jm * h;
  const Mat2 k3 = (g + 0.5 * k2) * jm * h;
  const Mat2 k4 = (g + k3) * j1 * h;
  return g + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

inline constexpr double kDriftLimit = 1e-6;

/// Integrate along a line of n samples from index `start` in both directions.
template <class At, class Put>
void integrate_line(At&& jat, Put&& put, int n, int start, const Mat2& g0, double h, AlgebraKind kind) {
  put(start, g0);
  auto step = [&](const Mat2& g, int from, int to) {
    const int lo = std::min(from, to);
    const Mat2 jm = midpoint<Mat2>(jat, lo, n);
    const double dh = to > from ? h : -h;
    Mat2 next = rk4_step(g, jat(from), jm, jat(to), dh);
    if (unitarity_drift(next, kind) > kDriftLimit)
      throw std::runtime_error("path integration: unitarity drift exceeds 1e-6, step too coarse");
    return reproject(next, kind);
  };
  Mat2 g = g0;
  for (int k = start; k + 1 < n; ++k) {
    g = step(g, k, k + 1);
    put(k + 1, g);
  }
  g = g0;
  for (int k = start; k > 0; --k) {
    g = step(g, k, k - 1);
    put(k - 1, g);
  }
}

}  // namespace detail

/// Solve d_mu g = g J_mu over the grid with g(base) = g0.
inline MatField integrate_connection(const MatField& j0, const MatField& j1, const Mat2& g0, AlgebraKind kind,
                                     PathOrder order = PathOrder::column_then_rows) {
  const Grid2& gr = j0.grid;
  MatField g(gr);
  const int bi = gr.base_i(), bj = gr.base_j();
  if (order == PathOrder::column_then_rows) {
    detail::integrate_line([&](int j) -> const Mat2& { return j1(bi, j); },
                           [&](int j, const Mat2& v) { g(bi, j) = v; }, gr.ny, bj, g0, gr.hy, kind);
    for (int j = 0; j < gr.ny; ++j) {
      const Mat2 start = g(bi, j);
      detail::integrate_line([&](int i) -> const Mat2& { return j0(i, j); },
                             [&](int i, const Mat2& v) { g(i, j) = v; }, gr.nx, bi, start, gr.hx, kind);
    }
  } else {
    detail::integrate_line([&](int i) -> const Mat2& { return j0(i, bj); },
                           [&](int i, const Mat2& v) { g(i, bj) = v; }, gr.nx, bi, g0, gr.hx, kind);
    for (int i = 0; i < gr.nx; ++i) {
      const Mat2 start = g(i, bj);
      detail::integrate_line([&](int j) -> const Mat2& { return j1(i, j); },
                             [&](int j, const Mat2& v) { g(i, j) = v; }, gr.ny, bj, start, gr.hy, kind);
    }
  }
  return g;
}

/// Potential alpha with d(alpha) = w, alpha(base) = a0, along the same paths.
/// Per-cell quadrature is Simpson with the cubic midpoint value.
inline FieldR integrate_exact_form(const OneFormR& w, double a0 = 0.0,
                                   PathOrder order = PathOrder::column_then_rows) {
  const Grid2& gr = w.c0.grid;
  FieldR a(gr);
  const int bi = gr.base_i(), bj = gr.base_j();
  auto line = [](auto&& at, auto&& put, int n, int start, double v0, double h) {
    put(start, v0);
    double v = v0;
    for (int k = start; k + 1 < n; ++k) {
      v += h / 6.0 * (at(k) + 4.0 * detail::midpoint<double>(at, k, n) + at(k + 1));
      put(k + 1, v);
    }
    v = v0;
    for (int k = start; k > 0; --k) {
      v -= h / 6.0 * (at(k - 1) + 4.0 * detail::midpoint<double>(at, k - 1, n) + at(k));
      put(k - 1, v);
    }
  };
  if (order == PathOrder::column_then_rows) {
    line([&](int j) { return w.c1(bi, j); }, [&](int j, double v) { a(bi, j) = v; }, gr.ny, bj, a0, gr.hy);
    for (int j = 0; j < gr.ny; ++j)
      line([&](int i) { return w.c0(i, j); }, [&](int i, double v) { a(i, j) = v; }, gr.nx, bi, a(bi, j), gr.hx);
  } else {
    line([&](int i) { return w.c0(i, bj); }, [&](int i, double v) { a(i, bj) = v; }, gr.nx, bi, a0, gr.hx);
    for (int i = 0; i < gr.nx; ++i)
      line([&](int j) { return w.c1(i, j); }, [&](int j, double v) { a(i, j) = v; }, gr.ny, bj, a(i, bj), gr.hy);
  }
  return a;
}

}  // namespace gaugeflow
