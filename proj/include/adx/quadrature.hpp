// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace adx {

namespace detail {

template <class F>
double simpson_adapt(F& f, double a, double m, double b, double fa, double fm,
                     double fb, double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return simpson_adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <class F>
double simpson_panel(F& f, double a, double b, double eps, int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_adapt(f, a, m, b, fa, fm, fb, whole, eps, max_depth);
}

template <class F>
double simpson_composite(F& f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [lo, hi] to a relative tolerance.
// `cuts` lists abscissae where the integrand may lose smoothness; each one
// inside the interval becomes a mandatory panel boundary. A degenerate or
// inverted interval integrates to exactly 0.
template <class F>
double integrate(F&& f, double lo, double hi, std::vector<double> cuts,
                 double rel_tol, int max_depth = 48) {
  if (!(hi > lo)) return 0.0;
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  const double snap = (hi - lo) * 1e-12;
  std::vector<double> edges{lo};
  for (double c : cuts)
    if (c > edges.back() + snap && c < hi - snap) edges.push_back(c);
  edges.push_back(hi);

  // Coarse composite pass sets the absolute error budget.
  double coarse = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    coarse += detail::simpson_composite(f, edges[i], edges[i + 1], 16);
  const double eps_total = rel_tol * std::max(std::abs(coarse), 1e-300);

  double total = 0.0;
  const double width = hi - lo;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double eps = eps_total * (edges[i + 1] - edges[i]) / width;
    total += detail::simpson_panel(f, edges[i], edges[i + 1], eps, max_depth);
  }
  return total;
}

}  // namespace adx
