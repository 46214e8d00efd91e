#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <eqk/errors.hpp>
#include <eqk/norm.hpp>
#include <eqk/pointset.hpp>
#include <eqk/verify.hpp>
#include <eqk/young.hpp>

namespace eqk {

// Equilateral set {e_1, ..., e_n, t0 * (1, ..., 1)} in a permutation-invariant
// space. The basis vectors are pairwise at distance c = ||(1,-1,0,...,0)||; t0
// solves ||(t-1, t, ..., t)|| = c by bisection. The bracket start 1/n works
// because ||(t-1, t, ..., t)|| at t = 1/n is at most (n-1)c/n.
inline PointSet perm_invariant_equilateral(const NormSpec& spec) {
  if (!spec.permutation_invariant()) {
    throw CapabilityError("construct: norm is not permutation-invariant");
  }
  const int n = spec.dim();
  if (n < 2) throw DomainError("construct: dimension must be at least 2");
  const auto un = static_cast<std::size_t>(n);

  std::vector<double> v(un, 0.0);
  v[0] = 1.0;
  v[1] = -1.0;
  const double c = spec.eval(v);

  auto f = [&](double t) {
    std::vector<double> w(un, t);
    w[0] = t - 1.0;
    return spec.eval(w);
  };

  double lo = 1.0 / static_cast<double>(n);
  double hi = 2.0;
  int guard = 0;
  while (f(hi) < c) {
    hi *= 2.0;
    if (++guard > 200) throw SolverFailure("construct: bracket expansion failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= c) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double t0 = 0.5 * (lo + hi);
  if (std::abs(f(t0) - c) > 1e-11 * c) {
    throw SolverFailure("construct: root residual exceeds tolerance");
  }

  PointSet ps;
  ps.claimed_distance = c;
  ps.norm = spec;
  ps.points.reserve(un + 1);
  for (std::size_t i = 0; i < un; ++i) {
    std::vector<double> e(un, 0.0);
    e[i] = 1.0;
    ps.points.push_back(std::move(e));
  }
  ps.points.emplace_back(un, t0);
  return ps;
}

namespace detail {

// Points {c_1 e_1, ..., c_n e_n, t} at common Luxemburg distance 1, valid for
// strictly increasing finite-valued coordinate functions. All root finding
// runs in extended precision: regularized functions have extension slopes of
// order k, and double-spaced arguments quantize their values too coarsely.
inline std::vector<std::vector<double>> orlicz_points(const std::vector<YoungFunction>& fs) {
  const std::size_t n = fs.size();

  // c_i solving f_i(c_i) = 1/2.
  std::vector<long double> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double hi = 1.0L;
    int guard = 0;
    while (fs[i].eval_extended(hi) < 0.5L) {
      hi *= 2.0L;
      if (++guard > 1100) throw SolverFailure("construct: half-value bracket failed");
    }
    long double lo = 0.0L;
    for (int it = 0; it < 260 && hi - lo > 1e-19L * std::max(1.0L, hi); ++it) {
      const long double mid = 0.5L * (lo + hi);
      if (fs[i].eval_extended(mid) >= 0.5L) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    c[i] = 0.5L * (lo + hi);
  }

  auto g = [&](std::size_t i, long double x) {
    return fs[i].eval_extended(c[i] - x) - fs[i].eval_extended(x);
  };
  // g_i is strictly decreasing from 1/2 to -1/2 on [0, c_i].
  auto g_inverse = [&](std::size_t i, long double s) {
    long double lo = 0.0L, hi = c[i];
    for (int it = 0; it < 260 && hi - lo > 1e-19L * std::max(1.0L, c[i]); ++it) {
      const long double mid = 0.5L * (lo + hi);
      if (g(i, mid) <= s) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5L * (lo + hi);
  };

  auto h = [&](long double t1) {
    const long double s = g(0, t1);
    long double acc = s;
    for (std::size_t j = 0; j < n; ++j) acc += fs[j].eval_extended(g_inverse(j, s));
    return acc;
  };

  // h(0) = 1/2 and h(c_1) = (n-2)/2 + 1/2 >= 1; scan for the leftmost
  // crossing of 1, then bisect inside that bracket.
  const int grid = 256;
  long double lo = 0.0L, hi = c[0];
  bool bracketed = false;
  long double prev = 0.0L;
  for (int s = 1; s <= grid; ++s) {
    const long double t = c[0] * static_cast<long double>(s) / grid;
    if (h(t) >= 1.0L) {
      lo = prev;
      hi = t;
      bracketed = true;
      break;
    }
    prev = t;
  }
  if (!bracketed) {
    // The endpoint value is exactly 1 for n = 3; accept it up to kink noise.
    if (h(c[0]) < 1.0L - 1e-9L) {
      throw SolverFailure("construct: no root of the distance equation found");
    }
    lo = prev;
    hi = c[0];
  }
  for (int it = 0; it < 260 && hi - lo > 1e-19L * std::max(1.0L, c[0]); ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (h(mid) >= 1.0L) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const long double t1 = 0.5L * (lo + hi);

  std::vector<std::vector<double>> pts;
  pts.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = static_cast<double>(c[i]);
    pts.push_back(std::move(e));
  }
  std::vector<double> t(n);
  const long double s = g(0, t1);
  t[0] = static_cast<double>(t1);
  for (std::size_t j = 1; j < n; ++j) t[j] = static_cast<double>(g_inverse(j, s));
  pts.push_back(std::move(t));
  return pts;
}

}  // namespace detail

struct OrliczConstruction {
  PointSet set;
  bool regularized = false;
  std::int64_t regularization_k = 0;  // 0 when no regularization was needed
};

// Equilateral set of n+1 points in the Musielak-Orlicz space with the given
// coordinate functions. Degenerate functions (not strictly increasing or not
// finite-valued) are first replaced by their regularizations; k doubles from
// 2^10 until the certificate against the original norm passes at 1e-9.
inline OrliczConstruction musielak_orlicz_equilateral(const std::vector<YoungFunction>& functions) {
  const int n = static_cast<int>(functions.size());
  if (n < 3) throw ParameterError("construct: musielak-orlicz construction needs n >= 3");

  const NormSpec original = NormSpec::musielak_orlicz(functions, Gauge::luxemburg);
  const bool needs_regularization =
      std::any_of(functions.begin(), functions.end(), [](const YoungFunction& f) {
        return !(f.strictly_increasing() && f.finite_valued());
      });

  OrliczConstruction out;
  if (!needs_regularization) {
    out.set.points = detail::orlicz_points(functions);
    out.set.claimed_distance = 1.0;
    out.set.norm = original;
    return out;
  }

  // The constructed coordinates behave like c + a/k + O(1/k^2), so besides
  // certifying each rung directly, a Richardson step across consecutive rungs
  // removes the first-order regularization error.
  std::vector<std::vector<double>> previous;
  for (std::int64_t k = std::int64_t{1} << 10; k <= (std::int64_t{1} << 30); k *= 2) {
    std::vector<YoungFunction> smoothed;
    smoothed.reserve(functions.size());
    for (const auto& f : functions) smoothed.push_back(regularize(f, k));
    std::vector<std::vector<double>> pts = detail::orlicz_points(smoothed);

    PointSet candidate{pts, 1.0, original};
    if (certify_equilateral(candidate, 1e-9).pass) {
      out.set = std::move(candidate);
      out.regularized = true;
      out.regularization_k = k;
      return out;
    }
    if (!previous.empty()) {
      PointSet extrapolated{pts, 1.0, original};
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t q = 0; q < pts[i].size(); ++q) {
          extrapolated.points[i][q] = 2.0 * pts[i][q] - previous[i][q];
        }
      }
      if (certify_equilateral(extrapolated, 1e-9).pass) {
        out.set = std::move(extrapolated);
        out.regularized = true;
        out.regularization_k = k;
        return out;
      }
    }
    previous = std::move(pts);
  }
  throw SolverFailure(
      "construct: regularized construction failed to certify at 1e-9 up to k = 2^30");
}

// Smallest k such that the k largest coefficients dominate the rest
// (ascending nonnegative input).
inline int smallest_valid_partition_k(std::span<const double> ascending) {
  const int n = static_cast<int>(ascending.size());
  double total = 0.0;
  for (double v : ascending) total += v;
  double suffix = 0.0;
  for (int k = 1; k <= n - 1; ++k) {
    suffix += ascending[static_cast<std::size_t>(n - k)];
    if (suffix >= total - suffix) return k;
  }
  throw ParameterError("construct: no valid partition index");
}

struct SubspaceConstruction {
  PointSet set;
  int k = 0;
  CanonicalHyperplane canonical;
};

// Equilateral set of 2^(n-k) points, pairwise at l_inf distance exactly 2, on
// the hyperplane <a, x> = 0. Cube sign patterns occupy the first n-k canonical
// coordinates; the remaining k coordinates compensate through
// h(x) = sum_{i <= n-k} a_i x_i / sum_{i > n-k} a_i.
inline SubspaceConstruction linfty_subspace_equilateral(const Hyperplane& h,
                                                        std::optional<int> k_opt = {}) {
  SubspaceConstruction out;
  out.canonical = canonicalize_hyperplane(h.a);
  const std::vector<double>& a = out.canonical.canonical.a;
  const int n = static_cast<int>(a.size());
  if (n < 2) throw ParameterError("construct: hyperplane dimension must be at least 2");

  double total = 0.0;
  for (double v : a) total += v;
  int k;
  if (k_opt.has_value()) {
    k = *k_opt;
    if (k < 1 || k > n - 1) throw ParameterError("construct: k must lie in [1, n-1]");
    double suffix = 0.0;
    for (int i = n - k; i < n; ++i) suffix += a[static_cast<std::size_t>(i)];
    if (suffix < total - suffix) {
      throw ParameterError("construct: the k largest coefficients do not dominate the rest");
    }
  } else {
    k = smallest_valid_partition_k(a);
  }
  const int cube_dim = n - k;
  if (cube_dim > 24) {
    throw ParameterError("construct: 2^(n-k) points exceed the materialization limit; pass a larger k");
  }

  double denom = 0.0;
  for (int i = cube_dim; i < n; ++i) denom += a[static_cast<std::size_t>(i)];
  // denom > 0: the coefficients are sorted ascending with a nonzero entry.

  out.k = k;
  out.set.claimed_distance = 2.0;
  out.set.norm = Hyperplane{h.a};
  const std::size_t count = std::size_t{1} << cube_dim;
  out.set.points.reserve(count);
  std::vector<double> canonical_point(static_cast<std::size_t>(n));
  for (std::size_t mask = 0; mask < count; ++mask) {
    double num = 0.0;
    for (int i = 0; i < cube_dim; ++i) {
      const double ci = (mask >> i) & 1U ? 1.0 : -1.0;
      canonical_point[static_cast<std::size_t>(i)] = ci;
      num += a[static_cast<std::size_t>(i)] * ci;
    }
    const double hv = num / denom;
    for (int i = cube_dim; i < n; ++i) canonical_point[static_cast<std::size_t>(i)] = -hv;
    out.set.points.push_back(out.canonical.to_original(canonical_point));
  }
  return out;
}

// R(p, n) = max over theta > 0 of ((1 + (1+theta)^p) / (2 + (n-2) theta^p))^(1/p),
// located by a coarse scan over log(theta) in [-40, 10] followed by
// golden-section refinement.
inline double radius_lp(double p, int n) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("construct: radius requires p in (1, inf)");
  if (n <= 2) throw ParameterError("construct: radius requires n > 2");

  auto value = [&](double log_theta) {
    const double theta = std::exp(log_theta);
    const double numer = 1.0 + std::pow(1.0 + theta, p);
    const double denom = 2.0 + static_cast<double>(n - 2) * std::pow(theta, p);
    return std::pow(numer / denom, 1.0 / p);
  };

  const int coarse = 512;
  double best_u = -40.0;
  double best_v = -kInf;
  for (int i = 0; i <= coarse; ++i) {
    const double u = -40.0 + 50.0 * static_cast<double>(i) / coarse;
    const double v = value(u);
    if (v > best_v) {
      best_v = v;
      best_u = u;
    }
  }
  const double cell = 50.0 / coarse;
  double lo = best_u - cell;
  double hi = best_u + cell;
  const double invphi = 0.6180339887498949;
  double a = hi - invphi * (hi - lo);
  double b = lo + invphi * (hi - lo);
  double fa = value(a);
  double fb = value(b);
  while (hi - lo > 1e-12) {
    if (fa >= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - invphi * (hi - lo);
      fa = value(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + invphi * (hi - lo);
      fb = value(b);
    }
  }
  return std::max(value(0.5 * (lo + hi)), best_v);
}

}  // namespace eqk
