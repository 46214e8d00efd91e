#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <eqk/errors.hpp>
#include <eqk/young.hpp>

namespace eqk {

enum class Gauge { luxemburg, amemiya };

// Linear change of variables applied before a base norm. The kind is kept
// explicit so structural flags can be propagated soundly.
struct Transform {
  enum class Kind { uniform, diagonal, permutation, general };
  Kind kind = Kind::uniform;
  double scale = 1.0;                       // uniform
  std::vector<double> diag;                 // diagonal entries
  std::vector<int> perm;                    // out[i] = x[perm[i]]
  std::vector<std::vector<double>> matrix;  // row-major

  static Transform uniform(double c) {
    Transform t;
    t.kind = Kind::uniform;
    t.scale = c;
    return t;
  }
  static Transform diagonal(std::vector<double> d) {
    Transform t;
    t.kind = Kind::diagonal;
    t.diag = std::move(d);
    return t;
  }
  static Transform permutation(std::vector<int> p) {
    Transform t;
    t.kind = Kind::permutation;
    t.perm = std::move(p);
    return t;
  }
  static Transform general(std::vector<std::vector<double>> m) {
    Transform t;
    t.kind = Kind::general;
    t.matrix = std::move(m);
    return t;
  }

  void apply(std::span<const double> x, std::vector<double>& out) const {
    out.resize(x.size());
    switch (kind) {
      case Kind::uniform:
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
        break;
      case Kind::diagonal:
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = diag[i] * x[i];
        break;
      case Kind::permutation:
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[static_cast<std::size_t>(perm[i])];
        break;
      case Kind::general:
        for (std::size_t i = 0; i < x.size(); ++i) {
          double acc = 0.0;
          for (std::size_t j = 0; j < x.size(); ++j) acc += matrix[i][j] * x[j];
          out[i] = acc;
        }
        break;
    }
  }
};

struct AmemiyaResult {
  double value;
  bool attained;  // false when the infimum sits at the search cap
};

class NormSpec {
 public:
  struct Lp {
    double p;  // [1, inf]
  };
  struct MusielakOrlicz {
    std::vector<YoungFunction> functions;
    Gauge gauge;
  };
  struct Owl {
    std::vector<double> weights;  // w1 >= ... >= wn >= 0, w1 > 0
  };
  struct PermMix {
    double p;
    double alpha;  // > 0
    double beta;   // >= 0; ||x|| = alpha ||x||_p + beta |sum x_i|
  };
  struct LinftyHyperplane {
    std::vector<double> a;
  };
  struct Scaled {
    std::shared_ptr<const NormSpec> base;
    Transform transform;
  };
  using Family = std::variant<Lp, MusielakOrlicz, Owl, PermMix, LinftyHyperplane, Scaled>;

  static NormSpec lp(int dim, double p) {
    require_dim(dim);
    if (!(p >= 1.0)) throw ParameterError("norm: lp requires p >= 1");
    return NormSpec(dim, Lp{p});
  }

  static NormSpec musielak_orlicz(std::vector<YoungFunction> functions,
                                  Gauge gauge = Gauge::luxemburg) {
    if (functions.empty()) throw ParameterError("norm: needs at least one coordinate function");
    const int n = static_cast<int>(functions.size());
    return NormSpec(n, MusielakOrlicz{std::move(functions), gauge});
  }

  static NormSpec owl(std::vector<double> weights) {
    if (weights.empty() || !(weights.front() > 0.0)) {
      throw ParameterError("norm: owl requires w1 > 0");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] >= 0.0) || (i > 0 && weights[i] > weights[i - 1])) {
        throw ParameterError("norm: owl weights must be nonincreasing and nonnegative");
      }
    }
    const int n = static_cast<int>(weights.size());
    return NormSpec(n, Owl{std::move(weights)});
  }

  static NormSpec perm_mix(int dim, double p, double alpha, double beta) {
    require_dim(dim);
    if (!(p >= 1.0)) throw ParameterError("norm: perm_mix requires p >= 1");
    if (!(alpha > 0.0) || !(beta >= 0.0)) {
      throw ParameterError("norm: perm_mix requires alpha > 0 and beta >= 0");
    }
    return NormSpec(dim, PermMix{p, alpha, beta});
  }

  static NormSpec linfty_hyperplane(std::vector<double> a) {
    if (a.size() < 2) throw ParameterError("norm: hyperplane needs dimension >= 2");
    if (std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; })) {
      throw DegenerateInputError("norm: hyperplane coefficients are all zero");
    }
    const int n = static_cast<int>(a.size());
    return NormSpec(n, LinftyHyperplane{std::move(a)});
  }

  static NormSpec scaled(NormSpec base, Transform t) {
    const int n = base.dim();
    switch (t.kind) {
      case Transform::Kind::uniform:
        if (!(t.scale != 0.0) || !std::isfinite(t.scale)) {
          throw ParameterError("norm: scale must be finite and nonzero");
        }
        break;
      case Transform::Kind::diagonal:
        if (static_cast<int>(t.diag.size()) != n) throw ParameterError("norm: diagonal size mismatch");
        for (double d : t.diag) {
          if (d == 0.0 || !std::isfinite(d)) throw ParameterError("norm: diagonal must be invertible");
        }
        break;
      case Transform::Kind::permutation: {
        if (static_cast<int>(t.perm.size()) != n) throw ParameterError("norm: permutation size mismatch");
        std::vector<bool> seen(t.perm.size(), false);
        for (int i : t.perm) {
          if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]) {
            throw ParameterError("norm: invalid permutation");
          }
          seen[static_cast<std::size_t>(i)] = true;
        }
        break;
      }
      case Transform::Kind::general:
        if (static_cast<int>(t.matrix.size()) != n) throw ParameterError("norm: matrix size mismatch");
        for (const auto& row : t.matrix) {
          if (static_cast<int>(row.size()) != n) throw ParameterError("norm: matrix size mismatch");
        }
        break;
    }
    return NormSpec(n, Scaled{std::make_shared<NormSpec>(std::move(base)), std::move(t)});
  }

  int dim() const { return dim_; }
  const Family& family() const { return fam_; }

  bool permutation_invariant() const {
    return std::visit(
        [&](const auto& fam) -> bool {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Lp> || std::is_same_v<T, Owl> ||
                        std::is_same_v<T, PermMix>) {
            return true;
          } else if constexpr (std::is_same_v<T, MusielakOrlicz>) {
            return std::all_of(fam.functions.begin() + 1, fam.functions.end(),
                               [&](const YoungFunction& f) { return f == fam.functions.front(); });
          } else if constexpr (std::is_same_v<T, Scaled>) {
            const auto k = fam.transform.kind;
            return (k == Transform::Kind::uniform || k == Transform::Kind::permutation) &&
                   fam.base->permutation_invariant();
          } else {
            return false;
          }
        },
        fam_);
  }

  bool unconditional() const {
    return std::visit(
        [&](const auto& fam) -> bool {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Lp> || std::is_same_v<T, Owl> ||
                        std::is_same_v<T, MusielakOrlicz>) {
            return true;
          } else if constexpr (std::is_same_v<T, PermMix>) {
            return fam.beta == 0.0;
          } else if constexpr (std::is_same_v<T, Scaled>) {
            const auto k = fam.transform.kind;
            return k != Transform::Kind::general && fam.base->unconditional();
          } else {
            return false;
          }
        },
        fam_);
  }

  bool smooth_claimed() const {
    return std::visit(
        [&](const auto& fam) -> bool {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Lp>) {
            return fam.p > 1.0 && fam.p < kInf;
          } else if constexpr (std::is_same_v<T, PermMix>) {
            return fam.beta == 0.0 && fam.p > 1.0 && fam.p < kInf;
          } else if constexpr (std::is_same_v<T, Scaled>) {
            return fam.transform.kind != Transform::Kind::general && fam.base->smooth_claimed();
          } else {
            return false;
          }
        },
        fam_);
  }

  bool symmetric() const { return permutation_invariant() && unconditional(); }

  double operator()(std::span<const double> x) const { return eval(x); }
  double eval(std::span<const double> x) const;

 private:
  NormSpec(int dim, Family fam) : dim_(dim), fam_(std::move(fam)) {}
  static void require_dim(int dim) {
    if (dim < 1) throw ParameterError("norm: dimension must be >= 1");
  }

  int dim_;
  Family fam_;
};

namespace detail {

inline void check_input(const NormSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dim()) {
    throw DomainError("norm: vector length does not match the space dimension");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("norm: input entries must be finite");
  }
}

inline double lp_eval(double p, std::span<const double> x) {
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) return 0.0;
  if (p == kInf) return mx;
  if (p == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double v : x) {
      const double u = v / mx;
      s += u * u;
    }
    return mx * std::sqrt(s);
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / mx, p);
  return mx * std::pow(s, 1.0 / p);
}

inline double modular_sum(const std::vector<YoungFunction>& fs, std::span<const double> x,
                          double r) {
  double s = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double v = fs[i](std::abs(x[i]) / r);
    if (v == kInf) return kInf;
    s += v;
  }
  return s;
}

// Luxemburg gauge: inf{r > 0 : sum_i f_i(|x_i|/r) <= 1}, bisection to
// relative tolerance 1e-12. Ties on flat stretches resolve toward smaller r.
inline double luxemburg_eval(const std::vector<YoungFunction>& fs, std::span<const double> x) {
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) return 0.0;

  double r_lo = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double ai = std::abs(x[i]);
    if (ai == 0.0) continue;
    const double b = fs[i].finite_threshold();
    if (b < kInf) r_lo = std::max(r_lo, ai / b);
  }
  if (r_lo > 0.0 && modular_sum(fs, x, r_lo) <= 1.0) return r_lo;

  double hi = std::max(r_lo, mx);
  int guard = 0;
  while (modular_sum(fs, x, hi) > 1.0) {
    r_lo = hi;
    hi *= 2.0;
    if (++guard > 2100) throw SolverFailure("norm: luxemburg bracket expansion failed");
  }
  double lo = r_lo;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (modular_sum(fs, x, mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Amemiya gauge: inf over lambda of (sum_i f_i(lambda |x_i|) + 1) / lambda.
// The search range is capped at 1e6 / max|x_i|; linear-tail functions push the
// true infimum to the limit, which the `attained` flag reports.
inline AmemiyaResult amemiya_eval(const std::vector<YoungFunction>& fs,
                                  std::span<const double> x) {
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) return {0.0, true};

  double lam_fin = kInf;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double ai = std::abs(x[i]);
    if (ai == 0.0) continue;
    const double b = fs[i].finite_threshold();
    if (b < kInf) lam_fin = std::min(lam_fin, b / ai);
  }
  const double lam_cap = 1e6 / mx;
  const double hi_limit = std::min(lam_fin, lam_cap);

  auto objective = [&](double lam) -> double {
    double s = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const double v = fs[i](lam * std::abs(x[i]));
      if (v == kInf) return kInf;
      s += v;
    }
    return (s + 1.0) / lam;
  };

  // The objective is quasi-convex in lambda; golden-section over [lo, hi].
  const double invphi = 0.6180339887498949;
  double lo = hi_limit * 1e-12;
  double hi = hi_limit;
  double a = hi - invphi * (hi - lo);
  double b = lo + invphi * (hi - lo);
  double fa = objective(a);
  double fb = objective(b);
  for (int it = 0; it < 300 && hi - lo > 1e-12 * hi_limit; ++it) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - invphi * (hi - lo);
      fa = objective(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + invphi * (hi - lo);
      fb = objective(b);
    }
  }
  const double lam_best = 0.5 * (lo + hi);
  double best = std::min(fa, fb);
  const double at_end = objective(hi_limit);
  if (at_end < best) best = at_end;
  const bool capped = lam_cap < lam_fin;
  const bool attained = !capped || lam_best < hi_limit * (1.0 - 1e-9);
  return {best, attained};
}

inline double owl_eval(const std::vector<double>& w, std::span<const double> x) {
  std::vector<double> mags(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mags[i] = std::abs(x[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double s = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) s += w[i] * mags[i];
  return s;
}

}  // namespace detail

struct Hyperplane {
  std::vector<double> a;
};

inline bool on_hyperplane(const Hyperplane& h, std::span<const double> x,
                          double rel_tol = 1e-9) {
  if (h.a.size() != x.size()) {
    throw DomainError("hyperplane: vector length does not match");
  }
  double dot = 0.0, na = 0.0, nx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += h.a[i] * x[i];
    na += h.a[i] * h.a[i];
    nx += x[i] * x[i];
  }
  return std::abs(dot) <= rel_tol * std::sqrt(na) * std::sqrt(nx);
}

// Norm induced on the hyperplane <a, x> = 0 as a subspace of l_inf^n.
inline double subspace_norm_eval(const Hyperplane& h, std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("hyperplane: input entries must be finite");
  }
  if (!on_hyperplane(h, x)) {
    throw MembershipError("hyperplane: point does not satisfy the defining equation");
  }
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  return mx;
}

inline double NormSpec::eval(std::span<const double> x) const {
  detail::check_input(*this, x);
  return std::visit(
      [&](const auto& fam) -> double {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, Lp>) {
          return detail::lp_eval(fam.p, x);
        } else if constexpr (std::is_same_v<T, MusielakOrlicz>) {
          if (fam.gauge == Gauge::luxemburg) return detail::luxemburg_eval(fam.functions, x);
          return detail::amemiya_eval(fam.functions, x).value;
        } else if constexpr (std::is_same_v<T, Owl>) {
          return detail::owl_eval(fam.weights, x);
        } else if constexpr (std::is_same_v<T, PermMix>) {
          double sum = 0.0;
          for (double v : x) sum += v;
          return fam.alpha * detail::lp_eval(fam.p, x) + fam.beta * std::abs(sum);
        } else if constexpr (std::is_same_v<T, LinftyHyperplane>) {
          return subspace_norm_eval(Hyperplane{fam.a}, x);
        } else {
          std::vector<double> y;
          fam.transform.apply(x, y);
          return fam.base->eval(y);
        }
      },
      fam_);
}

inline AmemiyaResult amemiya_norm_detail(const NormSpec& spec, std::span<const double> x) {
  detail::check_input(spec, x);
  const auto* mo = std::get_if<NormSpec::MusielakOrlicz>(&spec.family());
  if (mo == nullptr || mo->gauge != Gauge::amemiya) {
    throw CapabilityError("norm: not an amemiya-gauge space");
  }
  return detail::amemiya_eval(mo->functions, x);
}

// Sign flips and a sort bringing the coefficients to 0 <= a_1 <= ... <= a_n.
// Both are recorded so constructed point sets can be mapped back through the
// corresponding l_inf isometry.
struct CanonicalHyperplane {
  Hyperplane canonical;       // nonnegative ascending coefficients
  std::vector<double> signs;  // per original index
  std::vector<int> perm;      // perm[slot] = original index

  std::vector<double> to_original(std::span<const double> p) const {
    std::vector<double> out(p.size());
    for (std::size_t slot = 0; slot < p.size(); ++slot) {
      const auto orig = static_cast<std::size_t>(perm[slot]);
      out[orig] = signs[orig] * p[slot];
    }
    return out;
  }

  std::vector<double> to_canonical(std::span<const double> p) const {
    std::vector<double> out(p.size());
    for (std::size_t slot = 0; slot < p.size(); ++slot) {
      const auto orig = static_cast<std::size_t>(perm[slot]);
      out[slot] = signs[orig] * p[orig];
    }
    return out;
  }
};

inline CanonicalHyperplane canonicalize_hyperplane(std::span<const double> a) {
  if (a.empty()) throw DomainError("hyperplane: empty coefficient vector");
  bool nonzero = false;
  for (double v : a) {
    if (!std::isfinite(v)) throw DomainError("hyperplane: coefficients must be finite");
    if (v != 0.0) nonzero = true;
  }
  if (!nonzero) throw DegenerateInputError("hyperplane: zero coefficient vector");

  CanonicalHyperplane out;
  out.signs.resize(a.size());
  out.perm.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.signs[i] = a[i] < 0.0 ? -1.0 : 1.0;
    out.perm[i] = static_cast<int>(i);
  }
  std::stable_sort(out.perm.begin(), out.perm.end(), [&](int i, int j) {
    return std::abs(a[static_cast<std::size_t>(i)]) < std::abs(a[static_cast<std::size_t>(j)]);
  });
  out.canonical.a.resize(a.size());
  for (std::size_t slot = 0; slot < a.size(); ++slot) {
    out.canonical.a[slot] = std::abs(a[static_cast<std::size_t>(out.perm[slot])]);
  }
  return out;
}

}  // namespace eqk
