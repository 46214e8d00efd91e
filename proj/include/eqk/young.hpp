#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include <eqk/errors.hpp>

namespace eqk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr long double kInfL = std::numeric_limits<long double>::infinity();

enum class Side { left, right };

// Convex, left-continuous coordinate function f : [0, inf) -> [0, inf] with
// f(0) = 0, finite somewhere, and f(t) -> inf. Only closed-form families are
// supported so that thresholds and one-sided derivatives stay exact.
class YoungFunction {
 public:
  struct Power {
    double p;  // f(t) = t^p, p >= 1
  };
  struct Indicator {
    double b;  // f = 0 on [0, b], inf beyond
  };
  struct PiecewiseLinear {
    std::vector<double> breakpoints;  // ascending, starting at 0
    std::vector<double> slopes;       // nondecreasing, >= 0, one per breakpoint
    double cutoff;                    // kInf when the function is finite-valued
  };
  struct AffineMix {
    std::shared_ptr<const YoungFunction> base;
    double w;  // (0, 1]
    double s;  // >= 0; f(t) = w*base(t) + s*t
  };
  using Family = std::variant<Power, Indicator, PiecewiseLinear, AffineMix>;

  static YoungFunction power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw ParameterError("young: power exponent must satisfy p >= 1");
    }
    return YoungFunction(Power{p});
  }

  static YoungFunction indicator(double b) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw ParameterError("young: indicator threshold must be positive");
    }
    return YoungFunction(Indicator{b});
  }

  static YoungFunction piecewise_linear(std::vector<double> breakpoints,
                                        std::vector<double> slopes,
                                        double cutoff = kInf) {
    if (breakpoints.empty() || breakpoints.size() != slopes.size()) {
      throw ParameterError("young: piecewise needs equally many breakpoints and slopes");
    }
    if (breakpoints.front() != 0.0) {
      throw ParameterError("young: first breakpoint must be 0");
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (!std::isfinite(breakpoints[i]) || !std::isfinite(slopes[i]) || slopes[i] < 0.0) {
        throw ParameterError("young: piecewise data must be finite with nonnegative slopes");
      }
      if (i > 0 && !(breakpoints[i] > breakpoints[i - 1])) {
        throw ParameterError("young: breakpoints must be strictly ascending");
      }
      if (i > 0 && slopes[i] < slopes[i - 1]) {
        throw ParameterError("young: slopes must be nondecreasing (convexity)");
      }
    }
    if (!(cutoff > 0.0)) throw ParameterError("young: cutoff must be positive");
    if (cutoff < breakpoints.back()) {
      throw ParameterError("young: cutoff must not precede the last breakpoint");
    }
    if (cutoff == kInf && slopes.back() <= 0.0) {
      throw ParameterError("young: function must tend to infinity (positive final slope or finite cutoff)");
    }
    return YoungFunction(PiecewiseLinear{std::move(breakpoints), std::move(slopes), cutoff});
  }

  static YoungFunction affine_mix(YoungFunction base, double w, double s) {
    if (!(w > 0.0) || w > 1.0 || !std::isfinite(w)) {
      throw ParameterError("young: affine_mix weight must lie in (0, 1]");
    }
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw ParameterError("young: affine_mix slope must be nonnegative");
    }
    return YoungFunction(AffineMix{std::make_shared<YoungFunction>(std::move(base)), w, s});
  }

  double operator()(double t) const { return eval(t); }

  double eval(double t) const {
    if (!(t >= 0.0)) throw DomainError("young: eval requires t >= 0");
    return eval_unchecked(t);
  }

  // Extended-precision evaluation. Regularized functions carry extension
  // slopes of order k, where double-spaced arguments can only realize values
  // in steps of slope * ulp; root finding against them needs the extra bits.
  long double eval_extended(long double t) const {
    if (!(t >= 0.0L)) throw DomainError("young: eval requires t >= 0");
    return std::visit(
        [&](const auto& fam) -> long double {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Power>) {
            return std::pow(t, static_cast<long double>(fam.p));
          } else if constexpr (std::is_same_v<T, Indicator>) {
            return t <= static_cast<long double>(fam.b) ? 0.0L : kInfL;
          } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
            if (t > static_cast<long double>(fam.cutoff)) return kInfL;
            long double v = 0.0L;
            for (std::size_t i = 0; i < fam.breakpoints.size() &&
                                    static_cast<long double>(fam.breakpoints[i]) < t;
                 ++i) {
              const long double seg_end =
                  (i + 1 < fam.breakpoints.size())
                      ? std::min(t, static_cast<long double>(fam.breakpoints[i + 1]))
                      : t;
              v += static_cast<long double>(fam.slopes[i]) *
                   (seg_end - static_cast<long double>(fam.breakpoints[i]));
            }
            return v;
          } else {
            const long double bv = fam.base->eval_extended(t);
            if (bv == kInfL) return kInfL;
            return static_cast<long double>(fam.w) * bv + static_cast<long double>(fam.s) * t;
          }
        },
        fam_);
  }

  // Exact one-sided derivative; +inf where the function jumps to infinity.
  double one_sided_derivative(double t, Side side) const {
    if (!(t >= 0.0)) throw DomainError("young: derivative requires t >= 0");
    if (side == Side::left && t == 0.0) {
      throw DomainError("young: left derivative undefined at 0");
    }
    const double b = finite_threshold();
    if (t > b) throw DomainError("young: derivative outside the closure of the finite domain");
    if (t == b && side == Side::right) return kInf;
    return std::visit(
        [&](const auto& fam) -> double { return derivative_impl(fam, t, side); }, fam_);
  }

  // sup{x : f(x) = 0}
  double zero_threshold() const {
    return std::visit(
        [&](const auto& fam) -> double {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Power>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, Indicator>) {
            return fam.b;
          } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
            for (std::size_t i = 0; i < fam.slopes.size(); ++i) {
              if (fam.slopes[i] > 0.0) return fam.breakpoints[i];
            }
            return fam.cutoff;  // identically zero up to the cutoff
          } else {
            return fam.s > 0.0 ? 0.0 : fam.base->zero_threshold();
          }
        },
        fam_);
  }

  // sup{x : f(x) < inf}
  double finite_threshold() const {
    return std::visit(
        [&](const auto& fam) -> double {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Power>) {
            return kInf;
          } else if constexpr (std::is_same_v<T, Indicator>) {
            return fam.b;
          } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
            return fam.cutoff;
          } else {
            return fam.base->finite_threshold();
          }
        },
        fam_);
  }

  double sup_finite_value() const {
    const double b = finite_threshold();
    return b == kInf ? kInf : eval_unchecked(b);
  }

  bool finite_valued() const { return finite_threshold() == kInf; }

  bool strictly_increasing() const {
    return std::visit(
        [&](const auto& fam) -> bool {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Power>) {
            return true;
          } else if constexpr (std::is_same_v<T, Indicator>) {
            return false;
          } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
            return std::all_of(fam.slopes.begin(), fam.slopes.end(),
                               [](double s) { return s > 0.0; });
          } else {
            return fam.s > 0.0 || fam.base->strictly_increasing();
          }
        },
        fam_);
  }

  const Family& family() const { return fam_; }

  friend bool operator==(const YoungFunction& a, const YoungFunction& b) {
    if (a.fam_.index() != b.fam_.index()) return false;
    if (const auto* p = std::get_if<Power>(&a.fam_)) {
      return p->p == std::get<Power>(b.fam_).p;
    }
    if (const auto* p = std::get_if<Indicator>(&a.fam_)) {
      return p->b == std::get<Indicator>(b.fam_).b;
    }
    if (const auto* p = std::get_if<PiecewiseLinear>(&a.fam_)) {
      const auto& q = std::get<PiecewiseLinear>(b.fam_);
      return p->breakpoints == q.breakpoints && p->slopes == q.slopes && p->cutoff == q.cutoff;
    }
    const auto& pa = std::get<AffineMix>(a.fam_);
    const auto& pb = std::get<AffineMix>(b.fam_);
    return pa.w == pb.w && pa.s == pb.s && *pa.base == *pb.base;
  }

 private:
  explicit YoungFunction(Family f) : fam_(std::move(f)) {}

  double eval_unchecked(double t) const {
    return std::visit(
        [&](const auto& fam) -> double {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Power>) {
            return std::pow(t, fam.p);
          } else if constexpr (std::is_same_v<T, Indicator>) {
            return t <= fam.b ? 0.0 : kInf;
          } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
            if (t > fam.cutoff) return kInf;
            double v = 0.0;
            for (std::size_t i = 0; i < fam.breakpoints.size() && fam.breakpoints[i] < t; ++i) {
              const double seg_end =
                  (i + 1 < fam.breakpoints.size()) ? std::min(t, fam.breakpoints[i + 1]) : t;
              v += fam.slopes[i] * (seg_end - fam.breakpoints[i]);
            }
            return v;
          } else {
            const double bv = fam.base->eval_unchecked(t);
            if (bv == kInf) return kInf;
            return fam.w * bv + fam.s * t;
          }
        },
        fam_);
  }

  static double derivative_impl(const Power& fam, double t, Side) {
    if (t == 0.0) return fam.p == 1.0 ? 1.0 : 0.0;  // right derivative at 0
    return fam.p * std::pow(t, fam.p - 1.0);
  }

  static double derivative_impl(const Indicator&, double, Side) { return 0.0; }

  static double derivative_impl(const PiecewiseLinear& fam, double t, Side side) {
    // slopes[i] applies on [breakpoints[i], breakpoints[i+1]).
    std::size_t i = fam.breakpoints.size();
    if (side == Side::right) {
      while (i > 0 && fam.breakpoints[i - 1] > t) --i;
    } else {
      while (i > 0 && fam.breakpoints[i - 1] >= t) --i;
    }
    if (i == 0) return fam.slopes.front();
    return fam.slopes[i - 1];
  }

  static double derivative_impl(const AffineMix& fam, double t, Side side) {
    const double d = fam.base->one_sided_derivative(t, side);
    if (d == kInf) return kInf;
    return fam.w * d + fam.s;
  }

  Family fam_;
};

// Smallest t with f(t) >= y. Closed form where available, bisection to
// absolute tolerance 1e-13 otherwise. Errors when y exceeds every finite value.
inline double inverse_solve(const YoungFunction& f, double y) {
  if (!(y >= 0.0)) throw DomainError("young: inverse_solve requires y >= 0");
  if (y == 0.0) return 0.0;
  if (y == kInf) throw NoSolutionError("young: no smallest argument reaches infinity");

  if (const auto* p = std::get_if<YoungFunction::Power>(&f.family())) {
    return std::pow(y, 1.0 / p->p);
  }
  if (std::get_if<YoungFunction::Indicator>(&f.family())) {
    throw NoSolutionError("young: indicator function never attains positive finite values");
  }
  if (const auto* p = std::get_if<YoungFunction::PiecewiseLinear>(&f.family())) {
    double v = 0.0;
    for (std::size_t i = 0; i < p->breakpoints.size(); ++i) {
      const double seg_end =
          (i + 1 < p->breakpoints.size()) ? p->breakpoints[i + 1] : p->cutoff;
      if (p->slopes[i] > 0.0) {
        const double v_end =
            seg_end == kInf ? kInf : v + p->slopes[i] * (seg_end - p->breakpoints[i]);
        if (v_end >= y) return p->breakpoints[i] + (y - v) / p->slopes[i];
        v = v_end;
      }
    }
    throw NoSolutionError("young: target above the supremum of finite values");
  }

  // affine_mix: monotone bisection over the finite domain.
  const double b = f.finite_threshold();
  double hi;
  if (b < kInf) {
    if (f.eval(b) < y) {
      throw NoSolutionError("young: target above the supremum of finite values");
    }
    hi = b;
  } else {
    hi = 1.0;
    int guard = 0;
    while (f.eval(hi) < y) {
      hi *= 2.0;
      if (++guard > 1100) {
        throw NoSolutionError("young: target not reached by finite values");
      }
    }
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f.eval(mid) >= y) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

namespace detail {

struct PiecewiseData {
  std::vector<double> breakpoints;
  std::vector<double> slopes;
  double cutoff;
};

// Exact piecewise-linear form of a Young function with a finite threshold.
// Within the supported families, a finite threshold forces linearity on the
// finite domain, so the extraction below is total.
inline PiecewiseData to_piecewise(const YoungFunction& f) {
  if (const auto* p = std::get_if<YoungFunction::Indicator>(&f.family())) {
    return {{0.0}, {0.0}, p->b};
  }
  if (const auto* p = std::get_if<YoungFunction::PiecewiseLinear>(&f.family())) {
    PiecewiseData d{p->breakpoints, p->slopes, p->cutoff};
    while (d.breakpoints.size() > 1 && d.breakpoints.back() >= d.cutoff) {
      d.breakpoints.pop_back();
      d.slopes.pop_back();
    }
    return d;
  }
  if (const auto* p = std::get_if<YoungFunction::AffineMix>(&f.family())) {
    PiecewiseData d = to_piecewise(*p->base);
    for (auto& s : d.slopes) s = p->w * s + p->s;
    return d;
  }
  throw ParameterError("young: function has no finite threshold");
}

}  // namespace detail

// Exact representation of t -> f(c t) for c in (0, 1], used to rescale a
// Musielak-Orlicz space so that the basis vectors have norm below one.
inline YoungFunction scale_argument(const YoungFunction& f, double c) {
  if (!(c > 0.0) || c > 1.0) {
    throw ParameterError("young: argument scale must lie in (0, 1]");
  }
  if (c == 1.0) return f;
  if (const auto* p = std::get_if<YoungFunction::Power>(&f.family())) {
    const double w = std::pow(c, p->p);
    if (!(w > 0.0)) throw ParameterError("young: argument scale underflow");
    return YoungFunction::affine_mix(YoungFunction::power(p->p), w, 0.0);
  }
  if (const auto* p = std::get_if<YoungFunction::Indicator>(&f.family())) {
    return YoungFunction::indicator(p->b / c);
  }
  if (const auto* p = std::get_if<YoungFunction::PiecewiseLinear>(&f.family())) {
    std::vector<double> bp = p->breakpoints;
    std::vector<double> sl = p->slopes;
    for (auto& v : bp) v /= c;
    for (auto& v : sl) v *= c;
    const double cutoff = p->cutoff == kInf ? kInf : p->cutoff / c;
    return YoungFunction::piecewise_linear(std::move(bp), std::move(sl), cutoff);
  }
  const auto& mix = std::get<YoungFunction::AffineMix>(f.family());
  return YoungFunction::affine_mix(scale_argument(*mix.base, c), mix.w, mix.s * c);
}

// Strictly increasing, finite-valued approximation f_k with
// f_k(x) = ((k-1)/k) f(x) + x/k on the finite domain [0, b]. Beyond a finite
// threshold the function continues affinely with slope
// f_k(b)/b + k f_k^-(b) + k/b; the k/b term keeps the slope growing in k even
// when f is flat at b, so that the induced norms converge to the original.
// Any slope >= f_k^-(b) preserves convexity.
inline YoungFunction regularize(const YoungFunction& f, std::int64_t k) {
  if (k < 2) throw ParameterError("young: regularize requires k >= 2");
  const double kd = static_cast<double>(k);
  const double w = (kd - 1.0) / kd;
  const double s = 1.0 / kd;

  const double b = f.finite_threshold();
  if (b == kInf) {
    return YoungFunction::affine_mix(f, w, s);
  }

  detail::PiecewiseData d = detail::to_piecewise(f);
  for (auto& sl : d.slopes) sl = w * sl + s;

  double value_at_b = 0.0;
  for (std::size_t i = 0; i < d.breakpoints.size(); ++i) {
    const double seg_end = (i + 1 < d.breakpoints.size()) ? d.breakpoints[i + 1] : b;
    value_at_b += d.slopes[i] * (seg_end - d.breakpoints[i]);
  }
  const double left_slope_at_b = d.slopes.back();
  const double extension_slope = value_at_b / b + kd * left_slope_at_b + kd / b;

  d.breakpoints.push_back(b);
  d.slopes.push_back(extension_slope);
  return YoungFunction::piecewise_linear(std::move(d.breakpoints), std::move(d.slopes), kInf);
}

}  // namespace eqk
