#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <eqk/errors.hpp>
#include <eqk/norm.hpp>
#include <eqk/pointset.hpp>
#include <eqk/rng.hpp>

namespace eqk {

struct DistanceSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct EquilateralCertificate {
  int m = 0;
  DistanceSummary distances;
  double claimed = 0.0;
  double tolerance = 0.0;  // relative to the claimed distance
  bool pass = false;
  std::vector<std::string> heuristic_flags;
};

// Evaluates all m(m-1)/2 pairwise distances under the given norm.
// verdict: pass iff max |d_ij - claimed| <= tolerance * claimed.
inline EquilateralCertificate certify_equilateral(const PointSet& ps, double tol,
                                                  std::vector<std::string> heuristic_flags = {}) {
  if (ps.points.size() < 2) throw DomainError("verify: need at least two points");
  if (!(tol > 0.0)) throw ParameterError("verify: tolerance must be positive");
  const int n = norm_ref_dim(ps.norm);
  for (const auto& p : ps.points) {
    if (static_cast<int>(p.size()) != n) throw DomainError("verify: point dimension mismatch");
  }

  const auto* hyper = std::get_if<Hyperplane>(&ps.norm);
  const auto* spec = std::get_if<NormSpec>(&ps.norm);
  if (hyper != nullptr) {
    for (const auto& p : ps.points) {
      if (!on_hyperplane(*hyper, p)) {
        throw MembershipError("verify: point off the hyperplane");
      }
    }
  }

  EquilateralCertificate cert;
  cert.m = static_cast<int>(ps.points.size());
  cert.claimed = ps.claimed_distance;
  cert.tolerance = tol;
  cert.heuristic_flags = std::move(heuristic_flags);

  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  double dsum = 0.0;
  std::size_t pairs = 0;
  std::vector<double> diff(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < ps.points.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.points.size(); ++j) {
      double d;
      if (hyper != nullptr) {
        double mx = 0.0;
        for (int k = 0; k < n; ++k) {
          mx = std::max(mx, std::abs(ps.points[i][static_cast<std::size_t>(k)] -
                                     ps.points[j][static_cast<std::size_t>(k)]));
        }
        d = mx;
      } else {
        for (int k = 0; k < n; ++k) {
          diff[static_cast<std::size_t>(k)] = ps.points[i][static_cast<std::size_t>(k)] -
                                              ps.points[j][static_cast<std::size_t>(k)];
        }
        d = spec->eval(diff);
      }
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
      dsum += d;
      ++pairs;
    }
  }
  cert.distances = {dmin, dmax, dsum / static_cast<double>(pairs)};
  const double worst = std::max(std::abs(dmax - cert.claimed), std::abs(dmin - cert.claimed));
  cert.pass = worst <= tol * cert.claimed;
  return cert;
}

inline EquilateralCertificate certify_equilateral(
    const std::vector<std::vector<double>>& points, const NormRef& norm, double claimed,
    double tol, std::vector<std::string> heuristic_flags = {}) {
  PointSet ps{points, claimed, norm};
  return certify_equilateral(ps, tol, std::move(heuristic_flags));
}

struct SymmetryReport {
  double perm_deviation = 0.0;
  double sign_deviation = 0.0;
  bool perm_claimed = false;
  bool sign_claimed = false;
  bool pass = false;  // all claimed symmetries hold within 1e-11
  int trials = 0;
  std::uint64_t seed = 0;
};

// Measures the worst deviation of the norm under random permutations and sign
// patterns; a claimed symmetry passes when its deviation stays below 1e-11.
inline SymmetryReport check_symmetries(const NormSpec& spec, int trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterError("verify: trials must be >= 1");
  const auto n = static_cast<std::size_t>(spec.dim());
  Rng rng(seed);
  SymmetryReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.perm_claimed = spec.permutation_invariant();
  rep.sign_claimed = spec.unconditional();

  std::vector<double> permuted(n), flipped(n);
  std::vector<std::size_t> idx(n);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> x = rng.gaussian_vector(n);
    const double base = spec.eval(x);
    if (!(base > 0.0)) continue;
    for (auto& v : x) v /= base;

    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    rng.shuffle(idx);
    for (std::size_t i = 0; i < n; ++i) permuted[i] = x[idx[i]];
    rep.perm_deviation = std::max(rep.perm_deviation, std::abs(spec.eval(permuted) - 1.0));

    const std::vector<double> signs = rng.sign_vector(n);
    for (std::size_t i = 0; i < n; ++i) flipped[i] = signs[i] * x[i];
    rep.sign_deviation = std::max(rep.sign_deviation, std::abs(spec.eval(flipped) - 1.0));
  }
  rep.pass = (!rep.perm_claimed || rep.perm_deviation <= 1e-11) &&
             (!rep.sign_claimed || rep.sign_deviation <= 1e-11);
  return rep;
}

struct MonotoneReport {
  bool sign_symmetric = false;
  bool monotone = false;
  bool agree = false;  // the two sampled properties coincide
  double sign_deviation = 0.0;
  double worst_monotone_violation = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Samples 1-unconditionality and coordinate-wise monotonicity independently
// and reports whether the two verdicts agree. When sign symmetry fails, a
// greedy sign-flip search is used to exhibit a concrete monotonicity
// violation. Evidence, not proof.
inline MonotoneReport check_monotone_iff_unconditional(const NormSpec& spec, int trials,
                                                       std::uint64_t seed) {
  if (trials < 1) throw ParameterError("verify: trials must be >= 1");
  const auto n = static_cast<std::size_t>(spec.dim());
  Rng rng(seed);
  MonotoneReport rep;
  rep.trials = trials;
  rep.seed = seed;

  std::vector<double> flipped(n), shrunk(n);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> y = rng.gaussian_vector(n);
    const double ny = spec.eval(y);
    if (!(ny > 0.0)) continue;
    for (auto& v : y) v /= ny;

    const std::vector<double> signs = rng.sign_vector(n);
    for (std::size_t i = 0; i < n; ++i) flipped[i] = signs[i] * y[i];
    rep.sign_deviation = std::max(rep.sign_deviation, std::abs(spec.eval(flipped) - 1.0));

    for (std::size_t i = 0; i < n; ++i) shrunk[i] = rng.uniform() * y[i];
    rep.worst_monotone_violation =
        std::max(rep.worst_monotone_violation, spec.eval(shrunk) - 1.0);
  }

  // Directed search: greedily flip signs to maximize the norm. A gain beyond
  // tolerance is a monotonicity violation with equal coordinate moduli.
  const int directed = std::min(trials, 32);
  for (int t = 0; t < directed; ++t) {
    std::vector<double> y = rng.gaussian_vector(n);
    const double ny = spec.eval(y);
    if (!(ny > 0.0)) continue;
    for (auto& v : y) v /= ny;
    std::vector<double> z = y;
    double val = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = -z[i];
      const double v = spec.eval(z);
      if (v > val) {
        val = v;
      } else {
        z[i] = -z[i];
      }
    }
    rep.worst_monotone_violation = std::max(rep.worst_monotone_violation, val - 1.0);
  }

  rep.sign_symmetric = rep.sign_deviation <= 1e-11;
  rep.monotone = rep.worst_monotone_violation <= 1e-10;
  rep.agree = rep.sign_symmetric == rep.monotone;
  return rep;
}

}  // namespace eqk
