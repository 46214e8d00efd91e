#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include <eqk/errors.hpp>
#include <eqk/norm.hpp>
#include <eqk/pointset.hpp>
#include <eqk/rng.hpp>

namespace eqk {

struct SearchConfig {
  NormSpec norm;
  int m = 2;                          // target set size
  int restarts = 32;
  int max_passes = 600;               // coordinate-descent sweeps per restart
  double residual_threshold = 1e-16;  // on the sum of squared deviations
};

struct SearchResult {
  bool found = false;  // residual below threshold; a miss is inconclusive
  std::vector<std::vector<double>> points;
  double residual = kInf;
  int restarts_used = 0;
};

namespace detail {

struct DescentState {
  std::vector<std::vector<double>> pts;
  std::vector<std::vector<double>> dist;  // pairwise distances
  double residual = 0.0;
};

inline double pair_residual(double d) {
  const double dev = d - 1.0;
  return dev * dev;
}

inline void recompute_all(const NormSpec& norm, DescentState& st) {
  const std::size_t m = st.pts.size();
  std::vector<double> diff(st.pts.front().size());
  st.residual = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = st.pts[i][k] - st.pts[j][k];
      const double d = norm.eval(diff);
      st.dist[i][j] = d;
      st.residual += pair_residual(d);
    }
  }
}

// Random-restart coordinate descent with a shrinking step schedule.
// Derivative-free: the norms involved may be non-smooth.
inline DescentState descend(const NormSpec& norm, std::vector<std::vector<double>> start,
                            int max_passes, double threshold) {
  const std::size_t m = start.size();
  const std::size_t n = start.front().size();
  DescentState st;
  st.pts = std::move(start);
  st.dist.assign(m, std::vector<double>(m, 0.0));
  recompute_all(norm, st);

  std::vector<double> diff(n);
  std::vector<double> new_row(m);
  double step = 0.3;
  for (int pass = 0; pass < max_passes && st.residual >= threshold && step > 1e-10; ++pass) {
    bool improved = false;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        for (const double sgn : {1.0, -1.0}) {
          const double saved = st.pts[i][k];
          st.pts[i][k] = saved + sgn * step;
          double delta = 0.0;
          for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            for (std::size_t q = 0; q < n; ++q) diff[q] = st.pts[i][q] - st.pts[j][q];
            const double d = norm.eval(diff);
            new_row[j] = d;
            const double old_d = i < j ? st.dist[i][j] : st.dist[j][i];
            delta += pair_residual(d) - pair_residual(old_d);
          }
          if (delta < 0.0) {
            for (std::size_t j = 0; j < m; ++j) {
              if (j == i) continue;
              if (i < j) {
                st.dist[i][j] = new_row[j];
              } else {
                st.dist[j][i] = new_row[j];
              }
            }
            st.residual += delta;
            improved = true;
            break;  // keep the improving sign, move to the next coordinate
          }
          st.pts[i][k] = saved;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  recompute_all(norm, st);  // refresh against incremental drift
  return st;
}

}  // namespace detail

// Minimizes sum over pairs of (||x_i - x_j|| - 1)^2 from random starts.
// Returns the best point set when the residual beats the threshold; a miss is
// reported as inconclusive, never as a nonexistence proof.
inline SearchResult search_equilateral(const SearchConfig& cfg, std::uint64_t seed,
                                       const std::vector<std::vector<double>>* warm_start = nullptr,
                                       int threads = 1) {
  if (cfg.m < 2) throw ParameterError("oracle: target size must be at least 2");
  if (cfg.restarts < 1) throw ParameterError("oracle: needs at least one restart");
  const int n = cfg.norm.dim();
  if (n * cfg.m > 64) throw ParameterError("oracle: n*m exceeds the desk-scale limit of 64");
  const auto um = static_cast<std::size_t>(cfg.m);
  const auto un = static_cast<std::size_t>(n);
  if (warm_start != nullptr) {
    if (warm_start->size() != um) throw DomainError("oracle: warm start size mismatch");
    for (const auto& p : *warm_start) {
      if (p.size() != un) throw DomainError("oracle: warm start dimension mismatch");
    }
  }

  const int total = cfg.restarts + (warm_start != nullptr ? 1 : 0);
  struct Outcome {
    double residual = kInf;
    std::vector<std::vector<double>> pts;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(total));

  auto run_one = [&](int idx) {
    std::vector<std::vector<double>> start;
    if (warm_start != nullptr && idx == 0) {
      start = *warm_start;
    } else {
      Rng rng(seed + static_cast<std::uint64_t>(idx) * 0x9e3779b9ULL);
      start.assign(um, std::vector<double>(un));
      for (auto& p : start) {
        for (auto& x : p) x = rng.uniform(-1.0, 1.0);
      }
    }
    auto st = detail::descend(cfg.norm, std::move(start), cfg.max_passes, cfg.residual_threshold);
    outcomes[static_cast<std::size_t>(idx)] = {st.residual, std::move(st.pts)};
  };

  if (threads <= 1) {
    for (int idx = 0; idx < total; ++idx) run_one(idx);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, total);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) run_one(idx);
      });
    }
    for (auto& t : pool) t.join();
  }

  SearchResult best;
  best.restarts_used = total;
  for (const auto& oc : outcomes) {
    if (oc.residual < best.residual) {
      best.residual = oc.residual;
      best.points = oc.pts;
    }
  }
  best.found = best.residual < cfg.residual_threshold;
  return best;
}

}  // namespace eqk
