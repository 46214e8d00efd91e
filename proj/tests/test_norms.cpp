#include <doctest.h>

#include <cmath>
#include <vector>

#include <eqk/norm.hpp>
#include <eqk/rng.hpp>

using namespace eqk;

namespace {

std::vector<NormSpec> sample_specs() {
  std::vector<NormSpec> out;
  out.push_back(NormSpec::lp(4, 1.0));
  out.push_back(NormSpec::lp(4, 2.0));
  out.push_back(NormSpec::lp(3, 3.0));
  out.push_back(NormSpec::lp(5, kInf));
  out.push_back(NormSpec::owl({3.0, 2.0, 1.0}));
  out.push_back(NormSpec::perm_mix(3, 2.0, 1.0, 0.5));
  out.push_back(NormSpec::perm_mix(4, 2.0, 1.0, 0.0));
  out.push_back(NormSpec::musielak_orlicz(
      {YoungFunction::power(2.0), YoungFunction::power(3.0), YoungFunction::power(1.5)}));
  out.push_back(NormSpec::musielak_orlicz(
      {YoungFunction::indicator(1.0), YoungFunction::power(2.0), YoungFunction::power(2.0)}));
  out.push_back(NormSpec::musielak_orlicz(
      {YoungFunction::power(2.0), YoungFunction::power(2.0), YoungFunction::power(2.0)},
      Gauge::amemiya));
  out.push_back(NormSpec::scaled(NormSpec::lp(3, 2.0), Transform::diagonal({1.0, 2.0, 0.5})));
  return out;
}

std::vector<double> random_vector(Rng& rng, int n) { return rng.gaussian_vector(static_cast<std::size_t>(n)); }

}  // namespace

TEST_CASE("luxemburg norm with power functions equals the lp norm") {
  Rng rng(101);
  for (double p : {1.0, 1.5, 2.0, 3.0, 10.0}) {
    for (int n = 2; n <= 8; ++n) {
      std::vector<YoungFunction> fs(static_cast<std::size_t>(n), YoungFunction::power(p));
      const NormSpec orlicz = NormSpec::musielak_orlicz(fs);
      const NormSpec lp = NormSpec::lp(n, p);
      for (int t = 0; t < 200; ++t) {
        const auto x = random_vector(rng, n);
        CHECK(orlicz.eval(x) == doctest::Approx(lp.eval(x)).epsilon(1e-10));
      }
    }
  }
  // Euclidean 3-4-5 through the orlicz route
  const NormSpec two = NormSpec::musielak_orlicz({YoungFunction::power(2.0), YoungFunction::power(2.0)});
  CHECK(two.eval(std::vector<double>{3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("luxemburg norm with indicator functions is a weighted sup norm") {
  std::vector<YoungFunction> fs(2, YoungFunction::indicator(1.0));
  const NormSpec spec = NormSpec::musielak_orlicz(fs);
  CHECK(spec.eval(std::vector<double>{3.0, 1.0}) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(spec.eval(std::vector<double>{0.0, 0.0}) == 0.0);
}

TEST_CASE("amemiya gauge") {
  SUBCASE("linear functions: capped-range infimum approaches the l1 norm") {
    std::vector<YoungFunction> fs(2, YoungFunction::power(1.0));
    const NormSpec spec = NormSpec::musielak_orlicz(fs, Gauge::amemiya);
    const auto detail = amemiya_norm_detail(spec, std::vector<double>{1.0, 1.0});
    CHECK(detail.value == doctest::Approx(2.0).epsilon(2e-6));
    CHECK(!detail.attained);  // the true infimum is a limit at lambda -> inf
  }

  SUBCASE("quadratic functions against a dense lambda-grid oracle") {
    Rng rng(23);
    std::vector<YoungFunction> fs(3, YoungFunction::power(2.0));
    const NormSpec spec = NormSpec::musielak_orlicz(fs, Gauge::amemiya);
    for (int t = 0; t < 25; ++t) {
      const auto x = random_vector(rng, 3);
      double best = kInf;
      for (int i = 1; i <= 200000; ++i) {
        const double lam = 1e-3 * static_cast<double>(i);
        double s = 0.0;
        for (std::size_t q = 0; q < 3; ++q) s += std::pow(lam * std::abs(x[q]), 2.0);
        best = std::min(best, (s + 1.0) / lam);
      }
      CHECK(spec.eval(x) == doctest::Approx(best).epsilon(1e-6));
    }
  }
}

TEST_CASE("ordered weighted l1 norm") {
  const NormSpec spec = NormSpec::owl({2.0, 1.0});
  CHECK(spec.eval(std::vector<double>{-1.0, 3.0}) == doctest::Approx(7.0));
  CHECK_THROWS_AS(NormSpec::owl({1.0, 2.0}), ParameterError);
  CHECK_THROWS_AS(NormSpec::owl({0.0, 0.0}), ParameterError);
}

TEST_CASE("perm_mix and lp closed forms") {
  const NormSpec pm = NormSpec::perm_mix(2, 2.0, 1.0, 0.5);
  CHECK(pm.eval(std::vector<double>{1.0, 1.0}) == doctest::Approx(std::sqrt(2.0) + 1.0));
  CHECK(pm.eval(std::vector<double>{1.0, -1.0}) == doctest::Approx(std::sqrt(2.0)));
  const NormSpec li = NormSpec::lp(3, kInf);
  CHECK(li.eval(std::vector<double>{1.0, -4.0, 2.0}) == doctest::Approx(4.0));
}

TEST_CASE("norm axioms sampled: homogeneity and triangle inequality") {
  Rng rng(29);
  for (const auto& spec : sample_specs()) {
    const int n = spec.dim();
    for (int t = 0; t < 1000; ++t) {
      const auto x = random_vector(rng, n);
      const auto y = random_vector(rng, n);
      const double lam = rng.uniform(-3.0, 3.0);
      std::vector<double> lx(x.size()), xy(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        lx[i] = lam * x[i];
        xy[i] = x[i] + y[i];
      }
      const double nx = spec.eval(x);
      CHECK(spec.eval(lx) == doctest::Approx(std::abs(lam) * nx).epsilon(1e-10));
      CHECK(spec.eval(xy) <= nx + spec.eval(y) + 1e-10);
      if (nx > 1e-12) CHECK(nx > 0.0);
    }
  }
}

TEST_CASE("monotonicity for unconditional specs") {
  Rng rng(31);
  for (const auto& spec : sample_specs()) {
    if (!spec.unconditional()) continue;
    const int n = spec.dim();
    for (int t = 0; t < 1000; ++t) {
      const auto y = random_vector(rng, n);
      std::vector<double> x(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) x[i] = rng.uniform() * y[i];
      CHECK(spec.eval(x) <= spec.eval(y) + 1e-10);
    }
  }
}

TEST_CASE("permutation invariance where claimed") {
  Rng rng(37);
  for (const auto& spec : sample_specs()) {
    if (!spec.permutation_invariant()) continue;
    const auto n = static_cast<std::size_t>(spec.dim());
    for (int t = 0; t < 100; ++t) {
      const auto x = rng.gaussian_vector(n);
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
      rng.shuffle(idx);
      std::vector<double> px(n);
      for (std::size_t i = 0; i < n; ++i) px[i] = x[idx[i]];
      CHECK(spec.eval(px) == doctest::Approx(spec.eval(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("luxemburg unit sphere carries modular sum one") {
  Rng rng(41);
  const std::vector<YoungFunction> fs = {YoungFunction::power(2.0), YoungFunction::power(3.0),
                                         YoungFunction::power(1.5)};
  const NormSpec spec = NormSpec::musielak_orlicz(fs);
  for (int t = 0; t < 300; ++t) {
    auto x = rng.gaussian_vector(3);
    const double r = spec.eval(x);
    if (r <= 1e-9) continue;
    for (auto& v : x) v /= r;
    double modular = 0.0;
    for (std::size_t i = 0; i < 3; ++i) modular += fs[i](std::abs(x[i]));
    CHECK(modular == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("hyperplane subspace norm") {
  const Hyperplane h{{1.0, 1.0, 1.0, 1.0}};
  CHECK(subspace_norm_eval(h, std::vector<double>{1.0, 1.0, -1.0, -1.0}) == doctest::Approx(1.0));
  CHECK(subspace_norm_eval(h, std::vector<double>{0.0, 0.0, 0.0, 0.0}) == 0.0);
  const Hyperplane h2{{1.0, 2.0}};
  CHECK(subspace_norm_eval(h2, std::vector<double>{2.0, -1.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(subspace_norm_eval(h2, std::vector<double>{1.0, 1.0}), MembershipError);

  const NormSpec spec = NormSpec::linfty_hyperplane({1.0, 1.0, 1.0, 1.0});
  CHECK(spec.eval(std::vector<double>{1.0, 1.0, -1.0, -1.0}) == doctest::Approx(1.0));
}

TEST_CASE("hyperplane canonicalization") {
  SUBCASE("worked example") {
    const std::vector<double> a{-3.0, 1.0, 2.0};
    const auto canon = canonicalize_hyperplane(a);
    CHECK(canon.canonical.a == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(canon.signs == std::vector<double>{-1.0, 1.0, 1.0});
    CHECK(canon.perm == std::vector<int>{1, 2, 0});
  }
  SUBCASE("identity on already canonical data") {
    const auto canon = canonicalize_hyperplane(std::vector<double>{1.0, 1.0});
    CHECK(canon.canonical.a == std::vector<double>{1.0, 1.0});
    CHECK(canon.perm == std::vector<int>{0, 1});
  }
  SUBCASE("round trip over random hyperplanes") {
    Rng rng(43);
    for (int t = 0; t < 1000; ++t) {
      const int n = 2 + static_cast<int>(rng.below(6));
      auto a = rng.gaussian_vector(static_cast<std::size_t>(n));
      const auto canon = canonicalize_hyperplane(a);
      for (std::size_t i = 1; i < canon.canonical.a.size(); ++i) {
        CHECK(canon.canonical.a[i - 1] <= canon.canonical.a[i]);
      }
      const auto p = rng.gaussian_vector(static_cast<std::size_t>(n));
      const auto there = canon.to_canonical(p);
      const auto back = canon.to_original(there);
      for (std::size_t i = 0; i < p.size(); ++i) CHECK(back[i] == doctest::Approx(p[i]));
    }
  }
  CHECK_THROWS_AS(canonicalize_hyperplane(std::vector<double>{0.0, 0.0}), DegenerateInputError);
}

TEST_CASE("scaled specs: evaluation and flag soundness") {
  const NormSpec base = NormSpec::lp(3, 2.0);
  const NormSpec uni = NormSpec::scaled(base, Transform::uniform(2.0));
  CHECK(uni.eval(std::vector<double>{1.0, 0.0, 0.0}) == doctest::Approx(2.0));
  CHECK(uni.permutation_invariant());
  CHECK(uni.unconditional());
  CHECK(uni.smooth_claimed());

  const NormSpec diag = NormSpec::scaled(base, Transform::diagonal({1.0, 2.0, 3.0}));
  CHECK(diag.eval(std::vector<double>{0.0, 1.0, 0.0}) == doctest::Approx(2.0));
  CHECK(!diag.permutation_invariant());
  CHECK(diag.unconditional());

  const NormSpec gen = NormSpec::scaled(
      base, Transform::general({{1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}));
  CHECK(!gen.permutation_invariant());
  CHECK(!gen.unconditional());
  CHECK(!gen.smooth_claimed());
  CHECK(gen.eval(std::vector<double>{1.0, 1.0, 0.0}) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("input validation") {
  const NormSpec spec = NormSpec::lp(3, 2.0);
  CHECK_THROWS_AS(spec.eval(std::vector<double>{1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(spec.eval(std::vector<double>{1.0, kInf, 0.0}), DomainError);
  CHECK_THROWS_AS(NormSpec::lp(0, 2.0), ParameterError);
  CHECK_THROWS_AS(NormSpec::lp(3, 0.5), ParameterError);
}
