#include <doctest.h>

#include <cmath>
#include <random>

#include "ambiq/beta.hpp"
#include "ambiq/dirichlet.hpp"
#include "ambiq/error.hpp"
#include "ambiq/measures.hpp"
#include "ambiq/posterior_analytics.hpp"
#include "oracles.hpp"

using namespace ambiq;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ambiq::Error");
  return ErrorCode::InternalConsistency;
}

struct McDraws {
  std::vector<double> amb, modified, cs;
};

McDraws mc(const DirichletParams& params, std::size_t n, std::uint64_t seed) {
  const auto alpha = params.flattened();
  const std::size_t dim = alpha.size();
  const auto flat = dirichlet_sample_flat(alpha, n, seed);
  McDraws d;
  d.amb.resize(n);
  d.cs.resize(n);
  if (params.categories() >= 2) d.modified.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> row(flat.data() + i * dim, dim - 1);
    const double cs = flat[i * dim + dim - 1];
    d.cs[i] = cs;
    d.amb[i] = kernel::ambiguity_new(row, cs);
    if (!d.modified.empty()) d.modified[i] = kernel::ambiguity_modified(row, cs);
  }
  return d;
}

DirichletParams random_params(std::mt19937_64& gen, std::size_t c) {
  std::uniform_real_distribution<double> par(0.1, 50.0);
  std::vector<double> proper(c);
  for (auto& v : proper) v = par(gen);
  return DirichletParams(proper, par(gen));
}

}  // namespace

TEST_CASE("conjugate update") {
  const auto prior = DirichletParams::symmetric(2, 1.0);
  const auto post = posterior_update(prior, CountVector{{10, 1}, 1});
  CHECK(post.proper()[0] == 11.0);
  CHECK(post.proper()[1] == 2.0);
  CHECK(post.cs() == 2.0);
  CHECK(posterior_update(prior, CountVector{{0, 0}, 0}).flattened() == prior.flattened());
  CHECK(code_of([&] { posterior_update(prior, CountVector{{1, 2, 3}, 0}); }) ==
        ErrorCode::ShapeMismatch);
  const CountVector n1{{3, 0}, 2}, n2{{1, 4}, 0};
  CountVector both = n1;
  both += n2;
  CHECK(posterior_update(posterior_update(prior, n1), n2).flattened() ==
        posterior_update(prior, both).flattened());
}

TEST_CASE("expected normalized entropy") {
  const DirichletParams example({11.0, 2.0}, 2.0);
  const double value = expected_normalized_entropy(example);
  CHECK(std::abs(value - 0.64) < 0.005);
  CHECK(std::abs(value - 0.640491901383461) < 1e-10);  // mpmath reference
  const double two[] = {1.0, 1.0};
  CHECK(std::abs(expected_normalized_entropy(two) - 0.5 / std::log(2.0)) < 1e-12);
  const double one[] = {3.0};
  CHECK(code_of([&] { expected_normalized_entropy(one); }) ==
        ErrorCode::SingleCategoryUnsupported);

  const auto flat_alpha = DirichletParams::symmetric(3, 1e4);
  const double high = expected_normalized_entropy(flat_alpha);
  const auto draws = dirichlet_sample_flat(flat_alpha.flattened(), 20000, 5);
  double mean = 0.0;
  for (std::size_t i = 0; i < 20000; ++i)
    mean += normalized_entropy(std::span<const double>(draws.data() + 4 * i, 4));
  mean /= 20000.0;
  CHECK(high > 0.999);
  CHECK(std::abs(high - mean) < 1e-2);
}

TEST_CASE("expected ambiguity examples") {
  const DirichletParams flat({1.0, 1.0}, 1.0);
  CHECK(expected_amb(flat) == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
  CHECK(expected_amb_modified(flat) == doctest::Approx(7.0 / 9.0).epsilon(1e-14));
  const DirichletParams single({4.0}, 1.5);
  CHECK(expected_amb(single) == doctest::Approx(1.5 / 5.5).epsilon(1e-14));
  const DirichletParams heavy({1.0, 1.0}, 1000.0);
  CHECK(std::abs(expected_amb(heavy) - 0.99867) < 5e-6);
  CHECK(code_of([&] { expected_amb_modified(single); }) == ErrorCode::SingleCategoryUnsupported);
  CHECK(code_of([&] { var_amb_modified(single); }) == ErrorCode::SingleCategoryUnsupported);

  const auto d = mc(flat, 1000000, 7);
  auto m = oracle::moments(d.amb);
  CHECK(std::abs(m.mean - 5.0 / 9.0) < 3.0 * m.se_mean);
  m = oracle::moments(d.modified);
  CHECK(std::abs(m.mean - 7.0 / 9.0) < 3.0 * m.se_mean);
  const auto h = mc(heavy, 1000000, 8);
  m = oracle::moments(h.amb);
  CHECK(std::abs(m.mean - expected_amb(heavy)) < 4.0 * m.se_mean);
}

TEST_CASE("modified mean in the vanishing cs limit") {
  for (std::size_t c : {2u, 3u, 5u}) {
    const DirichletParams p(std::vector<double>(c, 3.0), 1e-12);
    const double cc = static_cast<double>(c);
    CHECK(std::abs(expected_amb_modified(p) - cc / (cc - 1.0) * expected_amb(p)) < 1e-9);
    CHECK(std::abs(var_amb_modified(p) - std::pow(cc / (cc - 1.0), 2) * var_amb(p)) < 1e-9);
    CHECK(cov_amb_qcs(p) < 1e-12);
  }
  const DirichletParams example({11.0, 2.0}, 2.0);
  const auto d = mc(example, 1000000, 9);
  const auto m = oracle::moments(d.modified);
  CHECK(std::abs(m.mean - expected_amb_modified(example)) < 3.0 * m.se_mean);
}

TEST_CASE("second moment and variance") {
  const DirichletParams flat({1.0, 1.0}, 1.0);
  const double mean = expected_amb(flat);
  CHECK(std::abs(second_moment_amb(flat) - mean * mean - var_amb(flat)) < 1e-12);
  const auto d = mc(flat, 1000000, 10);
  std::vector<double> sq(d.amb.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = d.amb[i] * d.amb[i];
  const auto m2 = oracle::moments(sq);
  CHECK(std::abs(m2.mean - second_moment_amb(flat)) < 3.0 * m2.se_mean);
  const auto m = oracle::moments(d.amb);
  CHECK(std::abs(m.variance - var_amb(flat)) < 3.0 * m.se_variance);
  const auto mm = oracle::moments(d.modified);
  CHECK(std::abs(mm.variance - var_amb_modified(flat)) < 3.0 * mm.se_variance);
  const auto cov = oracle::covariance(d.amb, d.cs);
  CHECK(std::abs(cov.value - cov_amb_qcs(flat)) < 3.0 * cov.se);
  CHECK(var_qcs(flat) == doctest::Approx(beta_variance(BetaParams(1.0, 2.0))).epsilon(1e-14));
}

TEST_CASE("single proper category reduces to the cs marginal") {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_params(gen, 1);
    const BetaParams cs(p.cs(), p.total() - p.cs());
    CHECK(std::abs(second_moment_amb(p) - beta_moment(cs, 2)) < 1e-12);
    CHECK(std::abs(var_amb(p) - beta_variance(cs)) < 1e-12);
  }
}

TEST_CASE("variance shrinks with concentration") {
  const DirichletParams base({2.0, 3.0, 1.0}, 1.5);
  const DirichletParams scaled({200.0, 300.0, 100.0}, 150.0);
  const double ratio = var_amb(base) / var_amb(scaled);
  CHECK(ratio > 50.0);
  CHECK(ratio < 200.0);
  const auto d = mc(scaled, 400000, 12);
  const auto m = oracle::moments(d.amb);
  CHECK(std::abs(m.variance - var_amb(scaled)) < 4.0 * m.se_variance);
  CHECK(var_amb_modified(DirichletParams({1e5, 1e5}, 1e5)) < 1e-5);
}

TEST_CASE("covariance is nonnegative and vanishes without cs mass") {
  std::mt19937_64 gen(13);
  for (int i = 0; i < 500; ++i) CHECK(cov_amb_qcs(random_params(gen, 1 + i % 6)) >= 0.0);
  CHECK(cov_amb_qcs(DirichletParams({2.0, 2.0}, 1e-14)) < 1e-14);
}

TEST_CASE("closed forms agree with Monte Carlo on random parameters") {
  std::mt19937_64 gen(14);
  for (int i = 0; i < 100; ++i) {
    const std::size_t c = 1 + static_cast<std::size_t>(i % 6);
    const auto p = random_params(gen, c);
    const auto d = mc(p, 1000000, 100 + static_cast<std::uint64_t>(i));
    INFO("case " << i << " C=" << c);
    const auto m = oracle::moments(d.amb);
    CHECK(std::abs(m.mean - expected_amb(p)) < 4.0 * m.se_mean);
    CHECK(std::abs(m.variance - var_amb(p)) < 4.0 * m.se_variance);
    const auto cov = oracle::covariance(d.amb, d.cs);
    CHECK(std::abs(cov.value - cov_amb_qcs(p)) < 4.0 * cov.se);
    if (c >= 2) {
      const auto mm = oracle::moments(d.modified);
      CHECK(std::abs(mm.mean - expected_amb_modified(p)) < 4.0 * mm.se_mean);
      CHECK(std::abs(mm.variance - var_amb_modified(p)) < 4.0 * mm.se_variance);
    }
  }
}

TEST_CASE("analytic invariants") {
  std::mt19937_64 gen(15);
  std::uniform_real_distribution<double> par(0.01, 100.0);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t c = 1 + static_cast<std::size_t>(i % 6);
    std::vector<double> proper(c);
    for (auto& v : proper) v = par(gen);
    const DirichletParams p(proper, par(gen));
    const double e = expected_amb(p);
    REQUIRE(e >= 0.0);
    REQUIRE(e <= 1.0);
    REQUIRE(var_amb(p) >= 0.0);
    REQUIRE(var_amb(p) <= 0.25);
    const auto mom = posterior_moments(p, MeasureKind::New);
    REQUIRE(std::abs(mom.variance - (mom.second_moment - mom.mean * mom.mean)) < 1e-10);
    if (c >= 2) {
      REQUIRE(expected_amb_modified(p) >= e - 1e-15);
      const auto mm = posterior_moments(p, MeasureKind::Modified);
      REQUIRE(std::abs(mm.variance - (mm.second_moment - mm.mean * mm.mean)) < 1e-10);
      REQUIRE(mm.variance >= 0.0);
    }
  }
  CHECK(code_of([] { posterior_moments(DirichletParams({1.0, 1.0}, 1.0), MeasureKind::Old); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("analytics of an updated posterior equal analytics of summed parameters") {
  const auto prior = DirichletParams::symmetric(3, 0.5);
  const CountVector n{{4, 0, 9}, 2};
  const auto post = posterior_update(prior, n);
  const DirichletParams direct({4.5, 0.5, 9.5}, 2.5);
  CHECK(expected_amb(post) == expected_amb(direct));
  CHECK(var_amb_modified(post) == var_amb_modified(direct));
}
