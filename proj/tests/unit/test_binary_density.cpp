#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ambiq/binary_density.hpp"
#include "ambiq/error.hpp"
#include "ambiq/posterior_analytics.hpp"
#include "ambiq/posterior_sampling.hpp"
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

constexpr MeasureKind kBoth[] = {MeasureKind::New, MeasureKind::Modified};

std::vector<double> posterior_draws(const BinaryCounts& counts, double beta, MeasureKind measure,
                                    std::size_t n, std::uint64_t seed) {
  const auto post =
      posterior_update(DirichletParams::symmetric(2, beta), counts.to_count_vector());
  auto draws = sample_transformed(post, measure, n, seed);
  std::sort(draws.begin(), draws.end());
  return draws;
}

}  // namespace

TEST_CASE("level-set root") {
  for (double a : {0.2, 0.6, 0.9}) {
    CHECK(xi(a, a, MeasureKind::New) == doctest::Approx(0.0).scale(1.0));
    CHECK(xi(a, a, MeasureKind::Modified) == doctest::Approx(0.0).scale(1.0));
  }
  CHECK(xi(0.75, 0.5, MeasureKind::New) == doctest::Approx(0.5));
  CHECK(xi(0.6, 2 * 0.6 - 1 - 1e-13, MeasureKind::New) == doctest::Approx(0.5));
  CHECK(code_of([] { xi(0.75, 0.2, MeasureKind::New); }) == ErrorCode::DomainError);
  CHECK(code_of([] { xi(0.5, 0.2, MeasureKind::Old); }) == ErrorCode::InvalidArgument);

  // the root really lies on the level set
  for (double a : {0.1, 0.4, 0.7}) {
    for (double frac : {0.1, 0.5, 0.9}) {
      const double g = lower_bound(a, MeasureKind::New);
      const double u = g + frac * (a - g);
      const double x = xi(a, u, MeasureKind::New);
      const double qp = (1 - u) * x, qm = (1 - u) * (1 - x);
      CHECK(1.0 - (qp * qp + qm * qm) / (1.0 - u) == doctest::Approx(a).epsilon(1e-12));
      const double y = xi(a, a * frac, MeasureKind::Modified);
      const double mp = (1 - a * frac) * y, mm = (1 - a * frac) * (1 - y);
      const double amb = 1.0 - (mp * mp + mm * mm) / (1.0 - a * frac);
      CHECK(2.0 * amb - a * frac == doctest::Approx(a).epsilon(1e-12));
    }
  }
}

TEST_CASE("root derivative") {
  CHECK(xi_partial_a(0.0, 0.0, MeasureKind::Modified) == doctest::Approx(0.25));
  const double h = 1e-6;
  for (auto m : kBoth) {
    for (double a : {0.15, 0.4, 0.65, 0.85}) {
      const double g = lower_bound(a, m);
      for (double frac : {0.2, 0.5, 0.8}) {
        const double u = g + frac * (a - g);
        const double fd = (xi(a + h, u, m) - xi(a - h, u, m)) / (2 * h);
        const double d = xi_partial_a(a, u, m);
        CHECK(d > 0.0);
        CHECK(std::abs(fd - d) < 1e-6 * (1.0 + std::abs(d)));
        if (m == MeasureKind::New) CHECK(d >= 1.0 / (4.0 * std::sqrt((1 - a) * (1 - u))));
      }
    }
  }
  CHECK(code_of([] { xi_partial_a(1.0, 1.0, MeasureKind::Modified); }) == ErrorCode::SingularPoint);
}

TEST_CASE("lower integration bound") {
  CHECK(lower_bound(0.3, MeasureKind::New) == 0.0);
  CHECK(lower_bound(0.75, MeasureKind::New) == 0.5);
  CHECK(lower_bound(0.3, MeasureKind::Modified) == 0.0);
  CHECK(lower_bound(0.95, MeasureKind::Modified) == 0.0);
}

TEST_CASE("argument checks") {
  const BinaryPosterior post({2, 2, 1}, 1.0, MeasureKind::New);
  CHECK(code_of([&] { post.density(0.0); }) == ErrorCode::DomainError);
  CHECK(code_of([&] { post.density(1.0); }) == ErrorCode::DomainError);
  CHECK(code_of([&] { post.cdf(1.5); }) == ErrorCode::DomainError);
  CHECK(post.cdf(0.0) == 0.0);
  CHECK(post.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(code_of([] { BinaryPosterior({1, 1, 1}, 1.0, MeasureKind::Old); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { BinaryPosterior({1, 1, 1}, 0.0, MeasureKind::New); }) ==
        ErrorCode::InvalidArgument);
  const std::vector<double> bad = {0.5, 0.2};
  CHECK(code_of([&] { post.cdf_on_grid(bad); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cdf matches the level-set oracle") {
  const BinaryCounts cases[] = {{2, 2, 1}, {4, 1, 0}, {0, 0, 3}, {7, 2, 2}};
  for (const auto& c : cases) {
    for (auto m : kBoth) {
      const BinaryPosterior post(c, 1.0, m);
      for (double a : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        const double ref = oracle::binary_cdf(static_cast<int>(c.n_plus), static_cast<int>(c.n_minus),
                                              static_cast<int>(c.n_cs), 1, m == MeasureKind::Modified, a);
        INFO(to_string(m) << " (" << c.n_plus << "," << c.n_minus << "," << c.n_cs << ") a=" << a);
        CHECK(std::abs(post.cdf(a) - ref) < 1e-5);
      }
    }
  }
}

TEST_CASE("normalization over random counts and priors") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> total(0, 30);
  for (int i = 0; i < 8; ++i) {
    const int n = total(gen);
    std::uniform_int_distribution<int> split(0, n);
    int x = split(gen), y = split(gen);
    if (x > y) std::swap(x, y);
    const BinaryCounts c{static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y - x),
                         static_cast<std::uint64_t>(n - y)};
    for (double beta : {0.5, 1.0, 2.0}) {
      for (auto m : kBoth) {
        const BinaryPosterior post(c, beta, m);
        INFO(to_string(m) << " (" << c.n_plus << "," << c.n_minus << "," << c.n_cs << ") beta=" << beta);
        CHECK(std::abs(post.normalization() - 1.0) < 1e-3);
        CHECK_FALSE(post.depth_exceeded());
      }
    }
  }
}

TEST_CASE("posterior mean matches the closed form") {
  const BinaryCounts cases[] = {{2, 2, 1}, {10, 1, 1}, {0, 0, 0}, {3, 7, 0}};
  for (const auto& c : cases) {
    const auto params = posterior_update(DirichletParams::symmetric(2, 1.0), c.to_count_vector());
    CHECK(std::abs(BinaryPosterior(c, 1.0, MeasureKind::New).mean() - expected_amb(params)) < 1e-3);
    CHECK(std::abs(BinaryPosterior(c, 1.0, MeasureKind::Modified).mean() -
                   expected_amb_modified(params)) < 1e-3);
  }
}

TEST_CASE("endpoint behaviour near one") {
  const BinaryCounts c{2, 2, 1};
  const BinaryPosterior plain(c, 1.0, MeasureKind::New);
  const double d9 = plain.density(0.9);
  double previous = d9;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const double d = plain.density(1.0 - eps);
    CHECK(d < previous);
    previous = d;
  }
  CHECK(previous < 1e-6 * d9);

  const BinaryPosterior mod(c, 1.0, MeasureKind::Modified);
  const double eps = 1e-5;
  const double ratio = mod.density(1.0 - eps) / mod.density(1.0 - 4.0 * eps);
  CHECK(std::abs(ratio - 2.0) < 0.2);
}

TEST_CASE("density is continuous at the kink") {
  const BinaryPosterior post({3, 1, 1}, 1.0, MeasureKind::New);
  const double mid = post.density(0.5);
  CHECK(std::abs(post.density(0.5 - 1e-7) - mid) < 1e-4 * (1.0 + mid));
  CHECK(std::abs(post.density(0.5 + 1e-7) - mid) < 1e-4 * (1.0 + mid));
  const auto grid = binary_density_grid(MeasureKind::New, 512);
  CHECK(std::find(grid.begin(), grid.end(), 0.5) != grid.end());
}

TEST_CASE("tabulation grid") {
  for (auto m : kBoth) {
    const auto grid = binary_density_grid(m, 512);
    REQUIRE(grid.size() == 512);
    CHECK(grid.front() == 1e-6);
    CHECK(grid.back() == 1.0 - 1e-6);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK(std::adjacent_find(grid.begin(), grid.end()) == grid.end());
  }
  CHECK(code_of([] { binary_density_grid(MeasureKind::New, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cdf on a 512-point grid is monotone") {
  for (auto m : kBoth) {
    const BinaryPosterior post({5, 3, 2}, 1.0, m);
    auto grid = binary_density_grid(m, 512);
    grid.insert(grid.begin(), 0.0);
    grid.push_back(1.0);
    const auto cdf = post.cdf_on_grid(grid);
    CHECK(cdf.front() == 0.0);
    CHECK(std::is_sorted(cdf.begin(), cdf.end()));
    CHECK(std::abs(cdf.back() - 1.0) < 1e-3);
    CHECK(std::abs(cdf[256] - post.cdf(grid[256])) < 1e-6);
  }
}

TEST_CASE("agreement with Monte Carlo draws") {
  for (auto m : kBoth) {
    const BinaryCounts c{4, 1, 0};
    const auto draws = posterior_draws(c, 1.0, m, 100000, 50);
    const BinaryPosterior post(c, 1.0, m);
    std::vector<double> grid(201);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) / 200.0;
    const auto cdf = post.cdf_on_grid(grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::abs(cdf[i] - oracle::empirical_cdf(draws, grid[i])));
    INFO(to_string(m));
    CHECK(worst < 0.01);

    // bisection for the median
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (post.cdf(mid) < 0.5 ? lo : hi) = mid;
    }
    CHECK(std::abs(0.5 * (lo + hi) - sorted_quantile(draws, 0.5)) < 0.01);
  }
}

TEST_CASE("free functions match the class") {
  const BinaryCounts c{1, 3, 2};
  const BinaryPosterior post(c, 2.0, MeasureKind::Modified);
  CHECK(posterior_density_binary(0.4, c, 2.0, MeasureKind::Modified) == post.density(0.4));
  CHECK(posterior_cdf_binary(0.4, c, 2.0, MeasureKind::Modified) == post.cdf(0.4));
}
