#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ambiq/error.hpp"
#include "ambiq/frequentist.hpp"
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

ProbabilityVector random_q(std::mt19937_64& gen, std::size_t c) {
  return ProbabilityVector::from_simplex(oracle::random_simplex(gen, c + 1));
}

// Bias written through the pieces of its derivation.
double bias_reference(const ProbabilityVector& q, std::uint64_t n) {
  const double rest = 1.0 - q.cs();
  double sq = 0.0;
  for (double v : q.proper()) sq += v * v;
  const double nn = static_cast<double>(n);
  return -(1.0 - std::pow(q.cs(), nn)) / nn * (1.0 - sq / (rest * rest));
}

// Plug-in of the New measure straight from integer counts.
double plugin_from_ints(const std::vector<int>& counts) {
  const int cs = counts.back();
  const int n = std::accumulate(counts.begin(), counts.end(), 0);
  if (cs == n) return 1.0;
  double sq = 0.0;
  for (std::size_t k = 0; k + 1 < counts.size(); ++k) sq += double(counts[k]) * counts[k];
  return 1.0 - sq / (double(n) * (n - cs));
}

}  // namespace

TEST_CASE("plug-in examples") {
  CHECK(plugin_estimate(CountVector{{0, 0}, 7}, MeasureKind::New) == 1.0);
  CHECK(plugin_estimate(CountVector{{9, 1}, 0}, MeasureKind::New) == doctest::Approx(0.18));
  CHECK(plugin_estimate(CountVector{{5, 5}, 10}, MeasureKind::New) == doctest::Approx(0.75));
  CHECK(code_of([] { plugin_estimate(CountVector{{0, 0}, 0}, MeasureKind::New); }) ==
        ErrorCode::EmptySample);
  CHECK(code_of([] { plugin_estimate(CountVector{{3}, 0}, MeasureKind::Modified); }) ==
        ErrorCode::SingleCategoryUnsupported);
}

TEST_CASE("plug-in equals the measure of empirical frequencies") {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> count(0, 20);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t c = 2 + static_cast<std::size_t>(i % 5);
    CountVector n{std::vector<std::uint64_t>(c), static_cast<std::uint64_t>(count(gen))};
    for (auto& v : n.proper) v = static_cast<std::uint64_t>(count(gen));
    if (n.total() == 0) n.cs = 1;
    for (auto m : kAllMeasures) {
      REQUIRE(plugin_estimate(n, m) == ambiguity(n.frequencies(), m));
      CountVector shuffled = n;
      std::shuffle(shuffled.proper.begin(), shuffled.proper.end(), gen);
      REQUIRE(std::abs(plugin_estimate(shuffled, m) - plugin_estimate(n, m)) < 1e-14);
    }
    std::vector<int> ints(n.proper.begin(), n.proper.end());
    ints.push_back(static_cast<int>(n.cs));
    REQUIRE(std::abs(plugin_estimate(n, MeasureKind::New) - plugin_from_ints(ints)) < 1e-14);
  }
}

TEST_CASE("expected plug-in examples") {
  const ProbabilityVector point({1.0, 0.0}, 0.0);
  for (std::uint64_t n : {1u, 5u, 100u}) {
    CHECK(expected_plugin(point, n) == doctest::Approx(0.0).scale(1.0));
    CHECK(bias_plugin(point, n) == doctest::Approx(0.0).scale(1.0));
  }
  const ProbabilityVector half({0.5, 0.5}, 0.0);
  CHECK(expected_plugin(half, 2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(bias_plugin(half, 2) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(bias_plugin(half, 4) == doctest::Approx(-0.125).epsilon(1e-14));
  CHECK(expected_plugin(ProbabilityVector({0.0, 0.0}, 1.0), 3) == 1.0);
  CHECK(code_of([&] { expected_plugin(half, 0); }) == ErrorCode::EmptySample);

  std::mt19937_64 gen(2);
  for (int i = 0; i < 20; ++i) {
    const auto q = random_q(gen, 1 + i % 4);
    CHECK(std::abs(expected_plugin(q, 1000000) - ambiguity_new(q)) < 1e-5);
  }
}

TEST_CASE("bias matches its closed form and rises monotonically") {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 200; ++i) {
    const auto q = random_q(gen, 2 + i % 5);
    double previous = -1e300;
    for (std::uint64_t n = 1; n <= 101; ++n) {
      const double b = bias_plugin(q, n);
      REQUIRE(b < 0.0);
      REQUIRE(std::abs(b - bias_reference(q, n)) < 1e-12);
      REQUIRE(std::abs(b - (expected_plugin(q, n) - ambiguity_new(q))) < 1e-12);
      if (n > 1) REQUIRE(b > previous);
      previous = b;
    }
  }
}

TEST_CASE("one proper category leaves the plug-in unbiased") {
  std::mt19937_64 gen(6);
  for (int i = 0; i < 50; ++i) {
    const auto q = random_q(gen, 1);
    for (std::uint64_t n : {1u, 3u, 40u}) {
      CHECK(std::abs(bias_plugin(q, n)) < 1e-15);
      CHECK(std::abs(expected_plugin(q, n) - q.cs()) < 1e-12);
    }
  }
}

TEST_CASE("exhaustive enumeration") {
  const ProbabilityVector half({0.5, 0.5}, 0.0);
  const auto plugin = [](const CountVector& c) { return plugin_estimate(c, MeasureKind::New); };
  for (unsigned n = 1; n <= 8; ++n)
    CHECK(std::abs(exhaustive_expected_estimator(half, n, plugin) - expected_plugin(half, n)) < 1e-12);

  std::mt19937_64 gen(4);
  for (int i = 0; i < 20; ++i) {
    const auto q = random_q(gen, 1 + i % 3);
    const double total = exhaustive_expected_estimator(q, 12, [](const CountVector&) { return 1.0; });
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(exhaustive_expected_estimator(q, 5, [](const CountVector&) { return 0.37; }) ==
          doctest::Approx(0.37).epsilon(1e-13));
  }

  // the 20-point suite with independent enumeration as a second opinion
  for (int i = 0; i < 20; ++i) {
    const auto q = random_q(gen, 2);
    std::vector<double> probs(q.proper().begin(), q.proper().end());
    probs.push_back(q.cs());
    for (unsigned n = 1; n <= 8; ++n) {
      const double enumerated = exhaustive_expected_estimator(q, n, plugin);
      REQUIRE(std::abs(enumerated - expected_plugin(q, n)) < 1e-12);
      REQUIRE(std::abs(oracle::multinomial_expectation(probs, static_cast<int>(n), plugin_from_ints) -
                       enumerated) < 1e-12);
    }
  }

  CHECK(code_of([&] { exhaustive_expected_estimator(half, 13, plugin); }) == ErrorCode::TooLarge);
  const ProbabilityVector wide({0.25, 0.25, 0.25, 0.25}, 0.0);
  CHECK(code_of([&] { exhaustive_expected_estimator(wide, 2, plugin); }) == ErrorCode::TooLarge);
  CHECK(code_of([&] { exhaustive_expected_estimator(half, 0, plugin); }) == ErrorCode::EmptySample);
}

TEST_CASE("multinomial sampling") {
  const ProbabilityVector q({0.2, 0.5}, 0.3);
  Rng rng(5);
  double cs_sum = 0.0, first_sum = 0.0;
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    const auto c = sample_multinomial(rng, q, 10);
    REQUIRE(c.total() == 10);
    REQUIRE(c.categories() == 2);
    cs_sum += static_cast<double>(c.cs);
    first_sum += static_cast<double>(c.proper[0]);
  }
  const double cs_se = std::sqrt(10 * 0.3 * 0.7 / reps);
  CHECK(std::abs(cs_sum / reps - 3.0) < 4 * cs_se);
  const double first_se = std::sqrt(10 * 0.2 * 0.8 / reps);
  CHECK(std::abs(first_sum / reps - 2.0) < 4 * first_se);
}

TEST_CASE("Bayesian point estimates") {
  const CountVector none{{0, 0}, 0};
  const auto prior = bayes_point_estimates(none, 1.0, MeasureKind::New, 1);
  CHECK(prior.posterior_mean == expected_amb(DirichletParams::symmetric(2, 1.0)));

  const CountVector data{{6, 2}, 1};
  for (double beta : {0.5, 1.0, 3.0}) {
    const auto post = posterior_update(DirichletParams::symmetric(2, beta), data);
    CHECK(bayes_point_estimates(data, beta, MeasureKind::New, 2).posterior_mean == expected_amb(post));
    CHECK(bayes_point_estimates(data, beta, MeasureKind::Modified, 2).posterior_mean ==
          expected_amb_modified(post));
  }

  const CountVector heavy{{10000, 0}, 0};
  for (auto m : kAllMeasures) {
    const auto e = bayes_point_estimates(heavy, 1.0, m, 3);
    INFO(to_string(m));
    CHECK(e.posterior_mean < 0.02);
    CHECK(e.posterior_mode < 0.02);
  }

  const auto a = bayes_point_estimates(data, 1.0, MeasureKind::Old, 9);
  const auto b = bayes_point_estimates(data, 1.0, MeasureKind::Old, 9);
  CHECK(a.posterior_mean == b.posterior_mean);
  CHECK(a.posterior_mode == b.posterior_mode);
  CHECK(code_of([] { bayes_point_estimates(CountVector{{1}, 0}, 1.0, MeasureKind::Old, 0); }) ==
        ErrorCode::SingleCategoryUnsupported);
}

TEST_CASE("estimator labels") {
  CHECK(EstimatorSpec{}.label() == "plugin");
  CHECK(EstimatorSpec{EstimatorSpec::Kind::BayesMean, 1.0}.label() == "bayes_mean(1)");
  CHECK(EstimatorSpec{EstimatorSpec::Kind::BayesMode, 0.5}.label() == "bayes_mode(0.5)");
  for (const char* text : {"plugin", "bayes_mean(1)", "bayes_mode(0.25)"})
    CHECK(EstimatorSpec::parse(text).label() == text);
  CHECK(EstimatorSpec::parse("mean:0.5").label() == "bayes_mean(0.5)");
  CHECK(EstimatorSpec::parse("mode:2").label() == "bayes_mode(2)");
  CHECK(code_of([] { EstimatorSpec::parse("bayes_mean(-1)"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { EstimatorSpec::parse("median"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("bias curve") {
  const ProbabilityVector q({0.6, 0.3}, 0.1);
  const std::uint64_t ns[] = {1, 2, 5, 10, 50};
  BiasCurveConfig config;
  config.estimators = {EstimatorSpec{}, EstimatorSpec::parse("bayes_mean(1)"),
                       EstimatorSpec::parse("bayes_mode(1)")};
  config.mc_repeats = 100;
  config.mode_samples = 2000;
  const auto series = bias_curve(q, ns, config, 11);
  CHECK(series.true_value == ambiguity_new(q));
  CHECK(series.points.size() == 15);
  CHECK(series.estimators == std::vector<std::string>{"plugin", "bayes_mean(1)", "bayes_mode(1)"});
  CHECK(series.points[1].estimator == "bayes_mean(1)");
  CHECK(series.points[3].n == 2);
  for (std::uint64_t n : ns) {
    const auto& p = series.at("plugin", n);
    CHECK(p.exact);
    CHECK(p.std_error == 0.0);
    CHECK(p.bias == doctest::Approx(bias_plugin(q, n)).epsilon(1e-12));
    CHECK_FALSE(series.at("bayes_mean(1)", n).exact);
    CHECK(series.at("bayes_mean(1)", n).std_error > 0.0);
  }
  CHECK(code_of([&] { series.at("plugin", 3); }) == ErrorCode::MissingField);

  const auto again = bias_curve(q, ns, config, 11);
  for (std::size_t i = 0; i < series.points.size(); ++i)
    CHECK(again.points[i].bias == series.points[i].bias);

  const std::uint64_t unsorted[] = {5, 2};
  CHECK(code_of([&] { bias_curve(q, unsorted, config, 1); }) == ErrorCode::InvalidArgument);
  const std::uint64_t zero[] = {0, 2};
  CHECK(code_of([&] { bias_curve(q, zero, config, 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { bias_curve(q, std::span<const std::uint64_t>{}, config, 1); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("plug-in bias of other measures comes from enumeration") {
  const ProbabilityVector q({0.7, 0.2}, 0.1);
  const std::uint64_t ns[] = {3, 8};
  BiasCurveConfig config;
  config.measure = MeasureKind::Modified;
  config.estimators = {EstimatorSpec{}};
  const auto series = bias_curve(q, ns, config, 4);
  const auto plugin = [](const CountVector& c) { return plugin_estimate(c, MeasureKind::Modified); };
  for (std::uint64_t n : ns) {
    const auto& p = series.at("plugin", n);
    CHECK(p.exact);
    CHECK(p.bias == doctest::Approx(exhaustive_expected_estimator(q, static_cast<unsigned>(n), plugin) -
                                    ambiguity_modified(q))
                        .epsilon(1e-12));
  }
  const std::uint64_t large[] = {40};
  const auto mc = bias_curve(q, large, config, 4);
  CHECK_FALSE(mc.points[0].exact);
  CHECK(mc.points[0].std_error > 0.0);
}
