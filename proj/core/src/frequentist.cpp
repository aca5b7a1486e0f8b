#include "ambiq/frequentist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "ambiq/error.hpp"
#include "ambiq/format.hpp"
#include "ambiq/measures.hpp"
#include "ambiq/posterior_analytics.hpp"
#include "ambiq/posterior_sampling.hpp"
#include "ambiq/special_functions.hpp"
#include "parallel.hpp"

namespace ambiq {

namespace {

void enumerate_compositions(std::vector<std::uint64_t>& parts, std::size_t index,
                            std::uint64_t remaining,
                            const std::function<void(const std::vector<std::uint64_t>&)>& visit) {
  if (index + 1 == parts.size()) {
    parts[index] = remaining;
    visit(parts);
    return;
  }
  for (std::uint64_t k = 0; k <= remaining; ++k) {
    parts[index] = k;
    enumerate_compositions(parts, index + 1, remaining - k, visit);
  }
}

bool plugin_has_closed_form(MeasureKind measure) { return measure == MeasureKind::New; }

bool enumeration_allowed(const ProbabilityVector& q, std::uint64_t n) {
  return n <= kMaxEnumerationDraws && q.categories() + 1 <= kMaxEnumerationCategories;
}

}  // namespace

double plugin_estimate(const CountVector& counts, MeasureKind measure) {
  return ambiguity(counts.frequencies(), measure);
}

double expected_plugin(const ProbabilityVector& q, std::uint64_t n) {
  if (n == 0) fail(ErrorCode::EmptySample, "expected plug-in needs n >= 1");
  const double cs = q.cs();
  if (cs >= 1.0 - kDegenerateCsMargin) return 1.0;
  const double dn = static_cast<double>(n);
  const double solvable = 1.0 - cs;
  const double reach = 1.0 - std::pow(cs, dn);  // 1 - q_cs^n
  double squares = 0.0;
  for (double v : q.proper()) squares += v * v;
  return (1.0 - reach / dn) - (1.0 / solvable - reach / (dn * solvable * solvable)) * squares;
}

double bias_plugin(const ProbabilityVector& q, std::uint64_t n) {
  if (n == 0) fail(ErrorCode::EmptySample, "plug-in bias needs n >= 1");
  const double cs = q.cs();
  if (cs >= 1.0 - kDegenerateCsMargin) return 0.0;
  // Factored form; the difference of the two expectations cancels badly.
  const double dn = static_cast<double>(n);
  const double solvable = 1.0 - cs;
  double squares = 0.0;
  for (double v : q.proper()) squares += v * v;
  const double spread = std::max(0.0, 1.0 - squares / (solvable * solvable));
  return -(1.0 - std::pow(cs, dn)) / dn * spread;
}

double exhaustive_expected_estimator(const ProbabilityVector& q, unsigned n,
                                     const CountEstimator& estimator) {
  if (n == 0) fail(ErrorCode::EmptySample, "enumeration needs n >= 1");
  if (!enumeration_allowed(q, n))
    fail(ErrorCode::TooLarge, "enumeration is capped at n <= 12 and C + 1 <= 4");
  std::vector<double> probs(q.proper().begin(), q.proper().end());
  probs.push_back(q.cs());
  const double log_n_factorial = ln_gamma(static_cast<double>(n) + 1.0);
  std::vector<std::uint64_t> parts(probs.size(), 0);
  double expectation = 0.0;
  enumerate_compositions(parts, 0, n, [&](const std::vector<std::uint64_t>& c) {
    double log_pmf = log_n_factorial;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] == 0) continue;
      if (probs[k] == 0.0) return;
      const double ck = static_cast<double>(c[k]);
      log_pmf += ck * std::log(probs[k]) - ln_gamma(ck + 1.0);
    }
    CountVector counts{std::vector<std::uint64_t>(c.begin(), c.end() - 1), c.back()};
    expectation += std::exp(log_pmf) * estimator(counts);
  });
  return expectation;
}

CountVector sample_multinomial(Rng& rng, const ProbabilityVector& q, std::uint64_t n) {
  std::vector<double> cumulative;
  cumulative.reserve(q.categories() + 1);
  double running = 0.0;
  for (double v : q.proper()) cumulative.push_back(running += v);
  cumulative.push_back(running += q.cs());
  CountVector counts{std::vector<std::uint64_t>(q.categories(), 0), 0};
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    // Skip zero-probability categories sitting at the boundary.
    auto k = static_cast<std::size_t>(std::distance(cumulative.begin(), it));
    if (k >= cumulative.size()) k = cumulative.size() - 1;
    if (k < q.categories())
      ++counts.proper[k];
    else
      ++counts.cs;
  }
  return counts;
}

BayesPointEstimates bayes_point_estimates(const CountVector& counts, double prior_beta,
                                          MeasureKind measure, std::uint64_t seed,
                                          std::size_t mode_samples) {
  if (!(prior_beta > 0.0)) fail(ErrorCode::InvalidArgument, "prior beta must be > 0");
  require_supported(measure, counts.categories());
  const auto posterior =
      posterior_update(DirichletParams::symmetric(counts.categories(), prior_beta), counts);
  const auto draws = sample_transformed(posterior, measure, mode_samples, seed);
  const auto summary = summarize(draws, 0.95);
  BayesPointEstimates est;
  est.posterior_mode = summary.mode;
  est.posterior_mean = measure == MeasureKind::Old ? summary.mean
                                                   : posterior_moments(posterior, measure).mean;
  return est;
}

std::string EstimatorSpec::label() const {
  switch (kind) {
    case Kind::Plugin: return "plugin";
    case Kind::BayesMean: return "bayes_mean(" + format_double(beta) + ")";
    case Kind::BayesMode: return "bayes_mode(" + format_double(beta) + ")";
  }
  return "plugin";
}

EstimatorSpec EstimatorSpec::parse(std::string_view text) {
  if (text == "plugin") return {Kind::Plugin, 1.0};
  auto parse_beta = [&](std::string_view digits) {
    double beta = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), beta);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || !(beta > 0.0))
      fail(ErrorCode::InvalidArgument, "bad prior beta in estimator '" + std::string(text) + "'");
    return beta;
  };
  for (const auto& [prefix, kind] :
       {std::pair<std::string_view, Kind>{"bayes_mean", Kind::BayesMean},
        {"bayes_mode", Kind::BayesMode}, {"mean", Kind::BayesMean}, {"mode", Kind::BayesMode}}) {
    if (!text.starts_with(prefix)) continue;
    auto rest = text.substr(prefix.size());
    if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')')
      return {kind, parse_beta(rest.substr(1, rest.size() - 2))};
    if (rest.size() >= 2 && rest.front() == ':') return {kind, parse_beta(rest.substr(1))};
  }
  fail(ErrorCode::InvalidArgument, "unknown estimator '" + std::string(text) +
                                       "' (plugin, bayes_mean(b), bayes_mode(b))");
}

const BiasPoint& BiasSeries::at(std::string_view estimator, std::uint64_t n) const {
  for (const auto& p : points) {
    if (p.n == n && p.estimator == estimator) return p;
  }
  fail(ErrorCode::MissingField,
       "no bias point for " + std::string(estimator) + " at n = " + std::to_string(n));
}

BiasSeries bias_curve(const ProbabilityVector& q, std::span<const std::uint64_t> n_values,
                      const BiasCurveConfig& config, std::uint64_t seed) {
  if (n_values.empty()) fail(ErrorCode::InvalidArgument, "bias curve needs at least one n");
  if (config.estimators.empty()) fail(ErrorCode::InvalidArgument, "no estimators requested");
  if (config.mc_repeats < 2) fail(ErrorCode::InvalidArgument, "mc_repeats must be >= 2");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] == 0 || (i > 0 && n_values[i] <= n_values[i - 1]))
      fail(ErrorCode::InvalidArgument, "n values must be positive and strictly increasing");
  }
  require_supported(config.measure, q.categories());

  BiasSeries series;
  series.measure = config.measure;
  series.true_value = ambiguity(q, config.measure);
  series.n_values.assign(n_values.begin(), n_values.end());
  for (const auto& e : config.estimators) series.estimators.push_back(e.label());

  const std::size_t n_est = config.estimators.size();
  const std::size_t repeats = config.mc_repeats;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const std::uint64_t n = n_values[i];
    const std::uint64_t n_seed = derive_stream_seed(seed, i);

    // Common random numbers: every estimator sees the same simulated counts.
    bool need_mc = false;
    for (const auto& e : config.estimators) {
      if (e.kind != EstimatorSpec::Kind::Plugin) need_mc = true;
      else if (!plugin_has_closed_form(config.measure) && !enumeration_allowed(q, n)) need_mc = true;
    }
    std::vector<double> values(need_mc ? repeats * n_est : 0);
    if (need_mc) {
      detail::parallel_for(repeats, [&](std::size_t r) {
        Rng rng(derive_stream_seed(n_seed, 2 * r));
        const auto counts = sample_multinomial(rng, q, n);
        const std::uint64_t mode_seed = derive_stream_seed(n_seed, 2 * r + 1);
        for (std::size_t j = 0; j < n_est; ++j) {
          const auto& e = config.estimators[j];
          double v = 0.0;
          if (e.kind == EstimatorSpec::Kind::Plugin) {
            v = plugin_estimate(counts, config.measure);
          } else {
            const auto est = bayes_point_estimates(counts, e.beta, config.measure,
                                                   derive_stream_seed(mode_seed, j),
                                                   config.mode_samples);
            v = e.kind == EstimatorSpec::Kind::BayesMean ? est.posterior_mean : est.posterior_mode;
          }
          values[r * n_est + j] = v;
        }
      });
    }

    for (std::size_t j = 0; j < n_est; ++j) {
      const auto& e = config.estimators[j];
      BiasPoint point;
      point.n = n;
      point.estimator = series.estimators[j];
      if (e.kind == EstimatorSpec::Kind::Plugin && plugin_has_closed_form(config.measure)) {
        point.bias = bias_plugin(q, n);
        point.exact = true;
      } else if (e.kind == EstimatorSpec::Kind::Plugin && enumeration_allowed(q, n)) {
        const auto measure = config.measure;
        point.bias = exhaustive_expected_estimator(
                         q, static_cast<unsigned>(n),
                         [measure](const CountVector& c) { return plugin_estimate(c, measure); }) -
                     series.true_value;
        point.exact = true;
      } else {
        double sum = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) sum += values[r * n_est + j];
        const double mean = sum / static_cast<double>(repeats);
        double ss = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) {
          const double dv = values[r * n_est + j] - mean;
          ss += dv * dv;
        }
        const double sd = std::sqrt(ss / static_cast<double>(repeats - 1));
        point.bias = mean - series.true_value;
        point.std_error = sd / std::sqrt(static_cast<double>(repeats));
      }
      series.points.push_back(std::move(point));
    }
  }
  return series;
}

}  // namespace ambiq
