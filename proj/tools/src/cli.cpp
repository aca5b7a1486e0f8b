#include "ambiq_cli/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "ambiq/binary_density.hpp"
#include "ambiq/dataset_io.hpp"
#include "ambiq/error.hpp"
#include "ambiq/format.hpp"
#include "ambiq/frequentist.hpp"
#include "ambiq/measures.hpp"
#include "ambiq/posterior_analytics.hpp"
#include "ambiq/posterior_sampling.hpp"
#include "ambiq/rng.hpp"
#include "ambiq/version.hpp"

namespace ambiq::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kMeasureDecimals = 6;

// ---------------------------------------------------------------------------
// option parsing helpers

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_reals(const std::string& text, const char* flag) {
  std::vector<double> out;
  for (const auto& item : split(text)) {
    try {
      out.push_back(parse_double(item));
    } catch (const Error&) {
      fail(ErrorCode::InvalidArgument,
           std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) fail(ErrorCode::InvalidArgument, std::string(flag) + " is empty");
  return out;
}

std::uint64_t parse_unsigned(const std::string& text, const char* flag) {
  const auto t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    fail(ErrorCode::InvalidArgument,
         std::string(flag) + ": '" + text + "' is not a non-negative integer");
  return value;
}

std::vector<std::uint64_t> parse_counts(const std::string& text, const char* flag) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text)) out.push_back(parse_unsigned(item, flag));
  if (out.empty()) fail(ErrorCode::InvalidArgument, std::string(flag) + " is empty");
  return out;
}

std::vector<MeasureKind> parse_measures(const std::string& text) {
  std::vector<MeasureKind> out;
  for (const auto& item : split(text)) {
    const auto m = parse_measure(trim(item));
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) fail(ErrorCode::InvalidArgument, "--measures is empty");
  return out;
}

// "1,2,5" or "a:b" (every integer) or "a:b:step"
std::vector<std::uint64_t> parse_n_values(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_counts(text, "--n");
  const auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3)
    fail(ErrorCode::InvalidArgument, "--n range must be start:end[:step]");
  const auto lo = parse_unsigned(parts[0], "--n");
  const auto hi = parse_unsigned(parts[1], "--n");
  const auto step = parts.size() == 3 ? parse_unsigned(parts[2], "--n") : 1;
  if (lo == 0 || hi < lo || step == 0)
    fail(ErrorCode::InvalidArgument, "--n range needs 1 <= start <= end and step >= 1");
  std::vector<std::uint64_t> out;
  for (auto n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

// "lo:hi:count", linearly spaced
std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) fail(ErrorCode::InvalidArgument, "--beta-grid must be lo:hi:count");
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  const auto count = parse_unsigned(parts[2], "--beta-grid");
  if (count < 1 || !(hi >= lo)) fail(ErrorCode::InvalidArgument, "--beta-grid needs lo <= hi, count >= 1");
  std::vector<double> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(count == 1 ? lo
                             : lo + (hi - lo) * static_cast<double>(i) /
                                        static_cast<double>(count - 1));
  }
  return out;
}

void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    fail(ErrorCode::InvalidArgument, "prior beta must be a positive number");
}

// ---------------------------------------------------------------------------
// shared option groups

struct Common {
  bool json = false;
  std::string output;
};

struct SeedOption {
  std::optional<std::uint64_t> flag;

  std::uint64_t resolve() const {
    if (flag) return *flag;
    if (const char* env = std::getenv("AMBIQ_SEED"); env && *env)
      return parse_unsigned(env, "AMBIQ_SEED");
    return 0;
  }
};

struct ProbabilityInput {
  std::string q;
  std::optional<double> cs;
  std::string simplex;
  std::string counts;
  std::optional<std::uint64_t> cs_count;

  void add(CLI::App& app, bool allow_counts) {
    app.add_option("--q", q, "proper-category probabilities, comma separated");
    app.add_option("--cs", cs, "cs probability (with --q)");
    app.add_option("--simplex", simplex, "full simplex, cs last");
    if (allow_counts) {
      app.add_option("--counts", counts, "proper-category counts (plug-in frequencies)");
      app.add_option("--cs-count", cs_count, "cs count (with --counts)");
    }
  }

  bool from_counts() const { return !counts.empty(); }

  ProbabilityVector resolve() const {
    const int given = !q.empty() + !simplex.empty() + !counts.empty();
    if (given != 1)
      fail(ErrorCode::InvalidArgument, "give exactly one of --q, --simplex, --counts");
    if (!q.empty()) {
      return ProbabilityVector(parse_reals(q, "--q"), cs.value_or(0.0));
    }
    if (cs) fail(ErrorCode::InvalidArgument, "--cs only applies to --q");
    if (!simplex.empty()) {
      const auto values = parse_reals(simplex, "--simplex");
      if (values.size() < 2)
        fail(ErrorCode::InvalidArgument, "--simplex needs at least one proper entry and cs");
      return ProbabilityVector::from_simplex(values);
    }
    return counts_vector().frequencies();
  }

  CountVector counts_vector() const {
    return CountVector{parse_counts(counts, "--counts"), cs_count.value_or(0)};
  }
};

struct SchemaInput {
  std::string labels;
  std::string cs_label;
  std::string schema_file;

  void add(CLI::App& app) {
    app.add_option("--labels", labels, "proper labels, comma separated");
    app.add_option("--cs-label", cs_label, "label of the cs response");
    app.add_option("--schema", schema_file, "JSON file {\"labels\": [...], \"cs_label\": ...}");
  }

  CategorySchema resolve() const {
    if (!schema_file.empty()) {
      if (!labels.empty() || !cs_label.empty())
        fail(ErrorCode::InvalidArgument, "--schema excludes --labels/--cs-label");
      std::ifstream in(schema_file);
      if (!in) fail(ErrorCode::IoError, "cannot open '" + schema_file + "'");
      Json doc;
      try {
        doc = Json::parse(in);
        return CategorySchema(doc.at("labels").get<std::vector<std::string>>(),
                              doc.at("cs_label").get<std::string>());
      } catch (const Json::exception& e) {
        fail(ErrorCode::InvalidArgument, "bad schema file: " + std::string(e.what()));
      }
    }
    if (labels.empty() || cs_label.empty())
      fail(ErrorCode::InvalidArgument, "schema needs --labels and --cs-label (or --schema)");
    std::vector<std::string> names;
    for (const auto& l : split(labels)) names.push_back(trim(l));
    return CategorySchema(names, cs_label);
  }
};

struct DatasetInput {
  std::string input;
  std::string format;
  bool skip_unknown = false;

  void add(CLI::App& app, bool required) {
    auto* opt = app.add_option("--input", input, "annotation records (.csv or .jsonl)");
    if (required) opt->required();
    app.add_option("--format", format, "csv or jsonl (default: from extension)");
    app.add_flag("--skip-unknown", skip_unknown, "drop rows with unknown labels");
  }

  Dataset load(const CategorySchema& schema) const {
    const auto fmt = format.empty() ? record_format_for(input) : parse_record_format(format);
    return load_records(input, fmt, schema, LoadOptions{skip_unknown});
  }
};

Json metadata(std::string_view command) {
  Json meta;
  meta["command"] = command;
  meta["version"] = kVersion;
  return meta;
}

Json metadata(std::string_view command, std::uint64_t seed) {
  Json meta = metadata(command);
  meta["seed"] = seed;
  meta["rng"] = kRngName;
  return meta;
}

Json real_array(std::span<const double> values) {
  Json arr = Json::array();
  for (double v : values) arr.push_back(v);
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

void emit(const Common& common, std::ostream& out, const std::string& text) {
  if (common.output.empty())
    out << text;
  else
    write_text(common.output, text);
}

void add_common(CLI::App& app, Common& common) {
  app.add_flag("--json", common.json, "JSON output; errors as single-line JSON");
  app.add_option("-o,--output", common.output, "write output to a file instead of stdout");
}

// ---------------------------------------------------------------------------
// commands

struct MeasureCmd {
  Common common;
  ProbabilityInput input;
  std::string measures;

  void add(CLI::App& app) {
    add_common(app, common);
    input.add(app, true);
    app.add_option("--measures", measures, "subset of new,modified,old (default: all defined)");
  }

  void execute(std::ostream& out) const {
    const auto q = input.resolve();
    std::vector<MeasureKind> kinds;
    if (measures.empty()) {
      kinds.push_back(MeasureKind::New);
      if (q.categories() >= 2) {
        kinds.push_back(MeasureKind::Old);
        kinds.push_back(MeasureKind::Modified);
      }
    } else {
      kinds = parse_measures(measures);
    }
    std::vector<std::pair<MeasureKind, double>> values;
    for (MeasureKind m : kinds) values.emplace_back(m, ambiguity(q, m));

    std::ostringstream text;
    if (common.json) {
      Json doc = metadata("measure");
      doc["source"] = input.from_counts() ? "counts" : "probabilities";
      doc["proper"] = real_array(q.proper());
      doc["cs"] = q.cs();
      Json vals;
      for (const auto& [m, v] : values) vals[std::string(to_string(m))] = v;
      doc["values"] = std::move(vals);
      text << doc.dump(2) << '\n';
    } else {
      text << "measure   value\n";
      for (const auto& [m, v] : values) {
        std::string name(to_string(m));
        name.resize(10, ' ');
        text << name << format_fixed(v, kMeasureDecimals) << '\n';
      }
    }
    emit(common, out, text.str());
  }
};

struct PosteriorCmd {
  Common common;
  SeedOption seed;
  std::string counts;
  std::uint64_t cs_count = 0;
  double beta = 1.0;
  std::string measure = "new";
  std::size_t samples = 100000;
  double mass = 0.95;
  std::string density;
  std::size_t density_points = 512;
  std::size_t bins = 100;
  std::size_t repeats = 20;
  std::size_t repeat_samples = 100000;

  void add(CLI::App& app) {
    add_common(app, common);
    app.add_option("--seed", seed.flag, "RNG seed (default: $AMBIQ_SEED or 0)");
    app.add_option("--counts", counts, "proper-category counts")->required();
    app.add_option("--cs-count", cs_count, "cs count");
    app.add_option("--beta", beta, "symmetric prior hyperparameter");
    app.add_option("--measure", measure, "new, modified or old");
    app.add_option("--samples", samples, "Monte-Carlo draws for the summary");
    app.add_option("--mass", mass, "credible interval mass");
    app.add_option("--density", density, "write a density curve CSV to this path");
    app.add_option("--density-points", density_points, "grid size of an analytic curve");
    app.add_option("--bins", bins, "histogram bins of a Monte-Carlo curve");
    app.add_option("--repeats", repeats, "independent histograms of a Monte-Carlo curve");
    app.add_option("--repeat-samples", repeat_samples, "draws per histogram");
  }

  void execute(std::ostream& out) const {
    require_positive_beta(beta);
    const std::uint64_t s = seed.resolve();
    const CountVector observed{parse_counts(counts, "--counts"), cs_count};
    const MeasureKind m = parse_measure(measure);
    require_supported(m, observed.categories());
    const auto prior = DirichletParams::symmetric(observed.categories(), beta);
    const auto post = posterior_update(prior, observed);

    Json doc = metadata("posterior", s);
    doc["measure"] = to_string(m);
    doc["prior_beta"] = beta;
    Json c;
    c["proper"] = observed.proper;
    c["cs"] = observed.cs;
    doc["counts"] = std::move(c);
    Json alpha;
    alpha["proper"] = real_array(post.proper());
    alpha["cs"] = post.cs();
    doc["posterior_alpha"] = std::move(alpha);

    if (m == MeasureKind::Old) {
      doc["closed_form"] = nullptr;
      doc["method"] = "monte_carlo";
    } else {
      const auto moments = posterior_moments(post, m);
      Json cf;
      cf["mean"] = moments.mean;
      cf["sd"] = std::sqrt(moments.variance);
      doc["closed_form"] = std::move(cf);
      doc["method"] = "closed_form+monte_carlo";
    }

    const auto draws = sample_transformed(post, m, samples, s);
    const auto summary = summarize(draws, mass);
    Json mc;
    mc["samples"] = summary.sample_count;
    mc["mean"] = summary.mean;
    mc["sd"] = summary.sd;
    mc["mode"] = summary.mode;
    Json ci;
    ci["mass"] = summary.credible_interval.mass;
    ci["lo"] = summary.credible_interval.lo;
    ci["hi"] = summary.credible_interval.hi;
    mc["credible_interval"] = std::move(ci);
    Json qs = Json::array();
    for (const auto& [level, value] : summary.quantiles) qs.push_back({level, value});
    mc["quantiles"] = std::move(qs);
    doc["monte_carlo"] = std::move(mc);

    if (!density.empty()) doc["density"] = write_density(post, observed, m, s);
    emit(common, out, doc.dump(2) + "\n");
  }

  Json write_density(const DirichletParams& post, const CountVector& observed, MeasureKind m,
                     std::uint64_t s) const {
    Json info;
    info["path"] = density;
    std::ostringstream csv;
    if (observed.categories() == 2 && m != MeasureKind::Old) {
      const BinaryCounts bc{observed.proper[0], observed.proper[1], observed.cs};
      const BinaryPosterior bp(bc, beta, m);
      const auto grid = binary_density_grid(m, density_points);
      const auto cdf = bp.cdf_on_grid(grid);
      csv << "a,density,cdf\n";
      for (std::size_t i = 0; i < grid.size(); ++i) {
        csv << format_double(grid[i]) << ',' << format_double(bp.density(grid[i])) << ','
            << format_double(cdf[i]) << '\n';
      }
      info["method"] = "analytic";
      info["points"] = grid.size();
      info["normalization"] = bp.normalization();
      info["quadrature_depth_exceeded"] = bp.depth_exceeded();
    } else {
      DensityOptions opts;
      opts.bins = bins;
      opts.repeats = repeats;
      opts.samples_per_repeat = repeat_samples;
      // stream 1 keeps the band independent of the summary draws
      const auto est = density_with_uncertainty(post, m, derive_stream_seed(s, 1), opts);
      csv << "bin_lo,bin_hi,density_median,density_q25,density_q75\n";
      for (std::size_t b = 0; b < est.median_density.size(); ++b) {
        csv << format_double(est.bin_edges[b]) << ',' << format_double(est.bin_edges[b + 1])
            << ',' << format_double(est.median_density[b]) << ','
            << format_double(est.iqr_lo[b]) << ',' << format_double(est.iqr_hi[b]) << '\n';
      }
      info["method"] = "monte_carlo_histogram";
      info["bins"] = bins;
      info["repeats"] = repeats;
      info["samples_per_repeat"] = repeat_samples;
    }
    write_text(density, csv.str());
    return info;
  }
};

struct BiasCurveCmd {
  Common common;
  SeedOption seed;
  ProbabilityInput input;
  std::string n_values = "1,2,5,10,20,50,100,200,500";
  std::string estimators = "plugin,bayes_mean(1),bayes_mode(1)";
  std::string measure = "new";
  std::size_t mc_repeats = 200;
  std::size_t mode_samples = kDefaultModeSamples;

  void add(CLI::App& app) {
    add_common(app, common);
    app.add_option("--seed", seed.flag, "RNG seed (default: $AMBIQ_SEED or 0)");
    input.add(app, false);
    app.add_option("--n", n_values, "sample sizes: list, start:end or start:end:step");
    app.add_option("--estimators", estimators,
                   "plugin, bayes_mean(b), bayes_mode(b); comma separated");
    app.add_option("--measure", measure, "new, modified or old");
    app.add_option("--mc-repeats", mc_repeats, "simulated count vectors per n");
    app.add_option("--mode-samples", mode_samples, "posterior draws per mode estimate");
  }

  // splits on commas outside parentheses
  static std::vector<std::string> split_estimators(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : text) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        out.push_back(trim(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    out.push_back(trim(cur));
    return out;
  }

  void execute(std::ostream& out) const {
    const std::uint64_t s = seed.resolve();
    const auto q = input.resolve();
    BiasCurveConfig config;
    config.measure = parse_measure(measure);
    config.mc_repeats = mc_repeats;
    config.mode_samples = mode_samples;
    for (const auto& e : split_estimators(estimators))
      config.estimators.push_back(EstimatorSpec::parse(e));
    const auto ns = parse_n_values(n_values);
    const auto series = bias_curve(q, ns, config, s);

    std::ostringstream text;
    if (common.json) {
      Json doc = metadata("bias-curve", s);
      doc["measure"] = to_string(series.measure);
      doc["proper"] = real_array(q.proper());
      doc["cs"] = q.cs();
      doc["true_value"] = series.true_value;
      doc["mc_repeats"] = mc_repeats;
      Json pts = Json::array();
      for (const auto& p : series.points) {
        Json row;
        row["n"] = p.n;
        row["estimator"] = p.estimator;
        row["bias"] = p.bias;
        row["stderr"] = p.std_error;
        row["exact"] = p.exact;
        pts.push_back(std::move(row));
      }
      doc["points"] = std::move(pts);
      text << doc.dump(2) << '\n';
    } else {
      text << "n,estimator,bias,stderr\n";
      for (const auto& p : series.points) {
        text << p.n << ',' << p.estimator << ',' << format_double(p.bias) << ','
             << format_double(p.std_error) << '\n';
      }
    }
    emit(common, out, text.str());
  }
};

struct PriorExploreCmd {
  Common common;
  SeedOption seed;
  std::size_t categories = 0;
  std::string betas;
  std::string beta_grid;
  std::string measure = "new";
  std::size_t samples = 100000;
  std::string density;
  std::size_t bins = 100;
  std::size_t repeats = 20;
  std::size_t repeat_samples = 100000;

  void add(CLI::App& app) {
    add_common(app, common);
    app.add_option("--seed", seed.flag, "RNG seed (default: $AMBIQ_SEED or 0)");
    app.add_option("-C,--categories", categories, "number of proper categories")->required();
    app.add_option("--betas", betas, "prior hyperparameters, comma separated");
    app.add_option("--beta-grid", beta_grid, "lo:hi:count, linearly spaced");
    app.add_option("--measure", measure, "new, modified or old");
    app.add_option("--samples", samples, "Monte-Carlo draws per beta");
    app.add_option("--density", density, "write prior density bands (CSV) to this path");
    app.add_option("--bins", bins, "histogram bins");
    app.add_option("--repeats", repeats, "independent histograms per beta");
    app.add_option("--repeat-samples", repeat_samples, "draws per histogram");
  }

  void execute(std::ostream& out) const {
    const std::uint64_t s = seed.resolve();
    if (categories < 1) fail(ErrorCode::InvalidArgument, "--categories must be >= 1");
    const MeasureKind m = parse_measure(measure);
    require_supported(m, categories);
    if (betas.empty() == beta_grid.empty())
      fail(ErrorCode::InvalidArgument, "give exactly one of --betas, --beta-grid");
    const auto list = betas.empty() ? parse_grid(beta_grid) : parse_reals(betas, "--betas");
    for (double b : list) require_positive_beta(b);

    struct Row {
      double beta, mean, sd, mode;
      const char* method;
    };
    std::vector<Row> rows;
    std::ostringstream bands;
    if (!density.empty()) bands << "beta,bin_lo,bin_hi,density_median,density_q25,density_q75\n";
    for (std::size_t i = 0; i < list.size(); ++i) {
      const double b = list[i];
      const auto prior = DirichletParams::symmetric(categories, b);
      const std::uint64_t beta_seed = derive_stream_seed(s, i);
      const auto draws = sample_transformed(prior, m, samples, beta_seed);
      const auto summary = summarize(draws, 0.95);
      Row row{b, summary.mean, summary.sd, summary.mode, "monte_carlo"};
      if (m != MeasureKind::Old) {
        const auto moments = posterior_moments(prior, m);
        row.mean = moments.mean;
        row.sd = std::sqrt(moments.variance);
        row.method = "closed_form";
      }
      rows.push_back(row);
      if (!density.empty()) {
        DensityOptions opts;
        opts.bins = bins;
        opts.repeats = repeats;
        opts.samples_per_repeat = repeat_samples;
        const auto est =
            density_with_uncertainty(prior, m, derive_stream_seed(beta_seed, 1), opts);
        for (std::size_t k = 0; k < est.median_density.size(); ++k) {
          bands << format_double(b) << ',' << format_double(est.bin_edges[k]) << ','
                << format_double(est.bin_edges[k + 1]) << ','
                << format_double(est.median_density[k]) << ','
                << format_double(est.iqr_lo[k]) << ',' << format_double(est.iqr_hi[k]) << '\n';
        }
      }
    }
    if (!density.empty()) write_text(density, bands.str());

    std::ostringstream text;
    if (common.json) {
      Json doc = metadata("prior-explore", s);
      doc["categories"] = categories;
      doc["measure"] = to_string(m);
      Json arr = Json::array();
      for (const auto& r : rows) {
        Json j;
        j["beta"] = r.beta;
        j["mean"] = r.mean;
        j["sd"] = r.sd;
        j["mode"] = r.mode;
        j["method"] = r.method;
        arr.push_back(std::move(j));
      }
      doc["priors"] = std::move(arr);
      if (!density.empty()) doc["density_path"] = density;
      text << doc.dump(2) << '\n';
    } else {
      text << "beta,mean,sd,mode,method\n";
      for (const auto& r : rows) {
        text << format_double(r.beta) << ',' << format_double(r.mean) << ','
             << format_double(r.sd) << ',' << format_double(r.mode) << ',' << r.method << '\n';
      }
    }
    emit(common, out, text.str());
  }
};

struct ScoringOptions {
  SeedOption seed;
  double beta = 1.0;
  std::string measures = "new";
  double mass = 0.95;
  std::size_t mc_samples = 20000;

  void add(CLI::App& app) {
    app.add_option("--seed", seed.flag, "RNG seed (default: $AMBIQ_SEED or 0)");
    app.add_option("--beta", beta, "symmetric prior hyperparameter");
    app.add_option("--measures", measures, "measures to score, comma separated");
    app.add_option("--mass", mass, "credible interval mass");
    app.add_option("--mc-samples", mc_samples, "posterior draws per item and measure");
  }

  ScoreOptions resolve() const {
    require_positive_beta(beta);
    ScoreOptions o;
    o.prior_beta = beta;
    o.measures = parse_measures(measures);
    o.credible_mass = mass;
    o.mc_samples = mc_samples;
    o.seed = seed.resolve();
    return o;
  }
};

ReportFormat report_format(const std::string& flag, const std::string& path) {
  if (!flag.empty()) return parse_report_format(flag);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
    return ReportFormat::Json;
  return ReportFormat::Csv;
}

Json run_summary(std::string_view command, const ScoreOptions& o, const Dataset* data,
                 std::size_t reported) {
  Json meta = metadata(command, o.seed);
  meta["prior_beta"] = o.prior_beta;
  Json ms = Json::array();
  for (MeasureKind m : o.measures) ms.push_back(to_string(m));
  meta["measures"] = std::move(ms);
  meta["credible_mass"] = o.credible_mass;
  meta["mc_samples"] = o.mc_samples;
  if (data) {
    meta["rows"] = data->summary.rows;
    meta["items"] = data->items.size();
    meta["duplicate_pairs"] = data->summary.duplicate_pairs;
    meta["skipped_unknown"] = data->summary.skipped_unknown;
    meta["warnings"] = data->summary.warnings;
  }
  meta["reported"] = reported;
  return meta;
}

void emit_reports(const Common& common, const std::string& format_flag,
                  const std::vector<ItemReport>& reports, const CategorySchema& schema,
                  bool sort_by_id, const Json& summary, std::ostream& out, std::ostream& err) {
  std::ostringstream text;
  if (report_format(format_flag, common.output) == ReportFormat::Json)
    write_reports_json(text, reports, schema, sort_by_id);
  else
    write_reports_csv(text, reports, schema, sort_by_id);
  emit(common, out, text.str());
  // the run summary goes wherever the reports do not
  (common.output.empty() ? err : out) << summary.dump() << '\n';
}

struct ScoreCmd {
  Common common;
  SchemaInput schema;
  DatasetInput dataset;
  ScoringOptions scoring;
  std::string output_format;

  void add(CLI::App& app) {
    add_common(app, common);
    schema.add(app);
    dataset.add(app, true);
    scoring.add(app);
    app.add_option("--output-format", output_format, "csv or json (default: from --output)");
  }

  void execute(std::ostream& out, std::ostream& err) const {
    const auto sch = schema.resolve();
    const auto opts = scoring.resolve();
    const auto data = dataset.load(sch);
    const auto reports = score_items(data.items, opts);
    emit_reports(common, output_format, reports, sch, true,
                 run_summary("score", opts, &data, reports.size()), out, err);
  }
};

struct RankCmd {
  Common common;
  SchemaInput schema;
  DatasetInput dataset;
  ScoringOptions scoring;
  std::string reports_path;
  std::string key = "posterior_mean";
  std::string measure = "new";
  std::optional<double> threshold;
  bool ascending = false;
  std::string output_format;

  void add(CLI::App& app) {
    add_common(app, common);
    schema.add(app);
    dataset.add(app, false);
    scoring.add(app);
    app.add_option("--reports", reports_path, "rank a report CSV written by `score`");
    app.add_option("--key", key, "plugin or posterior_mean");
    app.add_option("--measure", measure, "measure to rank by");
    app.add_option("--threshold", threshold, "keep items with key >= threshold (<= if ascending)");
    app.add_flag("--ascending", ascending, "lowest first");
    app.add_option("--output-format", output_format, "csv or json (default: from --output)");
  }

  void execute(std::ostream& out, std::ostream& err) const {
    const auto sch = schema.resolve();
    if (dataset.input.empty() == reports_path.empty())
      fail(ErrorCode::InvalidArgument, "give exactly one of --input, --reports");
    const auto rank_key = parse_rank_key(key);
    const auto m = parse_measure(measure);
    auto opts = scoring.resolve();
    std::vector<ItemReport> reports;
    std::optional<Dataset> data;
    if (!reports_path.empty()) {
      reports = read_reports_csv(std::filesystem::path(reports_path), sch);
    } else {
      if (std::find(opts.measures.begin(), opts.measures.end(), m) == opts.measures.end())
        opts.measures.push_back(m);
      data = dataset.load(sch);
      reports = score_items(data->items, opts);
    }
    const auto ranked = rank_and_filter(std::move(reports), rank_key, m, threshold, !ascending);
    Json summary = run_summary("rank", opts, data ? &*data : nullptr, ranked.size());
    summary["key"] = to_string(rank_key);
    summary["rank_measure"] = to_string(m);
    summary["threshold"] = threshold ? Json(*threshold) : Json();
    summary["descending"] = !ascending;
    emit_reports(common, output_format, ranked, sch, false, summary, out, err);
  }
};

void report_error(std::ostream& err, bool json, std::string_view code, const std::string& message) {
  if (json) {
    Json e;
    e["error"] = code;
    e["message"] = message;
    err << e.dump() << '\n';
  } else {
    err << "error: " << message << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ambiguity measures and their posterior distributions for annotated items",
               "ambiq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  MeasureCmd measure;
  PosteriorCmd posterior;
  BiasCurveCmd bias;
  PriorExploreCmd prior;
  ScoreCmd score;
  RankCmd rank;
  measure.add(*app.add_subcommand("measure", "ambiguity measures of one distribution"));
  posterior.add(*app.add_subcommand("posterior", "posterior of a measure given counts"));
  bias.add(*app.add_subcommand("bias-curve", "estimator bias as a function of n"));
  prior.add(*app.add_subcommand("prior-explore", "prior spread of a measure across beta"));
  score.add(*app.add_subcommand("score", "score every item of an annotation dataset"));
  rank.add(*app.add_subcommand("rank", "rank and filter items by a score"));

  // --json may sit anywhere; errors found before parsing completes honour it too
  const bool json_errors = std::find(args.begin(), args.end(), "--json") != args.end();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, json_errors, "UsageError", e.what());
    return kExitValidation;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "measure") measure.execute(out);
    else if (name == "posterior") posterior.execute(out);
    else if (name == "bias-curve") bias.execute(out);
    else if (name == "prior-explore") prior.execute(out);
    else if (name == "score") score.execute(out, err);
    else if (name == "rank") rank.execute(out, err);
  } catch (const Error& e) {
    report_error(err, json_errors, to_string(e.code()), json_errors ? e.detail() : e.what());
    return e.code() == ErrorCode::IoError ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    report_error(err, json_errors, "Internal", e.what());
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace ambiq::cli
