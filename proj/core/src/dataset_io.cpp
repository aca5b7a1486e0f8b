#include "ambiq/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "ambiq/error.hpp"
#include "ambiq/format.hpp"
#include "ambiq/frequentist.hpp"
#include "ambiq/measures.hpp"
#include "ambiq/posterior_analytics.hpp"
#include "ambiq/posterior_sampling.hpp"
#include "ambiq/rng.hpp"
#include "parallel.hpp"

namespace ambiq {

namespace {

std::string row_tag(std::size_t row) { return "row " + std::to_string(row); }

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void strip_bom(std::string& s) {
  if (s.size() >= 3 && s.compare(0, 3, "\xEF\xBB\xBF") == 0) s.erase(0, 3);
}

class Aggregator {
 public:
  Aggregator(const CategorySchema& schema, const LoadOptions& options)
      : schema_(schema), options_(options) {}

  void add(std::size_t row, const AnnotationRecord& record) {
    ++data_.summary.rows;
    if (record.item_id.empty()) fail(ErrorCode::MalformedRow, row_tag(row) + ": empty item_id");
    auto [it, inserted] = data_.items.try_emplace(
        record.item_id, CountVector{std::vector<std::uint64_t>(schema_.categories(), 0), 0});
    const bool is_cs = schema_.is_cs(record.response);
    const auto index = schema_.index_of(record.response);
    if (!index && !is_cs) {
      if (!options_.skip_unknown)
        fail(ErrorCode::UnknownLabel,
             row_tag(row) + ": unknown label '" + record.response + "'");
      ++data_.summary.skipped_unknown;
      data_.summary.warnings.push_back(row_tag(row) + ": skipped unknown label '" +
                                       record.response + "'");
      return;
    }
    if (is_cs)
      ++it->second.cs;
    else
      ++it->second.proper[*index];
    if (record.annotator_id && !record.annotator_id->empty()) {
      if (!seen_.emplace(record.item_id, *record.annotator_id).second) {
        ++data_.summary.duplicate_pairs;
      }
    }
  }

  Dataset finish() {
    if (data_.summary.rows == 0) fail(ErrorCode::EmptyFile, "no data rows");
    if (data_.summary.duplicate_pairs > 0) {
      data_.summary.warnings.push_back(std::to_string(data_.summary.duplicate_pairs) +
                                       " repeated (item, annotator) responses kept");
    }
    return std::move(data_);
  }

 private:
  const CategorySchema& schema_;
  const LoadOptions& options_;
  Dataset data_;
  std::set<std::pair<std::string, std::string>> seen_;
};

Dataset load_csv(std::istream& in, const CategorySchema& schema, const LoadOptions& options) {
  std::vector<std::string> fields;
  // skip blank lines before the header
  do {
    if (!read_csv_record(in, fields)) fail(ErrorCode::EmptyFile, "file is empty");
  } while (fields.size() == 1 && fields[0].empty());
  strip_bom(fields[0]);
  std::optional<std::size_t> item_col, annotator_col, response_col;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto name = lower(fields[i]);
    if (name == "item_id") item_col = i;
    else if (name == "annotator_id") annotator_col = i;
    else if (name == "response") response_col = i;
  }
  if (!item_col || !response_col)
    fail(ErrorCode::MalformedRow, "header must name item_id and response columns");

  Aggregator agg(schema, options);
  std::size_t row = 0;
  while (read_csv_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    ++row;
    if (fields.size() < std::max({*item_col, *response_col, annotator_col.value_or(0)}) + 1)
      fail(ErrorCode::MalformedRow, row_tag(row) + ": too few fields");
    AnnotationRecord rec;
    rec.item_id = fields[*item_col];
    rec.response = fields[*response_col];
    if (annotator_col) rec.annotator_id = fields[*annotator_col];
    agg.add(row, rec);
  }
  return agg.finish();
}

std::string json_string_field(const nlohmann::json& obj, const char* key, std::size_t row,
                              bool required) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) fail(ErrorCode::MalformedRow, row_tag(row) + ": missing '" + key + "'");
    return {};
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  fail(ErrorCode::MalformedRow, row_tag(row) + ": '" + key + "' must be a string");
}

Dataset load_jsonl(std::istream& in, const CategorySchema& schema, const LoadOptions& options) {
  Aggregator agg(schema, options);
  std::string line;
  std::size_t row = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      strip_bom(line);
      first = false;
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++row;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      fail(ErrorCode::MalformedRow, row_tag(row) + ": invalid JSON");
    }
    if (!obj.is_object()) fail(ErrorCode::MalformedRow, row_tag(row) + ": expected an object");
    AnnotationRecord rec;
    rec.item_id = json_string_field(obj, "item_id", row, true);
    rec.response = json_string_field(obj, "response", row, true);
    if (obj.contains("annotator_id") && !obj["annotator_id"].is_null())
      rec.annotator_id = json_string_field(obj, "annotator_id", row, false);
    agg.add(row, rec);
  }
  return agg.finish();
}

double score_key(const ItemReport& r, RankKey key, MeasureKind measure) {
  const auto it = r.scores.find(measure);
  if (it == r.scores.end())
    fail(ErrorCode::MissingField,
         "item '" + r.item_id + "' has no " + std::string(to_string(measure)) + " scores");
  if (key == RankKey::PosteriorMean) return it->second.posterior_mean;
  if (!it->second.plugin)
    fail(ErrorCode::MissingField, "item '" + r.item_id + "' has no plug-in estimate");
  return *it->second.plugin;
}

std::vector<MeasureKind> measures_in(const std::vector<ItemReport>& reports) {
  std::vector<MeasureKind> out;
  for (MeasureKind m : kAllMeasures) {
    if (!reports.empty() && reports.front().scores.count(m)) out.push_back(m);
  }
  for (const auto& r : reports) {
    if (r.scores.size() != out.size())
      fail(ErrorCode::ShapeMismatch, "reports carry different measure sets");
  }
  return out;
}

std::vector<ItemReport> sorted_by_id(const std::vector<ItemReport>& reports) {
  std::vector<ItemReport> out(reports);
  std::stable_sort(out.begin(), out.end(),
                   [](const ItemReport& a, const ItemReport& b) { return a.item_id < b.item_id; });
  return out;
}

std::uint64_t parse_count(const std::string& text, std::size_t row) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    fail(ErrorCode::MalformedRow, row_tag(row) + ": bad count '" + text + "'");
  return value;
}

double parse_score(const std::string& text, std::size_t row) {
  try {
    return parse_double(text);
  } catch (const Error&) {
    fail(ErrorCode::MalformedRow, row_tag(row) + ": bad number '" + text + "'");
  }
}

}  // namespace

RecordFormat parse_record_format(std::string_view text) {
  const auto t = lower(text);
  if (t == "csv") return RecordFormat::Csv;
  if (t == "jsonl" || t == "ndjson") return RecordFormat::Jsonl;
  fail(ErrorCode::InvalidArgument, "unknown record format '" + std::string(text) + "'");
}

RecordFormat record_format_for(const std::filesystem::path& path) {
  const auto ext = lower(path.extension().string());
  if (ext == ".csv") return RecordFormat::Csv;
  if (ext == ".jsonl" || ext == ".ndjson") return RecordFormat::Jsonl;
  fail(ErrorCode::InvalidArgument,
       "cannot infer record format from '" + path.string() + "'; pass it explicitly");
}

bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      break;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) fail(ErrorCode::MalformedRow, "unterminated quoted field");
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

Dataset load_records(std::istream& in, RecordFormat format, const CategorySchema& schema,
                     const LoadOptions& options) {
  return format == RecordFormat::Csv ? load_csv(in, schema, options)
                                     : load_jsonl(in, schema, options);
}

Dataset load_records(const std::filesystem::path& path, RecordFormat format,
                     const CategorySchema& schema, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return load_records(in, format, schema, options);
}

std::uint64_t item_seed(std::uint64_t seed, std::string_view item_id, MeasureKind measure) {
  return derive_stream_seed(derive_stream_seed(seed, fnv1a64(item_id)),
                            static_cast<std::uint64_t>(measure));
}

std::vector<ItemReport> score_items(const std::map<std::string, CountVector>& items,
                                    const ScoreOptions& options) {
  if (!(options.prior_beta > 0.0) || !std::isfinite(options.prior_beta))
    fail(ErrorCode::InvalidArgument, "prior beta must be positive");
  if (options.mc_samples < kMinSummarySamples)
    fail(ErrorCode::InvalidArgument, "mc_samples must be >= 1000");
  if (options.measures.empty()) fail(ErrorCode::InvalidArgument, "no measures requested");

  std::vector<const std::pair<const std::string, CountVector>*> entries;
  entries.reserve(items.size());
  for (const auto& entry : items) entries.push_back(&entry);
  std::vector<ItemReport> reports(entries.size());

  std::set<MeasureKind> measures(options.measures.begin(), options.measures.end());
  detail::parallel_for(entries.size(), [&](std::size_t i) {
    const auto& [id, counts] = *entries[i];
    for (MeasureKind m : measures) require_supported(m, counts.categories());
    ItemReport report;
    report.item_id = id;
    report.counts = counts;
    report.n_total = counts.total();
    report.prior_only = report.n_total == 0;
    const auto posterior =
        posterior_update(DirichletParams::symmetric(counts.categories(), options.prior_beta),
                         counts);
    for (MeasureKind m : measures) {
      MeasureScores s;
      if (!report.prior_only) s.plugin = plugin_estimate(counts, m);
      const auto draws = sample_transformed(posterior, m, options.mc_samples,
                                            item_seed(options.seed, id, m));
      const auto summary = summarize(draws, options.credible_mass);
      s.posterior_mean =
          m == MeasureKind::Old ? summary.mean : posterior_moments(posterior, m).mean;
      s.posterior_sd = summary.sd;
      s.credible_lo = summary.credible_interval.lo;
      s.credible_hi = summary.credible_interval.hi;
      report.scores.emplace(m, s);
    }
    reports[i] = std::move(report);
  });
  return reports;
}

RankKey parse_rank_key(std::string_view text) {
  const auto t = lower(text);
  if (t == "plugin") return RankKey::Plugin;
  if (t == "posterior_mean" || t == "posterior-mean" || t == "mean") return RankKey::PosteriorMean;
  fail(ErrorCode::InvalidArgument,
       "unknown rank key '" + std::string(text) + "' (plugin, posterior_mean)");
}

std::string_view to_string(RankKey key) {
  return key == RankKey::Plugin ? "plugin" : "posterior_mean";
}

std::vector<ItemReport> rank_and_filter(std::vector<ItemReport> reports, RankKey key,
                                        MeasureKind measure, std::optional<double> threshold,
                                        bool descending) {
  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i)
    keyed.emplace_back(score_key(reports[i], key, measure), i);
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return descending ? a.first > b.first : a.first < b.first;
    return reports[a.second].item_id < reports[b.second].item_id;
  });
  std::vector<ItemReport> out;
  out.reserve(keyed.size());
  for (const auto& [value, index] : keyed) {
    if (threshold && (descending ? value < *threshold : value > *threshold)) continue;
    out.push_back(std::move(reports[index]));
  }
  return out;
}

ReportFormat parse_report_format(std::string_view text) {
  const auto t = lower(text);
  if (t == "json") return ReportFormat::Json;
  if (t == "csv") return ReportFormat::Csv;
  fail(ErrorCode::InvalidArgument, "unknown report format '" + std::string(text) + "'");
}

std::vector<std::string> report_csv_header(const CategorySchema& schema,
                                           const std::vector<MeasureKind>& measures) {
  std::vector<std::string> header{"item_id", "n_total"};
  for (const auto& label : schema.labels()) header.push_back("count_" + label);
  header.push_back("count_" + schema.cs_label());
  for (MeasureKind m : kAllMeasures) {
    if (std::find(measures.begin(), measures.end(), m) == measures.end()) continue;
    const std::string p(to_string(m));
    for (const char* field :
         {"_plugin", "_posterior_mean", "_posterior_sd", "_credible_lo", "_credible_hi"})
      header.push_back(p + field);
  }
  header.push_back("prior_only");
  return header;
}

void write_reports_csv(std::ostream& out, const std::vector<ItemReport>& reports,
                       const CategorySchema& schema, bool sort_by_id) {
  const auto measures = measures_in(reports);
  const auto header = report_csv_header(schema, measures);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << csv_escape(header[i]);
  out << '\n';
  for (const auto& r : sort_by_id ? sorted_by_id(reports) : reports) {
    if (r.counts.categories() != schema.categories())
      fail(ErrorCode::ShapeMismatch, "item '" + r.item_id + "' does not match the schema");
    out << csv_escape(r.item_id) << ',' << r.n_total;
    for (auto c : r.counts.proper) out << ',' << c;
    out << ',' << r.counts.cs;
    for (MeasureKind m : measures) {
      const auto& s = r.scores.at(m);
      out << ',' << (s.plugin ? format_double(*s.plugin) : std::string());
      out << ',' << format_double(s.posterior_mean) << ',' << format_double(s.posterior_sd)
          << ',' << format_double(s.credible_lo) << ',' << format_double(s.credible_hi);
    }
    out << ',' << (r.prior_only ? "true" : "false") << '\n';
  }
}

void write_reports_json(std::ostream& out, const std::vector<ItemReport>& reports,
                        const CategorySchema& schema, bool sort_by_id) {
  const auto measures = measures_in(reports);
  auto doc = nlohmann::ordered_json::array();
  for (const auto& r : sort_by_id ? sorted_by_id(reports) : reports) {
    if (r.counts.categories() != schema.categories())
      fail(ErrorCode::ShapeMismatch, "item '" + r.item_id + "' does not match the schema");
    nlohmann::ordered_json item;
    item["item_id"] = r.item_id;
    item["n_total"] = r.n_total;
    nlohmann::ordered_json counts;
    for (std::size_t k = 0; k < r.counts.proper.size(); ++k)
      counts[schema.labels()[k]] = r.counts.proper[k];
    counts[schema.cs_label()] = r.counts.cs;
    item["counts"] = std::move(counts);
    item["prior_only"] = r.prior_only;
    nlohmann::ordered_json scores;
    for (MeasureKind m : measures) {
      const auto& s = r.scores.at(m);
      nlohmann::ordered_json entry;
      entry["plugin"] = s.plugin ? nlohmann::ordered_json(*s.plugin) : nlohmann::ordered_json();
      entry["posterior_mean"] = s.posterior_mean;
      entry["posterior_sd"] = s.posterior_sd;
      entry["credible_lo"] = s.credible_lo;
      entry["credible_hi"] = s.credible_hi;
      scores[std::string(to_string(m))] = std::move(entry);
    }
    item["scores"] = std::move(scores);
    doc.push_back(std::move(item));
  }
  out << doc.dump(2) << '\n';
}

void export_reports(const std::vector<ItemReport>& reports, const CategorySchema& schema,
                    const std::filesystem::path& path, ReportFormat format) {
  std::ostringstream buffer;
  if (format == ReportFormat::Csv)
    write_reports_csv(buffer, reports, schema);
  else
    write_reports_json(buffer, reports, schema);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << buffer.str();
  out.flush();
  if (!out) fail(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

std::vector<ItemReport> read_reports_csv(std::istream& in, const CategorySchema& schema) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) fail(ErrorCode::EmptyFile, "report file is empty");
  strip_bom(fields[0]);
  std::vector<MeasureKind> measures;
  for (const auto& name : fields) {
    const auto pos = name.find("_plugin");
    if (pos != std::string::npos && pos + 7 == name.size()) {
      if (auto m = try_parse_measure(name.substr(0, pos))) measures.push_back(*m);
    }
  }
  const auto expected = report_csv_header(schema, measures);
  if (fields != expected) fail(ErrorCode::MalformedRow, "report header does not match schema");

  std::vector<ItemReport> reports;
  std::size_t row = 0;
  const std::size_t C = schema.categories();
  while (read_csv_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    ++row;
    if (fields.size() != expected.size())
      fail(ErrorCode::MalformedRow, row_tag(row) + ": expected " +
                                        std::to_string(expected.size()) + " fields");
    ItemReport r;
    std::size_t col = 0;
    r.item_id = fields[col++];
    r.n_total = parse_count(fields[col++], row);
    r.counts.proper.resize(C);
    for (std::size_t k = 0; k < C; ++k) r.counts.proper[k] = parse_count(fields[col++], row);
    r.counts.cs = parse_count(fields[col++], row);
    for (MeasureKind m : measures) {
      MeasureScores s;
      if (!fields[col].empty()) s.plugin = parse_score(fields[col], row);
      ++col;
      s.posterior_mean = parse_score(fields[col++], row);
      s.posterior_sd = parse_score(fields[col++], row);
      s.credible_lo = parse_score(fields[col++], row);
      s.credible_hi = parse_score(fields[col++], row);
      r.scores.emplace(m, s);
    }
    const auto& flag = fields[col];
    if (flag != "true" && flag != "false")
      fail(ErrorCode::MalformedRow, row_tag(row) + ": prior_only must be true or false");
    r.prior_only = flag == "true";
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<ItemReport> read_reports_csv(const std::filesystem::path& path,
                                         const CategorySchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return read_reports_csv(in, schema);
}

}  // namespace ambiq
