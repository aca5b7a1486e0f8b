#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ambiq/types.hpp"

namespace ambiq {

enum class RecordFormat { Csv, Jsonl };

RecordFormat parse_record_format(std::string_view text);
/// From the file extension (.csv, .jsonl, .ndjson); InvalidArgument otherwise.
RecordFormat record_format_for(const std::filesystem::path& path);

struct AnnotationRecord {
  std::string item_id;
  std::optional<std::string> annotator_id;
  std::string response;
};

struct LoadOptions {
  /// Downgrade UnknownLabel to a per-row warning and drop the row.
  bool skip_unknown = false;
};

struct LoadSummary {
  std::size_t rows = 0;             ///< data rows read
  std::size_t duplicate_pairs = 0;  ///< repeated (item, annotator) responses, kept
  std::size_t skipped_unknown = 0;
  std::vector<std::string> warnings;
};

struct Dataset {
  std::map<std::string, CountVector> items;  ///< ordered by item_id
  LoadSummary summary;
};

/// CSV needs a header naming item_id and response (annotator_id optional,
/// any column order). JSONL: one object per line with the same keys.
/// Rows are numbered from 1 for the first data row.
Dataset load_records(const std::filesystem::path& path, RecordFormat format,
                     const CategorySchema& schema, const LoadOptions& options = {});
Dataset load_records(std::istream& in, RecordFormat format, const CategorySchema& schema,
                     const LoadOptions& options = {});

struct MeasureScores {
  std::optional<double> plugin;  ///< absent when the item has no responses
  double posterior_mean = 0.0;
  double posterior_sd = 0.0;
  double credible_lo = 0.0;
  double credible_hi = 0.0;
};

struct ItemReport {
  std::string item_id;
  CountVector counts;
  std::uint64_t n_total = 0;
  bool prior_only = false;
  std::map<MeasureKind, MeasureScores> scores;
};

struct ScoreOptions {
  double prior_beta = 1.0;
  std::vector<MeasureKind> measures{MeasureKind::New};
  double credible_mass = 0.95;
  std::size_t mc_samples = 20000;
  std::uint64_t seed = 0;
};

/// Seed used for one item's draws; depends only on the run seed, the item
/// id and the measure, so results do not depend on input order.
std::uint64_t item_seed(std::uint64_t seed, std::string_view item_id, MeasureKind measure);

/// One report per item, sorted by item_id.
std::vector<ItemReport> score_items(const std::map<std::string, CountVector>& items,
                                    const ScoreOptions& options);

enum class RankKey { Plugin, PosteriorMean };

RankKey parse_rank_key(std::string_view text);
std::string_view to_string(RankKey key);

/// Stable sort on the key with item_id as tie-break, then keep items with
/// key >= threshold (descending) or key <= threshold (ascending).
std::vector<ItemReport> rank_and_filter(std::vector<ItemReport> reports, RankKey key,
                                        MeasureKind measure, std::optional<double> threshold,
                                        bool descending);

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(std::string_view text);

/// CSV columns, in order: item_id, n_total, count_<label> for each proper
/// label, count_<cs_label>, then for each scored measure (new, modified, old
/// order) <m>_plugin, <m>_posterior_mean, <m>_posterior_sd, <m>_credible_lo,
/// <m>_credible_hi, and finally prior_only. A missing plug-in is written as
/// an empty field.
std::vector<std::string> report_csv_header(const CategorySchema& schema,
                                           const std::vector<MeasureKind>& measures);

/// Rows sorted by item_id unless `sort_by_id` is false (input order kept).
void write_reports_csv(std::ostream& out, const std::vector<ItemReport>& reports,
                       const CategorySchema& schema, bool sort_by_id = true);
/// JSON array, one object per item, sorted by item_id unless `sort_by_id`
/// is false.
void write_reports_json(std::ostream& out, const std::vector<ItemReport>& reports,
                        const CategorySchema& schema, bool sort_by_id = true);
void export_reports(const std::vector<ItemReport>& reports, const CategorySchema& schema,
                    const std::filesystem::path& path, ReportFormat format);

std::vector<ItemReport> read_reports_csv(std::istream& in, const CategorySchema& schema);
std::vector<ItemReport> read_reports_csv(const std::filesystem::path& path,
                                         const CategorySchema& schema);

/// Splits one CSV record (RFC 4180 quoting). Returns false at end of input.
/// Quoted fields may span lines.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields);
std::string csv_escape(std::string_view field);

}  // namespace ambiq
