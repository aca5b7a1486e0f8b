#include "ambiq/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "ambiq/error.hpp"

namespace ambiq {

std::string_view to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::New: return "new";
    case MeasureKind::Modified: return "modified";
    case MeasureKind::Old: return "old";
  }
  return "unknown";
}

std::optional<MeasureKind> try_parse_measure(std::string_view text) noexcept {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "new") return MeasureKind::New;
  if (lower == "modified") return MeasureKind::Modified;
  if (lower == "old") return MeasureKind::Old;
  return std::nullopt;
}

MeasureKind parse_measure(std::string_view text) {
  if (auto kind = try_parse_measure(text)) return *kind;
  fail(ErrorCode::InvalidArgument,
       "unknown measure '" + std::string(text) + "' (expected new, modified or old)");
}

CategorySchema::CategorySchema(std::vector<std::string> labels, std::string cs_label)
    : labels_(std::move(labels)), cs_label_(std::move(cs_label)) {
  if (labels_.empty()) fail(ErrorCode::InvalidArgument, "schema needs at least one proper label");
  if (cs_label_.empty()) fail(ErrorCode::InvalidArgument, "cs label must be nonempty");
  std::set<std::string_view> seen;
  for (const auto& label : labels_) {
    if (label.empty()) fail(ErrorCode::InvalidArgument, "empty category label");
    if (label == cs_label_)
      fail(ErrorCode::InvalidArgument, "cs label '" + cs_label_ + "' also used as a proper label");
    if (!seen.insert(label).second)
      fail(ErrorCode::InvalidArgument, "duplicate category label '" + label + "'");
  }
}

std::optional<std::size_t> CategorySchema::index_of(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

ProbabilityVector::ProbabilityVector(std::vector<double> proper, double cs)
    : proper_(std::move(proper)), cs_(cs) {
  if (proper_.empty()) fail(ErrorCode::InvalidArgument, "probability vector needs C >= 1");
  double sum = cs_;
  auto check = [](double v) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      fail(ErrorCode::InvalidArgument,
           "probability entry " + std::to_string(v) + " outside [0,1]");
  };
  check(cs_);
  for (double v : proper_) {
    check(v);
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance)
    fail(ErrorCode::InvalidArgument,
         "probabilities sum to " + std::to_string(sum) + ", expected 1 within 1e-9");
}

ProbabilityVector ProbabilityVector::from_simplex(std::span<const double> full) {
  if (full.size() < 2)
    fail(ErrorCode::InvalidArgument, "full simplex needs at least one proper entry and cs");
  return ProbabilityVector(std::vector<double>(full.begin(), full.end() - 1), full.back());
}

std::uint64_t CountVector::total() const noexcept {
  std::uint64_t n = cs;
  for (auto c : proper) n += c;
  return n;
}

ProbabilityVector CountVector::frequencies() const {
  const auto n = total();
  if (n == 0) fail(ErrorCode::EmptySample, "count vector has no observations");
  if (proper.empty()) fail(ErrorCode::InvalidArgument, "count vector needs C >= 1");
  const double dn = static_cast<double>(n);
  std::vector<double> q(proper.size());
  for (std::size_t k = 0; k < proper.size(); ++k) q[k] = static_cast<double>(proper[k]) / dn;
  return ProbabilityVector(std::move(q), static_cast<double>(cs) / dn);
}

CountVector& CountVector::operator+=(const CountVector& other) {
  if (other.proper.size() != proper.size())
    fail(ErrorCode::ShapeMismatch, "count vectors have different category counts");
  for (std::size_t k = 0; k < proper.size(); ++k) proper[k] += other.proper[k];
  cs += other.cs;
  return *this;
}

BetaParams::BetaParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    fail(ErrorCode::InvalidArgument, "Beta parameters must be positive and finite");
}

DirichletParams::DirichletParams(std::vector<double> proper, double cs)
    : proper_(std::move(proper)), cs_(cs), proper_total_(0.0), total_(0.0) {
  if (proper_.empty()) fail(ErrorCode::InvalidArgument, "Dirichlet parameters need C >= 1");
  auto check = [](double v) {
    if (!(v > 0.0) || !std::isfinite(v))
      fail(ErrorCode::InvalidArgument,
           "Dirichlet concentration " + std::to_string(v) + " must be positive");
  };
  check(cs_);
  for (double v : proper_) {
    check(v);
    proper_total_ += v;
  }
  total_ = proper_total_ + cs_;
}

DirichletParams DirichletParams::symmetric(std::size_t categories, double beta) {
  return DirichletParams(std::vector<double>(categories, beta), beta);
}

std::vector<double> DirichletParams::flattened() const {
  std::vector<double> all(proper_.begin(), proper_.end());
  all.push_back(cs_);
  return all;
}

}  // namespace ambiq
