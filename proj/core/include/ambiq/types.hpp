#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ambiq {

/// Tolerance on Σq = 1 when a probability vector is constructed.
inline constexpr double kSimplexTolerance = 1e-9;

/// q_cs at or above 1 - kDegenerateCsMargin counts as total unsolvability.
inline constexpr double kDegenerateCsMargin = 1e-12;

enum class MeasureKind { New, Modified, Old };

inline constexpr MeasureKind kAllMeasures[] = {MeasureKind::New, MeasureKind::Modified,
                                               MeasureKind::Old};

std::string_view to_string(MeasureKind kind) noexcept;
/// Accepts "new", "modified", "old" (case-insensitive).
MeasureKind parse_measure(std::string_view text);
std::optional<MeasureKind> try_parse_measure(std::string_view text) noexcept;

/// Proper category labels plus the name of the can't-solve category.
class CategorySchema {
 public:
  CategorySchema(std::vector<std::string> labels, std::string cs_label);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& cs_label() const noexcept { return cs_label_; }
  std::size_t categories() const noexcept { return labels_.size(); }

  /// Index of a proper label, or nullopt when `label` is the cs label or unknown.
  std::optional<std::size_t> index_of(std::string_view label) const noexcept;
  bool is_cs(std::string_view label) const noexcept { return label == cs_label_; }

 private:
  std::vector<std::string> labels_;
  std::string cs_label_;
};

/// q over C proper categories plus a dedicated can't-solve entry.
class ProbabilityVector {
 public:
  /// Validates every entry in [0,1] and Σ = 1 within kSimplexTolerance.
  /// Inputs outside tolerance are rejected, never renormalized.
  ProbabilityVector(std::vector<double> proper, double cs);

  /// Full simplex with the can't-solve mass as the last entry.
  static ProbabilityVector from_simplex(std::span<const double> full);

  std::span<const double> proper() const noexcept { return proper_; }
  double cs() const noexcept { return cs_; }
  std::size_t categories() const noexcept { return proper_.size(); }

  bool operator==(const ProbabilityVector&) const = default;

 private:
  std::vector<double> proper_;
  double cs_;
};

/// Observed per-category annotation counts.
struct CountVector {
  std::vector<std::uint64_t> proper;
  std::uint64_t cs = 0;

  std::uint64_t total() const noexcept;
  std::size_t categories() const noexcept { return proper.size(); }

  /// Empirical frequencies n / n_total. Throws EmptySample when n_total = 0.
  ProbabilityVector frequencies() const;

  CountVector& operator+=(const CountVector& other);
  bool operator==(const CountVector&) const = default;
};

/// Beta(alpha, beta) with both parameters strictly positive.
class BetaParams {
 public:
  BetaParams(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

 private:
  double alpha_;
  double beta_;
};

/// Dirichlet concentration over C proper categories and the cs entry.
class DirichletParams {
 public:
  DirichletParams(std::vector<double> proper, double cs);

  /// Symmetric prior Dir(beta * 1_{C+1}).
  static DirichletParams symmetric(std::size_t categories, double beta);

  std::span<const double> proper() const noexcept { return proper_; }
  double cs() const noexcept { return cs_; }
  std::size_t categories() const noexcept { return proper_.size(); }
  /// α₀ = α_cs + Σα_k
  double total() const noexcept { return total_; }
  /// α₀ - α_cs, the concentration of the conditional vector.
  double proper_total() const noexcept { return proper_total_; }

  /// All C+1 entries, cs last.
  std::vector<double> flattened() const;

  bool operator==(const DirichletParams&) const = default;

 private:
  std::vector<double> proper_;
  double cs_;
  double proper_total_;
  double total_;
};

}  // namespace ambiq
