#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "goldalign/alignment.hpp"
#include "goldalign/bitext.hpp"

namespace goldalign {

/// A link token tagged with the verse it came from, so tokens from
/// different verses stay distinct when links are pooled.
struct LinkKey {
  std::size_t segment = 0;
  LinkToken token;
  friend bool operator==(const LinkKey&, const LinkKey&) = default;
  friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
};

/// Fuzzy set of link tokens: token -> positive weight.
using WeightedLinkSet = std::map<LinkKey, double>;

/// Σ of weights.
double set_size(const WeightedLinkSet& x);
/// Σ over shared tokens of min(w_x, w_y).
double intersection_size(const WeightedLinkSet& x, const WeightedLinkSet& y);

/// |X∩Y| / |X|. Throws UndefinedRate when |X| = 0.
double precision(const WeightedLinkSet& x, const WeightedLinkSet& y);
/// |X∩Y| / |Y|. Throws UndefinedRate when |Y| = 0.
double recall(const WeightedLinkSet& x, const WeightedLinkSet& y);
/// 2|X∩Y| / (|X|+|Y|). Throws UndefinedRate when both are empty.
double dice(const WeightedLinkSet& x, const WeightedLinkSet& y);

/// w(u,v) = 1 / max(fanout(u), fanout(v)), fanouts counted within the given
/// set (per segment). Position 0 is a NULL endpoint and never shared.
WeightedLinkSet fanout_weights(const std::set<LinkKey>& tokens);
WeightedLinkSet fanout_weights(const std::set<LinkToken>& tokens);

/// Links treated as pointers from the source side: each token weighs
/// 1 / (number of tokens leaving its source position). F→E uses the French
/// position as source.
enum class Direction { f_to_e, e_to_f };

WeightedLinkSet directional_weights(const std::set<LinkKey>& tokens, Direction direction);
WeightedLinkSet directional_weights(const std::set<LinkToken>& tokens, Direction direction);

enum class WeightingMode { directional, fanout };

struct AgreementOptions {
  WeightingMode mode = WeightingMode::directional;
  /// Count Not Translated marks as links to the NULL position 0.
  bool null_links = false;
};

/// Link tokens of one annotation as keys in `segment`, honouring
/// `null_links`.
std::set<LinkKey> link_keys(const Annotation& ann, std::size_t segment, bool null_links);

/// Agreement between two annotators over the same verses, as a fraction.
/// Links are pooled over all given verses (matched by verse id). Directional
/// mode returns the mean of D_{F→E} and D_{E→F}; fanout mode returns D under
/// fanout weights. Throws InputError when the verse sets differ.
double pair_agreement(std::span<const Annotation> a, std::span<const Annotation> b,
                      const AgreementOptions& options = {});

class PoolingPlan {
 public:
  /// Pools of indices into the verse order; validated disjoint.
  explicit PoolingPlan(std::vector<std::vector<std::size_t>> pools);

  /// pool_count consecutive pools of pool_size verses, in verse order.
  static PoolingPlan contiguous(std::size_t verse_count, std::size_t pool_count,
                                std::size_t pool_size);

  const std::vector<std::vector<std::size_t>>& pools() const noexcept { return pools_; }

 private:
  std::vector<std::vector<std::size_t>> pools_;
};

struct AnnotatorSet {
  std::string annotator;
  std::vector<Annotation> annotations;
};

struct MeanStd {
  double mean = 0;
  /// Sample (n-1) standard deviation; 0 when fewer than two values.
  double stddev = 0;
  std::size_t n = 0;
};

MeanStd mean_std(std::span<const double> values);

struct PairCell {
  std::size_t first = 0;   // index into AgreementReport::annotators
  std::size_t second = 0;
  /// One rate per pool, percent.
  std::vector<double> pool_rates;
  MeanStd summary;
};

struct AgreementReport {
  std::vector<std::string> annotators;
  /// Upper triangle, row-major: (0,1), (0,2), ..., (1,2), ...
  std::vector<PairCell> cells;
  std::vector<MeanStd> per_annotator;
  MeanStd grand;
  AgreementOptions options;
  bool content_only = false;

  const PairCell& cell(std::size_t i, std::size_t j) const;
};

/// For every annotator pair and every pool, pools the pair's links over the
/// pool's verses and computes one rate. Per-annotator statistics run over
/// every pool rate of every pair involving that annotator; the grand
/// statistics over all pool rates. Rates are percentages.
AgreementReport pooled_agreement(std::span<const AnnotatorSet> annotators,
                                 std::span<const std::string> verse_order, const PoolingPlan& plan,
                                 const AgreementOptions& options = {});

/// Table layout: one row per annotator with its pairwise cells to the right
/// of the diagonal, the annotator's mean, and a closing grand-mean row.
void write_report_table(std::ostream& out, const AgreementReport& report);
/// `pair,pool,rate` rows.
void write_report_csv(std::ostream& out, const AgreementReport& report);

class Stoplist {
 public:
  Stoplist() = default;
  Stoplist(std::string language, std::unordered_set<std::string> words);

  /// One surface form per line; `#` starts a comment.
  static Stoplist load(const std::filesystem::path& path, std::string language);

  /// Case-insensitive (ASCII and Latin-1 letters) membership.
  bool contains(std::string_view surface) const;
  const std::string& language() const noexcept { return language_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

 private:
  std::string language_;
  std::unordered_set<std::string> words_;
};

/// Removes every link token with a stoplisted word or a punctuation token
/// on either side, and every NT mark on such a word. The result is not
/// finalized: filtered annotations are metric inputs only. `bitext` supplies
/// the surfaces, matched by verse id.
std::vector<Annotation> content_filter(std::span<const Annotation> annotations,
                                       const Stoplist& stop_e, const Stoplist& stop_f,
                                       const Bitext& bitext);

}  // namespace goldalign
