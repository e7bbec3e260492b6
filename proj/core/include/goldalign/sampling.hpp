#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "goldalign/bitext.hpp"

namespace goldalign {

/// SplitMix64 (Steele, Lea & Flood 2014). The full algorithm is written out
/// here so that a seed reproduces the same sample in any implementation:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// all arithmetic modulo 2^64. uniform(n) rejects draws below 2^64 mod n
/// and returns draw mod n, which is exactly uniform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform(std::uint64_t n);

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

struct Stratum {
  unsigned frequency = 0;
  std::size_t type_count = 0;
};

class StrataSpec {
 public:
  /// Validates: non-empty, frequencies distinct and positive, counts >= 1.
  explicit StrataSpec(std::vector<Stratum> strata);

  /// 1:25,2:25,3:25,4:25
  static StrataSpec defaults();
  /// Parses "freq:count,freq:count,...".
  static StrataSpec parse(std::string_view text);

  /// Strata in ascending frequency order.
  const std::vector<Stratum>& strata() const noexcept { return strata_; }
  /// Σ frequency × count, the verse count of a sample with no repeated verses.
  std::size_t expected_instances() const;
  std::size_t total_types() const;

 private:
  std::vector<Stratum> strata_;
};

/// Focus word type to its corpus frequency (its stratum label).
using FocusSet = std::map<std::string, unsigned, std::less<>>;

struct SampleResult {
  FocusSet focus;
  /// Bitext pair indices, ascending.
  std::vector<std::size_t> pair_indices;
  std::vector<VersePair> pairs;
  /// Words dropped by conflict resolution, in discard order.
  std::vector<std::string> discarded;
};

/// Draws a frequency-stratified focus set and extracts every verse pair
/// holding an instance of a focus word on `side`.
///
/// Candidates within a stratum are sorted lexicographically and drawn
/// uniformly without replacement. While any verse would be selected twice
/// (two focus words in it, or one focus word occurring twice in it), the
/// lower-frequency word of the first such verse is discarded for good and a
/// replacement is drawn from its stratum; equal frequencies discard the
/// lexicographically later word. Throws SamplingInfeasible when a stratum
/// runs out of candidates.
SampleResult stratified_sample(const Histogram& hist, const StrataSpec& spec, Rng& rng,
                               const Bitext& bitext, Side side);

struct WordCoverage {
  std::string word;
  std::size_t in_sample = 0;
  std::size_t in_corpus = 0;
  double ratio() const {
    return in_corpus == 0 ? 1.0 : static_cast<double>(in_sample) / static_cast<double>(in_corpus);
  }
};

struct CoverageReport {
  std::vector<WordCoverage> words;
  std::size_t duplicate_pairs = 0;
  bool pass() const;
};

CoverageReport verify_focus_coverage(const Bitext& bitext, const FocusSet& focus,
                                     const std::vector<VersePair>& pairs, Side side);

/// `word<TAB>frequency` lines, ordered by frequency then word.
void write_focus_set(std::ostream& out, const FocusSet& focus);
FocusSet read_focus_set(const std::filesystem::path& path);

}  // namespace goldalign
