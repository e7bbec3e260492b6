#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goldalign/agreement.hpp"
#include "goldalign/bitext.hpp"
#include "goldalign/sampling.hpp"

namespace goldalign {

/// Translation type recorded for an instance marked Not Translated.
inline constexpr std::string_view kNoTranslation = "NONE";

struct LexiconEntry {
  std::string headword;
  /// Translation type -> positive weight (1 when unweighted).
  std::map<std::string, double, std::less<>> translations;
  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

using Lexicon = std::vector<LexiconEntry>;

enum class GoldMode {
  /// A translation linked to any instance by any annotator.
  union_of_annotators,
  /// A translation linked to some instance by more than half of the
  /// annotators of that instance.
  majority,
};

/// Gold translations of every focus word, read off the annotations of the
/// verses holding its instances. Headwords come from `side`, translations
/// from the opposite half. Throws InputError (coverage) when an instance's
/// verse lacks an annotation from some annotator.
Lexicon extract_gold_lexicon(std::span<const AnnotatorSet> annotators, const FocusSet& focus,
                             const Bitext& bitext, Side side = Side::E,
                             GoldMode mode = GoldMode::union_of_annotators);

struct EntryScore {
  std::string headword;
  /// Empty when the rate is undefined (empty candidate or empty gold).
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> dice;
};

struct LexiconScore {
  std::vector<EntryScore> entries;
  /// Candidate headwords that have no gold entry.
  std::vector<std::string> unmatched;
  /// Micro-averages: intersections and sizes summed over gold headwords.
  double precision = 0;
  double recall = 0;
  double dice = 0;
};

/// Scores candidate translations per gold headword with fuzzy precision,
/// recall and Dice (gold weights are 1). A gold headword missing from the
/// candidate is scored against an empty translation set.
LexiconScore evaluate_lexicon(const Lexicon& candidate, const Lexicon& gold);

/// `headword<TAB>translation[<TAB>weight]` lines; weight defaults to 1.
Lexicon read_lexicon(std::istream& in);
Lexicon read_lexicon_file(const std::filesystem::path& path);
void write_lexicon(std::ostream& out, const Lexicon& lexicon);

}  // namespace goldalign
