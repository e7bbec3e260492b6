#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "goldalign/bitext.hpp"

namespace goldalign {

/// Ascending, duplicate-free positions.
using PositionSet = std::vector<Position>;

/// A many-to-many correspondence between words of the two halves.
struct LinkGroup {
  PositionSet e_positions;
  PositionSet f_positions;
  friend bool operator==(const LinkGroup&, const LinkGroup&) = default;
};

/// An explicit assertion that a word has no counterpart in the other half.
struct NotTranslated {
  Side side = Side::E;
  Position position = 0;
  friend bool operator==(const NotTranslated&, const NotTranslated&) = default;
  friend auto operator<=>(const NotTranslated&, const NotTranslated&) = default;
};

/// One annotator's work on one verse pair. Values are immutable in spirit:
/// the editing operations below return a new Annotation.
struct Annotation {
  std::string verse_id;
  std::string annotator_id;
  /// Token counts of the two halves; positions are validated against them.
  std::size_t e_length = 0;
  std::size_t f_length = 0;
  /// Kept in canonical order: ascending smallest e-position.
  std::vector<LinkGroup> groups;
  /// Kept in canonical order: E marks before F marks, ascending position.
  std::vector<NotTranslated> nt_marks;
  bool finalized = false;

  static Annotation fresh(const VersePair& pair, std::string annotator_id);

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// A single (e, f) position pair; derived from groups, never stored.
struct LinkToken {
  Position e = 0;
  Position f = 0;
  friend bool operator==(const LinkToken&, const LinkToken&) = default;
  friend auto operator<=>(const LinkToken&, const LinkToken&) = default;
};

/// Links e_set to f_set. Every existing group or NT mark touching any of the
/// selected positions is removed entirely before the new group is added.
/// Throws ArgumentError for an empty side or a finalized annotation, and
/// RangeError for a position outside the verse.
Annotation apply_link(const Annotation& ann, const PositionSet& e_set, const PositionSet& f_set);

/// Marks one word Not Translated, removing whatever group or mark touched
/// it. Idempotent.
Annotation mark_not_translated(const Annotation& ann, Side side, Position position);

/// Unaccounted positions per side. Punctuation tokens are not exempt.
struct Coverage {
  PositionSet missing_e;
  PositionSet missing_f;
  bool complete() const { return missing_e.empty() && missing_f.empty(); }
};

Coverage completeness(const Annotation& ann);

/// Returns a finalized copy; throws IncompleteAnnotation listing the
/// unaccounted positions otherwise.
Annotation finalize(const Annotation& ann);

/// Union of E×F over all groups. NT marks contribute nothing.
std::set<LinkToken> expand_link_tokens(const Annotation& ann);

/// Sorts positions, groups and marks into canonical order and checks that
/// no position is claimed twice. Throws ArgumentError on overlap and
/// RangeError on invalid positions.
Annotation canonicalize(Annotation ann);

/// One block of an alignment file: an annotation plus the 1-based ordinal
/// of its verse pair within the set.
struct AlignmentRecord {
  std::size_t ordinal = 0;
  Annotation annotation;
  friend bool operator==(const AlignmentRecord&, const AlignmentRecord&) = default;
};

struct WriteOptions {
  /// Allow unfinalized (possibly incomplete) annotations. They are written
  /// with a `D` line after the header.
  bool draft = false;
};

/// Serializes records in the order given, each in canonical form:
///
///   P <ordinal> <verse_id> <annotator_id>
///   [D]
///   L e=<p,...> f=<q,...>      one per group
///   L e=<p> f=0 | L e=0 f=<q>  one per Not Translated mark (NULL link)
///   <blank line between records>
///
/// Throws IncompleteAnnotation for an unfinalized record unless
/// `options.draft` is set.
void write_alignment(std::ostream& out, std::span<const AlignmentRecord> records,
                     const WriteOptions& options = {});
std::string format_alignment(std::span<const AlignmentRecord> records,
                             const WriteOptions& options = {});

/// Parses an alignment stream against the verse pairs of its set
/// (ordinal n refers to pairs[n - 1]). `N e=<p>` and `N f=<q>` are accepted
/// as alternative spellings of a Not Translated mark. Errors carry the
/// offending line.
std::vector<AlignmentRecord> read_alignment(std::istream& in, std::span<const VersePair> pairs);

void write_alignment_file(const std::filesystem::path& path,
                          std::span<const AlignmentRecord> records,
                          const WriteOptions& options = {});
std::vector<AlignmentRecord> read_alignment_file(const std::filesystem::path& path,
                                                 std::span<const VersePair> pairs);

}  // namespace goldalign
