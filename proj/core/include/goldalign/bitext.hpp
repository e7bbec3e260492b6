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

namespace goldalign {

/// 1-based index of a token within one verse half. Position 0 is reserved
/// for the NULL word in interchange formats.
using Position = std::uint32_t;

enum class Side { E, F };

inline Side opposite(Side s) { return s == Side::E ? Side::F : Side::E; }
char side_letter(Side s);
Side parse_side(std::string_view text);

enum class TokenKind { word, punctuation };

/// Half-open byte range into the raw verse text.
struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

struct Token {
  std::string surface;
  Position position = 0;
  ByteSpan span;
  TokenKind kind = TokenKind::word;
  friend bool operator==(const Token&, const Token&) = default;
};

struct VersePair {
  std::string verse_id;
  std::vector<Token> side_e;
  std::vector<Token> side_f;

  const std::vector<Token>& side(Side s) const { return s == Side::E ? side_e : side_f; }
};

struct Bitext {
  std::string lang_e;
  std::string lang_f;
  std::vector<VersePair> pairs;

  /// Index of the pair with the given id, if present.
  std::optional<std::size_t> find(std::string_view verse_id) const;
};

/// Word type (exact, case-sensitive surface) to occurrence count.
using Histogram = std::map<std::string, std::size_t, std::less<>>;

enum class HyphenPolicy { split, keep };

/// A whole-form rewrite such as French "du" -> "de le". The replacement
/// tokens all share the byte span of the original form.
struct ElisionRule {
  std::string pattern;
  std::vector<std::string> replacement;
};

/// Tokenization conventions for one language. Rule tables are plain data;
/// see core/data/profiles/ for the shipped defaults and parse_profile() for
/// the file syntax.
struct LanguageProfile {
  std::string language;
  std::vector<ElisionRule> elisions;
  /// Clitics split off the front of a word, kept attached to their
  /// apostrophe ("l'", "qu'").
  std::vector<std::string> prefixes;
  /// Contraction suffixes split off the end of a word ("n't", "'s").
  std::vector<std::string> suffixes;
  HyphenPolicy hyphens = HyphenPolicy::split;

  /// Built-in profile for "en" or "fr". Throws ArgumentError otherwise.
  static LanguageProfile builtin(std::string_view language);
};

LanguageProfile parse_profile(std::istream& in);
LanguageProfile load_profile(const std::filesystem::path& path);
void write_profile(std::ostream& out, const LanguageProfile& profile);

/// Splits one verse into tokens. Punctuation becomes separate tokens,
/// elided forms expand per the profile, and surfaces are never case-folded.
/// Throws InputError on malformed UTF-8.
std::vector<Token> tokenize(std::string_view raw_verse, const LanguageProfile& profile);

/// Space-joined surfaces, the on-disk tokenized form of a verse half.
std::string join_surfaces(const std::vector<Token>& tokens);

struct ProfilePair {
  LanguageProfile e;
  LanguageProfile f;
};

/// Reads two line-aligned verse files (plus an optional id file) into a
/// Bitext. Verse ids default to "L<line>".
Bitext load_bitext(const std::filesystem::path& file_e, const std::filesystem::path& file_f,
                   const std::optional<std::filesystem::path>& ids, const ProfilePair& profiles);

/// In-memory variant of load_bitext over already-split lines.
Bitext make_bitext(const std::vector<std::string>& lines_e, const std::vector<std::string>& lines_f,
                   const std::vector<std::string>* ids, const ProfilePair& profiles);

/// Writes pairs as tokenized parallel files plus an id file.
void write_bitext(const std::filesystem::path& file_e, const std::filesystem::path& file_f,
                  const std::filesystem::path& ids, const std::vector<VersePair>& pairs);

Histogram word_histogram(const Bitext& bitext, Side side);

/// Reads an LF-separated text file into lines; a trailing CR is dropped and
/// a missing final LF is tolerated.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace goldalign
