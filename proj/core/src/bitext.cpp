#include "goldalign/bitext.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "builtin_profiles.hpp"
#include "goldalign/error.hpp"
#include "utf8.hpp"

namespace goldalign {

char side_letter(Side s) { return s == Side::E ? 'E' : 'F'; }

Side parse_side(std::string_view text) {
  if (text == "E" || text == "e") return Side::E;
  if (text == "F" || text == "f") return Side::F;
  throw ArgumentError("side must be E or F, got '" + std::string(text) + "'");
}

std::optional<std::size_t> Bitext::find(std::string_view verse_id) const {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].verse_id == verse_id) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Profiles

LanguageProfile parse_profile(std::istream& in) {
  LanguageProfile profile;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> words{std::istream_iterator<std::string>(fields),
                                   std::istream_iterator<std::string>()};
    if (words.empty() || words.front().starts_with('#')) continue;
    const std::string& directive = words.front();
    if (directive == "language" && words.size() == 2) {
      profile.language = words[1];
    } else if (directive == "hyphens" && words.size() == 2) {
      if (words[1] == "split") {
        profile.hyphens = HyphenPolicy::split;
      } else if (words[1] == "keep") {
        profile.hyphens = HyphenPolicy::keep;
      } else {
        throw FormatError("hyphens must be 'split' or 'keep'", lineno);
      }
    } else if (directive == "prefix" && words.size() == 2) {
      profile.prefixes.push_back(words[1]);
    } else if (directive == "suffix" && words.size() == 2) {
      profile.suffixes.push_back(words[1]);
    } else if (directive == "elision") {
      if (words.size() < 3) throw FormatError("elision needs a form and at least one token", lineno);
      profile.elisions.push_back({words[1], {words.begin() + 2, words.end()}});
    } else {
      throw FormatError("unrecognized profile directive '" + line + "'", lineno);
    }
  }
  if (profile.language.empty()) throw FormatError("profile has no 'language' directive");
  // Longest clitic first so "jusqu'" wins over "qu'".
  auto by_length = [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  };
  std::stable_sort(profile.prefixes.begin(), profile.prefixes.end(), by_length);
  std::stable_sort(profile.suffixes.begin(), profile.suffixes.end(), by_length);
  return profile;
}

LanguageProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile " + path.string());
  try {
    return parse_profile(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_profile(std::ostream& out, const LanguageProfile& profile) {
  out << "language " << profile.language << '\n';
  out << "hyphens " << (profile.hyphens == HyphenPolicy::split ? "split" : "keep") << '\n';
  for (const auto& rule : profile.elisions) {
    out << "elision " << rule.pattern;
    for (const auto& tok : rule.replacement) out << ' ' << tok;
    out << '\n';
  }
  for (const auto& p : profile.prefixes) out << "prefix " << p << '\n';
  for (const auto& s : profile.suffixes) out << "suffix " << s << '\n';
}

LanguageProfile LanguageProfile::builtin(std::string_view language) {
  std::string_view text;
  if (language == "en") {
    text = detail::kEnglishProfile;
  } else if (language == "fr") {
    text = detail::kFrenchProfile;
  } else {
    throw ArgumentError("no built-in profile for language '" + std::string(language) + "'");
  }
  std::istringstream in{std::string(text)};
  return parse_profile(in);
}

// ---------------------------------------------------------------------------
// Tokenizer

namespace {

enum class CharClass { space, word, apostrophe, hyphen, punct };

CharClass classify(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x00A0: case 0x2009: case 0x202F: case 0x3000:
      return CharClass::space;
    case U'\'': case 0x2019:
      return CharClass::apostrophe;
    case U'-': case 0x2010: case 0x2011:
      return CharClass::hyphen;
    case 0x00A1: case 0x00A7: case 0x00AB: case 0x00B6: case 0x00B7: case 0x00BB: case 0x00BF:
    case 0x2013: case 0x2014: case 0x2015: case 0x2018: case 0x201A: case 0x201B: case 0x201C:
    case 0x201D: case 0x201E: case 0x201F: case 0x2026: case 0x2039: case 0x203A:
      return CharClass::punct;
    default:
      break;
  }
  if (cp < 0x80) {
    const auto c = static_cast<char>(cp);
    if ((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      return CharClass::word;
    }
    return cp < 0x20 || cp == 0x7F ? CharClass::space : CharClass::punct;
  }
  return CharClass::word;
}

struct Char {
  char32_t cp;
  std::size_t begin;
  std::size_t end;
  CharClass cls;
};

bool is_digit(const Char& c) { return c.cp >= U'0' && c.cp <= U'9'; }

/// Clitic comparison: ASCII case-insensitive, U+2019 equals '\''.
std::string clitic_key(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 3, "\xE2\x80\x99") == 0) {
      out.push_back('\'');
      i += 2;
      continue;
    }
    char c = text[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

class Tokenizer {
 public:
  Tokenizer(std::string_view raw, const LanguageProfile& profile) : raw_(raw), profile_(profile) {
    for (const auto& p : profile.prefixes) prefixes_.push_back(clitic_key(p));
    for (const auto& s : profile.suffixes) suffixes_.push_back(clitic_key(s));
  }

  std::vector<Token> run() {
    std::vector<Char> chunk;
    std::size_t pos = 0;
    while (pos < raw_.size()) {
      const std::size_t begin = pos;
      const char32_t cp = detail::decode_utf8(raw_, pos);
      const CharClass cls = classify(cp);
      if (cls == CharClass::space) {
        flush(chunk);
      } else {
        chunk.push_back({cp, begin, pos, cls});
      }
    }
    flush(chunk);
    return std::move(out_);
  }

 private:
  std::string_view text(std::size_t begin, std::size_t end) const {
    return raw_.substr(begin, end - begin);
  }

  bool matches_any(const std::vector<std::string>& keys, std::string_view surface) const {
    const std::string key = clitic_key(surface);
    return std::find(keys.begin(), keys.end(), key) != keys.end();
  }

  void emit(std::string surface, ByteSpan span) {
    Token tok;
    tok.kind = TokenKind::punctuation;
    std::size_t pos = 0;
    while (pos < surface.size()) {
      if (classify(detail::decode_utf8(surface, pos)) == CharClass::word) {
        tok.kind = TokenKind::word;
        break;
      }
    }
    tok.surface = std::move(surface);
    tok.span = span;
    tok.position = static_cast<Position>(out_.size() + 1);
    out_.push_back(std::move(tok));
  }

  void emit_punct(const Char& c) { emit(std::string(text(c.begin, c.end)), {c.begin, c.end}); }

  bool is_separator(const std::vector<Char>& chunk, std::size_t i) const {
    const Char& c = chunk[i];
    if (c.cls == CharClass::hyphen) return profile_.hyphens == HyphenPolicy::split;
    if (c.cls != CharClass::punct) return false;
    // 3:16, 1,000
    const bool digit_separator = (c.cp == U',' || c.cp == U'.' || c.cp == U':') && i > 0 &&
                                 i + 1 < chunk.size() && is_digit(chunk[i - 1]) &&
                                 is_digit(chunk[i + 1]);
    return !digit_separator;
  }

  void flush(std::vector<Char>& chunk) {
    std::size_t seg_begin = 0;
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      if (!is_separator(chunk, i)) continue;
      piece(chunk, seg_begin, i);
      emit_punct(chunk[i]);
      seg_begin = i + 1;
    }
    piece(chunk, seg_begin, chunk.size());
    chunk.clear();
  }

  /// One run of characters between separators: edge punctuation and
  /// apostrophes come off, the rest is a word.
  void piece(const std::vector<Char>& chunk, std::size_t first, std::size_t last) {
    std::size_t lo = first;
    while (lo < last && chunk[lo].cls != CharClass::word) ++lo;
    if (lo == last) {
      for (std::size_t i = first; i < last; ++i) emit_punct(chunk[i]);
      return;
    }
    std::size_t hi = last;
    while (chunk[hi - 1].cls != CharClass::word) --hi;

    // A bare clitic ("'s", "l'") keeps its apostrophe; otherwise tokenizing
    // the tokenizer's own output would split it again.
    if (lo > first && chunk[lo - 1].cls == CharClass::apostrophe &&
        matches_any(suffixes_, text(chunk[lo - 1].begin, chunk[hi - 1].end))) {
      --lo;
    }
    if (hi < last && chunk[hi].cls == CharClass::apostrophe &&
        matches_any(prefixes_, text(chunk[lo].begin, chunk[hi].end))) {
      ++hi;
    }
    for (std::size_t i = first; i < lo; ++i) emit_punct(chunk[i]);
    word(chunk[lo].begin, chunk[hi - 1].end);
    for (std::size_t i = hi; i < last; ++i) emit_punct(chunk[i]);
  }

  static bool starts_with_word(std::string_view s) {
    std::size_t pos = 0;
    return !s.empty() && classify(detail::decode_utf8(s, pos)) == CharClass::word;
  }

  static bool ends_with_word(std::string_view s) {
    if (s.empty()) return false;
    std::size_t begin = s.size() - 1;
    while (begin > 0 && (static_cast<unsigned char>(s[begin]) & 0xC0) == 0x80) --begin;
    return classify(detail::decode_utf8(s, begin)) == CharClass::word;
  }

  /// Applies clitic and elision rules to one segment of word characters
  /// (possibly with internal apostrophes).
  void word(std::size_t begin, std::size_t end) {
    // Leading clitics, longest first, while a word remains behind them.
    bool again = true;
    while (again) {
      again = false;
      const std::string key = clitic_key(text(begin, end));
      for (const auto& p : prefixes_) {
        if (key.size() > p.size() && key.starts_with(p)) {
          const std::size_t cut = byte_length(begin, end, p.size());
          // The remainder must read as a word on its own, or re-tokenizing
          // the output would split it differently.
          if (!starts_with_word(text(begin + cut, end))) continue;
          emit(std::string(text(begin, begin + cut)), {begin, begin + cut});
          begin += cut;
          again = true;
          break;
        }
      }
    }

    // Trailing clitics, outermost first ("wouldn't've").
    std::vector<ByteSpan> suffixes;
    again = true;
    while (again) {
      again = false;
      const std::string key = clitic_key(text(begin, end));
      for (const auto& s : suffixes_) {
        if (key.size() > s.size() && key.ends_with(s)) {
          const std::size_t keep = byte_length(begin, end, key.size() - s.size());
          if (!ends_with_word(text(begin, begin + keep))) continue;
          suffixes.push_back({begin + keep, end});
          end = begin + keep;
          again = true;
          break;
        }
      }
    }

    const std::string_view stem = text(begin, end);
    const auto rule = std::find_if(profile_.elisions.begin(), profile_.elisions.end(),
                                   [&](const ElisionRule& r) { return r.pattern == stem; });
    if (rule != profile_.elisions.end()) {
      for (const auto& piece : rule->replacement) emit(piece, {begin, end});
    } else {
      emit(std::string(stem), {begin, end});
    }
    for (auto it = suffixes.rbegin(); it != suffixes.rend(); ++it) {
      emit(std::string(text(it->begin, it->end)), *it);
    }
  }

  /// Maps a length measured in clitic_key() bytes back to raw bytes (the
  /// key shortens each U+2019 from three bytes to one).
  std::size_t byte_length(std::size_t begin, std::size_t end, std::size_t key_len) const {
    std::size_t raw = 0;
    std::size_t key = 0;
    while (key < key_len && begin + raw < end) {
      raw += raw_.compare(begin + raw, 3, "\xE2\x80\x99") == 0 ? 3 : 1;
      ++key;
    }
    return raw;
  }

  std::string_view raw_;
  const LanguageProfile& profile_;
  std::vector<std::string> prefixes_;
  std::vector<std::string> suffixes_;
  std::vector<Token> out_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view raw_verse, const LanguageProfile& profile) {
  return Tokenizer(raw_verse, profile).run();
}

std::string join_surfaces(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& tok : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += tok.surface;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bitext files

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

Bitext make_bitext(const std::vector<std::string>& lines_e, const std::vector<std::string>& lines_f,
                   const std::vector<std::string>* ids, const ProfilePair& profiles) {
  if (lines_e.size() != lines_f.size()) {
    throw AlignmentError(lines_e.size(), lines_f.size(),
                         "line count mismatch between halves: " + std::to_string(lines_e.size()) +
                             " ≠ " + std::to_string(lines_f.size()));
  }
  if (ids != nullptr && ids->size() != lines_e.size()) {
    throw AlignmentError(lines_e.size(), ids->size(),
                         "id file has " + std::to_string(ids->size()) + " lines, bitext has " +
                             std::to_string(lines_e.size()) + " (" +
                             std::to_string(lines_e.size()) + " ≠ " +
                             std::to_string(ids->size()) + ")");
  }
  Bitext bitext;
  bitext.lang_e = profiles.e.language;
  bitext.lang_f = profiles.f.language;
  bitext.pairs.reserve(lines_e.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < lines_e.size(); ++i) {
    VersePair pair;
    pair.verse_id = ids != nullptr ? (*ids)[i] : "L" + std::to_string(i + 1);
    if (pair.verse_id.empty()) throw FormatError("empty verse id", i + 1);
    if (!seen.insert(pair.verse_id).second) {
      throw FormatError("duplicate verse id '" + pair.verse_id + "'", i + 1);
    }
    try {
      pair.side_e = tokenize(lines_e[i], profiles.e);
      pair.side_f = tokenize(lines_f[i], profiles.f);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(i + 1) + ": " + e.what());
    }
    if (pair.side_e.empty() || pair.side_f.empty()) {
      throw FormatError("verse '" + pair.verse_id + "' has an empty half", i + 1);
    }
    bitext.pairs.push_back(std::move(pair));
  }
  return bitext;
}

Bitext load_bitext(const std::filesystem::path& file_e, const std::filesystem::path& file_f,
                   const std::optional<std::filesystem::path>& ids, const ProfilePair& profiles) {
  const auto lines_e = read_lines(file_e);
  const auto lines_f = read_lines(file_f);
  if (lines_e.size() != lines_f.size()) {
    throw AlignmentError(lines_e.size(), lines_f.size(),
                         file_e.string() + " has " + std::to_string(lines_e.size()) +
                             " lines but " + file_f.string() + " has " +
                             std::to_string(lines_f.size()) + " (" +
                             std::to_string(lines_e.size()) + " ≠ " +
                             std::to_string(lines_f.size()) + ")");
  }
  if (ids) {
    const auto id_lines = read_lines(*ids);
    return make_bitext(lines_e, lines_f, &id_lines, profiles);
  }
  return make_bitext(lines_e, lines_f, nullptr, profiles);
}

void write_bitext(const std::filesystem::path& file_e, const std::filesystem::path& file_f,
                  const std::filesystem::path& ids, const std::vector<VersePair>& pairs) {
  std::ofstream out_e(file_e, std::ios::binary);
  std::ofstream out_f(file_f, std::ios::binary);
  std::ofstream out_ids(ids, std::ios::binary);
  if (!out_e || !out_f || !out_ids) throw InputError("cannot write bitext files");
  for (const auto& pair : pairs) {
    out_e << join_surfaces(pair.side_e) << '\n';
    out_f << join_surfaces(pair.side_f) << '\n';
    out_ids << pair.verse_id << '\n';
  }
}

Histogram word_histogram(const Bitext& bitext, Side side) {
  Histogram hist;
  for (const auto& pair : bitext.pairs) {
    for (const auto& tok : pair.side(side)) {
      if (tok.kind == TokenKind::word) ++hist[tok.surface];
    }
  }
  return hist;
}

}  // namespace goldalign
