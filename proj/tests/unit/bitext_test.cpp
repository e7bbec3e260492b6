#include <goldalign/bitext.hpp>
#include <goldalign/error.hpp>
#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace goldalign;
using testing_support::TempDir;
using testing_support::write_text;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

using Words = std::vector<std::string>;

const LanguageProfile& en() {
  static const LanguageProfile p = LanguageProfile::builtin("en");
  return p;
}
const LanguageProfile& fr() {
  static const LanguageProfile p = LanguageProfile::builtin("fr");
  return p;
}

}  // namespace

TEST(Tokenize, SplitsPunctuation) {
  const auto toks = tokenize("In the beginning, God created", en());
  EXPECT_EQ(surfaces(toks), (Words{"In", "the", "beginning", ",", "God", "created"}));
  EXPECT_EQ(toks[3].kind, TokenKind::punctuation);
  EXPECT_EQ(toks[2].kind, TokenKind::word);
  for (std::size_t i = 0; i < toks.size(); ++i) EXPECT_EQ(toks[i].position, i + 1);
}

TEST(Tokenize, FrenchDuSharesSpan) {
  const std::string raw = "la parole du roi";
  const auto toks = tokenize(raw, fr());
  ASSERT_EQ(surfaces(toks), (Words{"la", "parole", "de", "le", "roi"}));
  EXPECT_EQ(toks[2].span, toks[3].span);
  EXPECT_EQ(raw.substr(toks[2].span.begin, toks[2].span.end - toks[2].span.begin), "du");
}

TEST(Tokenize, FrenchAuxAndDes) {
  EXPECT_EQ(surfaces(tokenize("aux enfants des hommes", fr())),
            (Words{"à", "les", "enfants", "des", "hommes"}));
  EXPECT_EQ(surfaces(tokenize("Du ciel", fr())), (Words{"De", "le", "ciel"}));
}

TEST(Tokenize, EnglishContractions) {
  EXPECT_EQ(surfaces(tokenize("don't", en())), (Words{"do", "n't"}));
  EXPECT_EQ(surfaces(tokenize("God's word; we'll see", en())),
            (Words{"God", "'s", "word", ";", "we", "'ll", "see"}));
  EXPECT_EQ(surfaces(tokenize("wouldn't've", en())), (Words{"would", "n't", "'ve"}));
  // Typographic apostrophe behaves the same.
  EXPECT_EQ(surfaces(tokenize("don’t", en())), (Words{"do", "n’t"}));
}

TEST(Tokenize, FrenchElidedArticles) {
  EXPECT_EQ(surfaces(tokenize("l'homme qu'il aima jusqu'au soir", fr())),
            (Words{"l'", "homme", "qu'", "il", "aima", "jusqu'", "à", "le", "soir"}));
  EXPECT_EQ(surfaces(tokenize("L’Éternel", fr())), (Words{"L’", "Éternel"}));
}

TEST(Tokenize, HyphensSplit) {
  EXPECT_EQ(surfaces(tokenize("peut-être well-being", fr())),
            (Words{"peut", "-", "être", "well", "-", "being"}));
  LanguageProfile keep = en();
  keep.hyphens = HyphenPolicy::keep;
  EXPECT_EQ(surfaces(tokenize("well-being", keep)), (Words{"well-being"}));
}

TEST(Tokenize, NumbersKeepSeparators) {
  EXPECT_EQ(surfaces(tokenize("John 3:16, 1,000 men.", en())),
            (Words{"John", "3:16", ",", "1,000", "men", "."}));
}

TEST(Tokenize, EmptyAndPunctuationOnly) {
  EXPECT_TRUE(tokenize("", en()).empty());
  EXPECT_TRUE(tokenize("   \t ", en()).empty());
  const auto toks = tokenize("« ! »", fr());
  ASSERT_EQ(toks.size(), 3u);
  for (const auto& t : toks) EXPECT_EQ(t.kind, TokenKind::punctuation);
}

TEST(Tokenize, MalformedUtf8) {
  EXPECT_THROW(tokenize("abc \xC3", en()), InputError);
  EXPECT_THROW(tokenize("\xFF", en()), InputError);
  EXPECT_THROW(tokenize("\xE2\x80", fr()), InputError);
  EXPECT_THROW(tokenize("\xC0\x80", fr()), InputError);  // overlong
}

TEST(Tokenize, DiacriticsAreWordCharacters) {
  EXPECT_EQ(surfaces(tokenize("Où es-tu, Ève ?", fr())),
            (Words{"Où", "es", "-", "tu", ",", "Ève", "?"}));
}

// Random verses drawn from a vocabulary that exercises every rule.
TEST(TokenizeProperty, IdempotentAndSpansInRange) {
  const std::vector<std::string> vocab = {
      "du",   "aux",  "au",   "l'homme", "qu'il", "don't", "God's", "peut-être", "3:16",
      "1,000", ",",   ".",    ";",       "«",     "»",     "Éternel", "roi",     "the",
      "n't",  "'s",   "l'",   "(x)",     "’", "jusqu'au", "we'll", "it's",  "--"};
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 20000; ++iter) {
    std::string raw;
    const int n = static_cast<int>(rng() % 9);
    for (int i = 0; i < n; ++i) {
      raw += vocab[rng() % vocab.size()];
      raw += (rng() % 3 == 0) ? "" : " ";
    }
    for (const auto* profile : {&en(), &fr()}) {
      const auto toks = tokenize(raw, *profile);
      std::size_t last_begin = 0;
      for (const auto& t : toks) {
        ASSERT_LE(t.span.begin, t.span.end);
        ASSERT_LE(t.span.end, raw.size()) << raw;
        ASSERT_GE(t.span.begin, last_begin) << raw;
        last_begin = t.span.begin;
      }
      const auto again = tokenize(join_surfaces(toks), *profile);
      ASSERT_EQ(surfaces(again), surfaces(toks)) << "input: " << raw;
    }
  }
}

TEST(Profile, RoundTripsThroughText) {
  std::ostringstream out;
  write_profile(out, fr());
  std::istringstream in(out.str());
  const LanguageProfile back = parse_profile(in);
  EXPECT_EQ(back.language, "fr");
  EXPECT_EQ(back.prefixes, fr().prefixes);
  EXPECT_EQ(back.suffixes, fr().suffixes);
  ASSERT_EQ(back.elisions.size(), fr().elisions.size());
  EXPECT_EQ(surfaces(tokenize("la parole du roi", back)), (Words{"la", "parole", "de", "le", "roi"}));
}

TEST(Profile, RejectsUnknownDirective) {
  std::istringstream in("language xx\nsplit everything\n");
  try {
    parse_profile(in);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(LanguageProfile::builtin("de"), ArgumentError);
}

TEST(Profile, CustomElision) {
  std::istringstream in("language de\nelision zum zu dem\n");
  const LanguageProfile de = parse_profile(in);
  EXPECT_EQ(surfaces(tokenize("zum Haus", de)), (Words{"zu", "dem", "Haus"}));
}

TEST(LoadBitext, ThreeLines) {
  TempDir dir;
  write_text(dir / "a.e", "In the beginning\nGod created\nthe heaven\n");
  write_text(dir / "a.f", "Au commencement\nDieu créa\nles cieux\n");
  const Bitext b = load_bitext(dir / "a.e", dir / "a.f", std::nullopt, {en(), fr()});
  ASSERT_EQ(b.pairs.size(), 3u);
  EXPECT_EQ(b.pairs[0].verse_id, "L1");
  EXPECT_EQ(b.pairs[2].verse_id, "L3");
  EXPECT_EQ(b.lang_e, "en");
  EXPECT_EQ(b.lang_f, "fr");
  EXPECT_EQ(surfaces(b.pairs[0].side_f), (Words{"À", "le", "commencement"}));
}

TEST(LoadBitext, TwoHundredFiftyLines) {
  TempDir dir;
  std::string e, f, ids;
  for (int i = 1; i <= 250; ++i) {
    e += "verse " + std::to_string(i) + "\r\n";
    f += "verset " + std::to_string(i) + "\n";
    ids += "Gen 1:" + std::to_string(i) + "\n";
  }
  write_text(dir / "a.e", e);
  write_text(dir / "a.f", f);
  write_text(dir / "a.ids", ids);
  const Bitext b = load_bitext(dir / "a.e", dir / "a.f", dir / "a.ids", {en(), fr()});
  ASSERT_EQ(b.pairs.size(), 250u);
  EXPECT_EQ(b.pairs[249].verse_id, "Gen 1:250");
  EXPECT_EQ(b.find("Gen 1:17"), std::optional<std::size_t>(16));
  EXPECT_EQ(b.pairs[0].side_e.back().surface, "1");  // CR stripped
}

TEST(LoadBitext, LineCountMismatch) {
  TempDir dir;
  write_text(dir / "a.e", "1\n2\n3\n4\n5\n");
  write_text(dir / "a.f", "1\n2\n3\n4\n");
  try {
    load_bitext(dir / "a.e", dir / "a.f", std::nullopt, {en(), fr()});
    FAIL();
  } catch (const AlignmentError& e) {
    EXPECT_EQ(e.e_lines(), 5u);
    EXPECT_EQ(e.f_lines(), 4u);
    EXPECT_NE(std::string(e.what()).find("5 ≠ 4"), std::string::npos) << e.what();
  }
}

TEST(LoadBitext, DuplicateIds) {
  const std::vector<std::string> e{"a", "b", "c"}, f{"x", "y", "z"};
  const std::vector<std::string> ids{"v1", "v2", "v1"};
  EXPECT_THROW(make_bitext(e, f, &ids, {en(), fr()}), FormatError);
}

TEST(LoadBitext, MissingFile) {
  TempDir dir;
  EXPECT_THROW(load_bitext(dir / "nope.e", dir / "nope.f", std::nullopt, {en(), fr()}), InputError);
}

TEST(WriteBitext, RoundTrip) {
  TempDir dir;
  const std::vector<std::string> e{"la parole du roi", "don't"}, f{"x y", "z"};
  const Bitext b = make_bitext(f, e, nullptr, {en(), fr()});
  write_bitext(dir / "o.e", dir / "o.f", dir / "o.ids", b.pairs);
  const Bitext back = load_bitext(dir / "o.e", dir / "o.f", dir / "o.ids", {en(), fr()});
  ASSERT_EQ(back.pairs.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.pairs[i].verse_id, b.pairs[i].verse_id);
    EXPECT_EQ(surfaces(back.pairs[i].side_e), surfaces(b.pairs[i].side_e));
    EXPECT_EQ(surfaces(back.pairs[i].side_f), surfaces(b.pairs[i].side_f));
  }
}

TEST(Histogram, CountsWordTokens) {
  const std::vector<std::string> e{"a b a"}, f{"x"};
  const Bitext b = make_bitext(e, f, nullptr, {en(), fr()});
  EXPECT_EQ(word_histogram(b, Side::E), (Histogram{{"a", 2}, {"b", 1}}));
}

TEST(Histogram, PunctuationOnlyIsEmpty) {
  const std::vector<std::string> e{", . ;", "!"}, f{"?", "«"};
  const Bitext b = make_bitext(e, f, nullptr, {en(), fr()});
  EXPECT_TRUE(word_histogram(b, Side::E).empty());
  EXPECT_TRUE(word_histogram(b, Side::F).empty());
}

TEST(Histogram, CaseSensitive) {
  const std::vector<std::string> e{"Beginning beginning"}, f{"x"};
  const Bitext b = make_bitext(e, f, nullptr, {en(), fr()});
  EXPECT_EQ(word_histogram(b, Side::E).size(), 2u);
}

TEST(HistogramProperty, ConservesWordTokens) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> vocab{"du", "roi", ",", "l'homme", "aux", "peut-être", "!", "Dieu"};
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::string> e, f;
    for (int v = 0; v < 5; ++v) {
      std::string line = "Dieu ";
      for (int i = 0; i < static_cast<int>(rng() % 12); ++i) line += vocab[rng() % vocab.size()] + " ";
      f.push_back(line);
      e.push_back("x");
    }
    const Bitext b = make_bitext(e, f, nullptr, {en(), fr()});
    std::size_t words = 0;
    for (const auto& p : b.pairs) {
      for (const auto& t : p.side_f) words += t.kind == TokenKind::word;
    }
    std::size_t counted = 0;
    for (const auto& [w, c] : word_histogram(b, Side::F)) counted += c;
    ASSERT_EQ(counted, words);
  }
}
