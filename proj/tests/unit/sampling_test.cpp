#include <goldalign/error.hpp>
#include <goldalign/sampling.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace goldalign;
using testing_support::TempDir;

namespace {

const ProfilePair& profiles() {
  static const ProfilePair p{LanguageProfile::builtin("en"), LanguageProfile::builtin("fr")};
  return p;
}

Bitext bitext_of(const std::vector<std::string>& e) {
  const std::vector<std::string> f(e.size(), "x");
  return make_bitext(e, f, nullptr, profiles());
}

}  // namespace

// Reference outputs of Vigna's splitmix64.c seeded with 1234567.
TEST(Rng, MatchesReferenceSplitMix64) {
  Rng rng(1234567);
  EXPECT_EQ(rng.next(), 6457827717110365317ULL);
  EXPECT_EQ(rng.next(), 3203168211198807973ULL);
  EXPECT_EQ(rng.next(), 9817491932198370423ULL);
  EXPECT_EQ(rng.next(), 4593380528125082431ULL);
  EXPECT_EQ(rng.next(), 16408922859458223821ULL);
}

TEST(Rng, UniformStaysInRangeAndCoversIt) {
  Rng rng(42);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.uniform(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
  EXPECT_EQ(rng.uniform(1), 0u);
}

TEST(StrataSpec, ParsesAndOrders) {
  const StrataSpec s = StrataSpec::parse("3:2,1:5");
  ASSERT_EQ(s.strata().size(), 2u);
  EXPECT_EQ(s.strata()[0].frequency, 1u);
  EXPECT_EQ(s.strata()[1].type_count, 2u);
  EXPECT_EQ(s.expected_instances(), 11u);
  EXPECT_EQ(StrataSpec::defaults().expected_instances(), 250u);
  EXPECT_EQ(StrataSpec::defaults().total_types(), 100u);
}

TEST(StrataSpec, RejectsBadInput) {
  EXPECT_THROW(StrataSpec::parse(""), ArgumentError);
  EXPECT_THROW(StrataSpec::parse("1:2,1:3"), ArgumentError);
  EXPECT_THROW(StrataSpec::parse("0:2"), ArgumentError);
  EXPECT_THROW(StrataSpec::parse("1:0"), ArgumentError);
  EXPECT_THROW(StrataSpec::parse("1-2"), ArgumentError);
  EXPECT_THROW(StrataSpec::parse("x:2"), ArgumentError);
}

TEST(Sample, ForcedHapaxOnly) {
  const Bitext b = bitext_of({"a b b", "b c c", "c b"});
  Rng rng(1);
  const auto r = stratified_sample(word_histogram(b, Side::E), StrataSpec::parse("1:1"), rng, b,
                                   Side::E);
  EXPECT_EQ(r.focus, (FocusSet{{"a", 1}}));
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].verse_id, "L1");
  EXPECT_TRUE(r.discarded.empty());
}

TEST(Sample, CoOccurringPairIsInfeasible) {
  // "a" (1) and "b" (2) share verse 1: "a" loses and stratum 1 is empty.
  const Bitext b = bitext_of({"a b z z z", "b z z", "z"});
  Rng rng(3);
  try {
    stratified_sample(word_histogram(b, Side::E), StrataSpec::parse("1:1,2:1"), rng, b, Side::E);
    FAIL() << "expected SamplingInfeasible";
  } catch (const SamplingInfeasible& e) {
    EXPECT_EQ(e.frequency(), 1u);
  }
}

TEST(Sample, RepeatedWordInOneVerseIsReplaced) {
  // "p" occurs twice in one verse; only "q" can fill stratum 2.
  const Bitext b = bitext_of({"p p z z z", "q z", "q z"});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto r = stratified_sample(word_histogram(b, Side::E), StrataSpec::parse("2:1"), rng, b,
                                     Side::E);
    EXPECT_EQ(r.focus, (FocusSet{{"q", 2}}));
    EXPECT_EQ(r.pair_indices, (std::vector<std::size_t>{1, 2}));
  }
}

TEST(Sample, TieDiscardsLexicographicallyLater) {
  // "m" and "n" both frequency 1 and share a verse; "o" is the only spare.
  const Bitext b = bitext_of({"m n z z z", "o z"});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto r = stratified_sample(word_histogram(b, Side::E), StrataSpec::parse("1:2"), rng, b,
                                     Side::E);
    if (r.focus.contains("m") && r.focus.contains("n")) FAIL();
    if (!r.discarded.empty()) {
      EXPECT_EQ(r.discarded.front(), "n");
      EXPECT_EQ(r.focus, (FocusSet{{"m", 1}, {"o", 1}}));
    }
  }
}

TEST(Sample, TooFewCandidates) {
  const Bitext b = bitext_of({"a z z z", "b z"});
  Rng rng(0);
  EXPECT_THROW(
      stratified_sample(word_histogram(b, Side::E), StrataSpec::parse("1:3"), rng, b, Side::E),
      SamplingInfeasible);
}

TEST(SampleProperty, DeterministicExclusiveAndFaithful) {
  const auto corpus = testing_support::synthetic_corpus(3000, 60, 5);
  const Bitext b = make_bitext(corpus.e, corpus.f, nullptr, profiles());
  const Histogram hist = word_histogram(b, Side::E);
  const StrataSpec spec = StrataSpec::parse("1:10,2:10,3:10,4:10");
  std::size_t with_discards = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng r1(seed), r2(seed);
    const auto a = stratified_sample(hist, spec, r1, b, Side::E);
    const auto c = stratified_sample(hist, spec, r2, b, Side::E);
    ASSERT_EQ(a.focus, c.focus);
    ASSERT_EQ(a.pair_indices, c.pair_indices);
    with_discards += !a.discarded.empty();

    ASSERT_EQ(a.focus.size(), 40u);
    for (const auto& [w, freq] : a.focus) ASSERT_EQ(hist.at(w), freq) << w;
    ASSERT_EQ(a.pairs.size(), spec.expected_instances());
    for (const auto& pair : a.pairs) {
      std::size_t hits = 0;
      for (const auto& t : pair.side_e) hits += a.focus.contains(t.surface);
      ASSERT_EQ(hits, 1u) << pair.verse_id;
    }
    ASSERT_TRUE(verify_focus_coverage(b, a.focus, a.pairs, Side::E).pass());
  }
  // The corpus is dense enough that conflict resolution actually runs.
  EXPECT_GT(with_discards, 0u);
}

TEST(Coverage, RemovedVerseFails) {
  const auto corpus = testing_support::synthetic_corpus(2000, 40, 8);
  const Bitext b = make_bitext(corpus.e, corpus.f, nullptr, profiles());
  Rng rng(77);
  auto r = stratified_sample(word_histogram(b, Side::E), StrataSpec::parse("2:5,3:5"), rng, b,
                             Side::E);
  auto report = verify_focus_coverage(b, r.focus, r.pairs, Side::E);
  EXPECT_TRUE(report.pass());
  for (const auto& w : report.words) EXPECT_DOUBLE_EQ(w.ratio(), 1.0);

  const VersePair removed = r.pairs.back();
  r.pairs.pop_back();
  report = verify_focus_coverage(b, r.focus, r.pairs, Side::E);
  EXPECT_FALSE(report.pass());
  std::size_t short_words = 0;
  for (const auto& w : report.words) {
    if (w.in_sample < w.in_corpus) {
      ++short_words;
      EXPECT_LT(w.ratio(), 1.0);
    }
  }
  EXPECT_EQ(short_words, 1u);

  r.pairs.push_back(removed);
  r.pairs.push_back(removed);
  EXPECT_EQ(verify_focus_coverage(b, r.focus, r.pairs, Side::E).duplicate_pairs, 1u);
}

TEST(FocusFile, RoundTrip) {
  TempDir dir;
  const FocusSet focus{{"roi", 3}, {"abime", 1}, {"Cover", 1}, {"vent", 4}};
  std::ostringstream out;
  write_focus_set(out, focus);
  EXPECT_EQ(out.str(), "Cover\t1\nabime\t1\nroi\t3\nvent\t4\n");
  testing_support::write_text(dir / "focus.tsv", out.str());
  EXPECT_EQ(read_focus_set(dir / "focus.tsv"), focus);
  testing_support::write_text(dir / "bad.tsv", "roi\t3\nroi 2\n");
  EXPECT_THROW(read_focus_set(dir / "bad.tsv"), FormatError);
}
