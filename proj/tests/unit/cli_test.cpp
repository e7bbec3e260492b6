#include <goldalign/alignment.hpp>
#include <goldalign/service.hpp>
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <random>

#include "support.hpp"

using namespace goldalign;
using testing_support::read_text;
using testing_support::TempDir;
using testing_support::write_text;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

CliResult run(const TempDir& dir, const std::string& args, const std::string& input = "") {
  write_text(dir / "stdin.txt", input);
  const std::string cmd = std::string("'") + GOLDALIGN_CLI + "' " + args + " <'" +
                          (dir / "stdin.txt").string() + "' >'" + (dir / "stdout.txt").string() +
                          "' 2>'" + (dir / "stderr.txt").string() + "'";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_text(dir / "stdout.txt");
  r.err = read_text(dir / "stderr.txt");
  return r;
}

// 400-verse corpus with enough rare words for a small sample.
void write_corpus(const TempDir& dir) {
  const auto c = testing_support::synthetic_corpus(400, 8, 3);
  std::string e, f;
  for (std::size_t i = 0; i < c.e.size(); ++i) {
    e += c.e[i] + "\n";
    f += c.f[i] + "\n";
  }
  write_text(dir / "corpus.e", e);
  write_text(dir / "corpus.f", f);
}

// Annotates every pair of a set for each annotator, mostly agreeing.
void annotate_set(const std::filesystem::path& set_dir, const std::vector<std::string>& who) {
  const auto set = load_verse_set(set_dir, {LanguageProfile::builtin("en"), LanguageProfile::builtin("fr")});
  std::mt19937_64 rng(1);
  std::filesystem::create_directories(set_dir / "annotations");
  for (const auto& name : who) {
    std::vector<AlignmentRecord> recs;
    for (std::size_t i = 0; i < set->bitext.pairs.size(); ++i) {
      Annotation a = testing_support::random_complete(set->bitext.pairs[i], name, rng);
      recs.push_back({i + 1, finalize(a)});
    }
    write_alignment_file(annotation_path(set_dir, name), recs);
  }
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  TempDir dir;
  CliResult r = run(dir, "");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("tokenize"), std::string::npos);
  EXPECT_EQ(run(dir, "frobnicate").status, 2);
  EXPECT_EQ(run(dir, "agree").status, 2);  // --part missing
  EXPECT_EQ(run(dir, "agree --part /nonexistent/dir").status, 2);
  EXPECT_EQ(run(dir, "lexicon").status, 2);
  EXPECT_EQ(run(dir, "--help").status, 0);
}

TEST(Cli, Tokenize) {
  TempDir dir;
  CliResult r = run(dir, "tokenize --lang fr", "la parole du roi\nL'Éternel dit.\n");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "la parole de le roi\nL' Éternel dit .\n");
  r = run(dir, "tokenize", "don't stop\n");
  EXPECT_EQ(r.out, "do n't stop\n");
  r = run(dir, "tokenize", "ok\n\xff\n");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  r = run(dir, "tokenize --lang xx", "a\n");
  EXPECT_EQ(r.status, 1);
}

TEST(Cli, SampleIsReproducible) {
  TempDir dir;
  write_corpus(dir);
  const std::string base = "sample --e '" + (dir / "corpus.e").string() + "' --f '" +
                           (dir / "corpus.f").string() + "' --seed 42 --out ";
  const std::string strata = " --strata 1:3,2:3,3:2,4:2";
  CliResult a = run(dir, base + "'" + (dir / "s1").string() + "'" + strata);
  ASSERT_EQ(a.status, 0) << a.err;
  CliResult b = run(dir, base + "'" + (dir / "s2").string() + "'" + strata);
  ASSERT_EQ(b.status, 0) << b.err;
  for (const char* f : {"focus.tsv", "pairs.e", "pairs.f", "pairs.ids"}) {
    EXPECT_EQ(read_text(dir / "s1" / f), read_text(dir / "s2" / f)) << f;
  }
  EXPECT_EQ(a.out, b.out);

  CliResult bad = run(dir, base + "'" + (dir / "s3").string() + "' --strata 1:100000");
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("stratum 1"), std::string::npos);
  EXPECT_EQ(run(dir, base + "'" + (dir / "s4").string() + "' --strata 1:x").status, 1);
}

TEST(Cli, LineCountMismatchIsDomainError) {
  TempDir dir;
  write_text(dir / "a.e", "1\n2\n3\n4\n5\n");
  write_text(dir / "a.f", "1\n2\n3\n4\n");
  CliResult r = run(dir, "sample --e '" + (dir / "a.e").string() + "' --f '" + (dir / "a.f").string() +
                       "' --out '" + (dir / "o").string() + "'");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("5 ≠ 4"), std::string::npos);
}

TEST(Cli, ValidateAgreeAndLexicon) {
  TempDir dir;
  write_corpus(dir);
  const auto set = dir / "part1";
  CliResult r = run(dir, "sample --e '" + (dir / "corpus.e").string() + "' --f '" +
                       (dir / "corpus.f").string() + "' --seed 7 --strata 1:4,2:4,3:2,4:2 --out '" +
                       set.string() + "'");
  ASSERT_EQ(r.status, 0) << r.err;
  annotate_set(set, {"ann1", "ann2", "ann3"});

  r = run(dir, "validate --set '" + set.string() + "' --focus '" + (set / "focus.tsv").string() +
                   "' --corpus-e '" + (dir / "corpus.e").string() + "' --corpus-f '" +
                   (dir / "corpus.f").string() + "'");
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("ok   focus coverage"), std::string::npos);

  // 4+8+6+8 = 26 verse pairs
  r = run(dir, "agree --part '" + set.string() + "' --pools 2 --pool-size 13 --csv '" +
                   (dir / "rates.csv").string() + "'");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("grand mean"), std::string::npos);
  EXPECT_NE(r.out.find("ann3"), std::string::npos);
  EXPECT_EQ(read_text(dir / "rates.csv").rfind("pair,pool,rate\nann1-ann2,1,", 0), 0u);

  r = run(dir, "agree --part '" + set.string() + "' --pools 2 --pool-size 13 --content-only");
  EXPECT_EQ(r.status, 1);
  write_text(dir / "en.stop", "c1\nc2\nc3\n");
  write_text(dir / "fr.stop", "m1\nm2\n");
  r = run(dir, "agree --part '" + set.string() + "' --pools 2 --pool-size 13 --mode fanout --content-only " +
                   "--stoplist-e '" + (dir / "en.stop").string() + "' --stoplist-f '" +
                   (dir / "fr.stop").string() + "'");
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("content words only"), std::string::npos);
  EXPECT_EQ(run(dir, "agree --part '" + set.string() + "' --pools 3 --pool-size 13").status, 1);

  r = run(dir, "lexicon extract --part '" + set.string() + "' --focus '" +
                   (set / "focus.tsv").string() + "' --out '" + (dir / "gold.lex").string() + "'");
  ASSERT_EQ(r.status, 0) << r.err;
  r = run(dir, "lexicon eval --candidate '" + (dir / "gold.lex").string() + "' --gold '" +
                   (dir / "gold.lex").string() + "'");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("micro\t1.0000\t1.0000\t1.0000"), std::string::npos) << r.out;

  // Corrupt one file: validation fails and names it.
  write_text(set / "annotations" / "ann2.align", "P 1 nonsense ann2\n");
  r = run(dir, "validate --set '" + set.string() + "'");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("ann2.align"), std::string::npos);
  EXPECT_EQ(run(dir, "agree --part '" + set.string() + "' --pools 2 --pool-size 13").status, 1);
}
