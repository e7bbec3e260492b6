#include <benchmark/benchmark.h>
#include <goldalign/agreement.hpp>
#include <goldalign/alignment.hpp>
#include <goldalign/bitext.hpp>
#include <goldalign/sampling.hpp>

#include <random>
#include <string>
#include <vector>

using namespace goldalign;

namespace {

const ProfilePair& profiles() {
  static const ProfilePair p{LanguageProfile::builtin("en"), LanguageProfile::builtin("fr")};
  return p;
}

std::vector<std::string> english_lines(std::size_t n, std::uint64_t seed) {
  static const char* words[] = {"And", "God", "said", ",", "Let", "there", "be", "light", ":",
                                "it's", "the", "LORD's", "well-pleasing", "3:16", "1,000", "don't",
                                "\"Behold", "waters", "firmament", "."};
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string line;
    const std::size_t len = 8 + rng() % 24;
    for (std::size_t w = 0; w < len; ++w) line += std::string(w ? " " : "") + words[rng() % 20];
    out.push_back(line);
  }
  return out;
}

void BM_Tokenize(benchmark::State& state) {
  const auto lines = english_lines(1000, 1);
  std::size_t bytes = 0;
  for (const auto& l : lines) bytes += l.size();
  for (auto _ : state) {
    for (const auto& l : lines) benchmark::DoNotOptimize(tokenize(l, profiles().e));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_Tokenize);

// Corpus with enough words at frequencies 1..4 for the default strata.
Bitext sampling_corpus(std::size_t verses) {
  std::mt19937_64 rng(2);
  std::vector<std::vector<std::string>> e(verses);
  for (unsigned freq = 1; freq <= 4; ++freq) {
    for (int k = 0; k < 60; ++k) {
      for (unsigned i = 0; i < freq; ++i) {
        e[rng() % verses].push_back("r" + std::to_string(freq) + "x" + std::to_string(k));
      }
    }
  }
  std::vector<std::string> le, lf;
  for (auto& words : e) {
    std::string line;
    for (int i = 0; i < 6; ++i) words.push_back("c" + std::to_string(rng() % 50));
    for (const auto& w : words) line += (line.empty() ? "" : " ") + w;
    le.push_back(line);
    lf.push_back("m1 m2 m3 .");
  }
  return make_bitext(le, lf, nullptr, profiles());
}

void BM_StratifiedSample(benchmark::State& state) {
  const Bitext bitext = sampling_corpus(static_cast<std::size_t>(state.range(0)));
  const Histogram hist = word_histogram(bitext, Side::E);
  const StrataSpec spec = StrataSpec::defaults();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(stratified_sample(hist, spec, rng, bitext, Side::E));
  }
}
BENCHMARK(BM_StratifiedSample)->Arg(3000)->Arg(30000)->Unit(benchmark::kMillisecond);

VersePair blank(std::size_t i, std::size_t ne, std::size_t nf) {
  VersePair p;
  p.verse_id = "v" + std::to_string(i);
  for (std::size_t k = 0; k < ne; ++k) p.side_e.push_back({"w", static_cast<Position>(k + 1), {}, TokenKind::word});
  for (std::size_t k = 0; k < nf; ++k) p.side_f.push_back({"m", static_cast<Position>(k + 1), {}, TokenKind::word});
  return p;
}

// One-to-one diagonal with a few random many-to-many groups.
Annotation annotate(const VersePair& p, const std::string& who, std::mt19937_64& rng) {
  Annotation a = Annotation::fresh(p, who);
  const Position n = static_cast<Position>(std::min(p.side_e.size(), p.side_f.size()));
  for (Position i = 1; i <= n; ++i) {
    if (rng() % 5 == 0 && i < n) {
      a = apply_link(a, {i, i + 1}, {i});
    } else {
      a = apply_link(a, {i}, {i});
    }
  }
  const Coverage cov = completeness(a);
  for (Position e : cov.missing_e) a = mark_not_translated(a, Side::E, e);
  for (Position f : cov.missing_f) a = mark_not_translated(a, Side::F, f);
  return finalize(a);
}

void BM_PooledAgreement(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<VersePair> pairs;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < 100; ++i) {
    pairs.push_back(blank(i, 15 + rng() % 20, 15 + rng() % 20));
    order.push_back(pairs.back().verse_id);
  }
  std::vector<AnnotatorSet> sets;
  for (int k = 0; k < 5; ++k) {
    AnnotatorSet s{"ann" + std::to_string(k), {}};
    for (const auto& p : pairs) s.annotations.push_back(annotate(p, s.annotator, rng));
    sets.push_back(std::move(s));
  }
  const PoolingPlan plan = PoolingPlan::contiguous(100, 10, 10);
  AgreementOptions opts;
  opts.mode = state.range(0) ? WeightingMode::fanout : WeightingMode::directional;
  for (auto _ : state) benchmark::DoNotOptimize(pooled_agreement(sets, order, plan, opts));
}
BENCHMARK(BM_PooledAgreement)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
