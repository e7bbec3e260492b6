#include "support.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace testing_support {

namespace fs = std::filesystem;
using goldalign::Annotation;
using goldalign::Position;
using goldalign::PositionSet;
using goldalign::Side;
using goldalign::Token;
using goldalign::TokenKind;
using goldalign::VersePair;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<Token> words(const std::string& text) {
  std::vector<Token> out;
  std::istringstream in(text);
  std::string w;
  std::size_t offset = 0;
  while (in >> w) {
    const auto begin = text.find(w, offset);
    offset = begin + w.size();
    Token t;
    t.surface = w;
    t.position = static_cast<Position>(out.size() + 1);
    t.span = {begin, offset};
    const unsigned char c = static_cast<unsigned char>(w[0]);
    t.kind = (w.size() == 1 && c < 0x80 && !std::isalnum(c)) ? TokenKind::punctuation
                                                              : TokenKind::word;
    out.push_back(std::move(t));
  }
  return out;
}

PositionSet take(std::vector<Position>& pool, std::size_t n, std::mt19937_64& rng) {
  std::shuffle(pool.begin(), pool.end(), rng);
  n = std::min(n, pool.size());
  PositionSet out(pool.end() - static_cast<long>(n), pool.end());
  pool.resize(pool.size() - n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

VersePair verse(const std::string& id, const std::string& e, const std::string& f) {
  return {id, words(e), words(f)};
}

VersePair blank_verse(const std::string& id, std::size_t e_len, std::size_t f_len) {
  std::string e, f;
  for (std::size_t i = 1; i <= e_len; ++i) e += "w" + std::to_string(i) + " ";
  for (std::size_t i = 1; i <= f_len; ++i) f += "m" + std::to_string(i) + " ";
  return verse(id, e, f);
}

Annotation random_complete(const VersePair& pair, const std::string& annotator,
                           std::mt19937_64& rng) {
  Annotation ann = Annotation::fresh(pair, annotator);
  std::vector<Position> left_e, left_f;
  for (Position p = 1; p <= pair.side_e.size(); ++p) left_e.push_back(p);
  for (Position p = 1; p <= pair.side_f.size(); ++p) left_f.push_back(p);
  std::uniform_int_distribution<int> pct(0, 99);
  while (!left_e.empty() || !left_f.empty()) {
    if (!left_e.empty() && !left_f.empty() && pct(rng) < 80) {
      const std::size_t ne = 1 + static_cast<std::size_t>(pct(rng) % 2);
      const std::size_t nf = 1 + static_cast<std::size_t>(pct(rng) % 3);
      PositionSet e = take(left_e, ne, rng);
      PositionSet f = take(left_f, nf, rng);
      ann.groups.push_back({std::move(e), std::move(f)});
    } else if (!left_e.empty() && (left_f.empty() || pct(rng) < 50)) {
      ann.nt_marks.push_back({Side::E, take(left_e, 1, rng).front()});
    } else {
      ann.nt_marks.push_back({Side::F, take(left_f, 1, rng).front()});
    }
  }
  return goldalign::canonicalize(std::move(ann));
}

Annotation random_partial(const VersePair& pair, const std::string& annotator,
                          std::mt19937_64& rng) {
  Annotation full = random_complete(pair, annotator, rng);
  std::uniform_int_distribution<int> pct(0, 99);
  Annotation out = Annotation::fresh(pair, annotator);
  for (auto& g : full.groups) {
    if (pct(rng) < 75) out.groups.push_back(g);
  }
  for (auto& nt : full.nt_marks) {
    if (pct(rng) < 75) out.nt_marks.push_back(nt);
  }
  return out;
}

SyntheticCorpus synthetic_corpus(std::size_t verses, std::size_t rare_per_freq,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::string>> e(verses);
  for (unsigned freq = 1; freq <= 4; ++freq) {
    for (std::size_t k = 0; k < rare_per_freq; ++k) {
      const std::string word = "r" + std::to_string(freq) + "x" + std::to_string(k);
      for (unsigned i = 0; i < freq; ++i) e[rng() % verses].push_back(word);
    }
  }
  // Filler words are frequent enough never to land in a stratum.
  SyntheticCorpus out;
  for (auto& words : e) {
    const std::size_t fill = 3 + rng() % 6;
    for (std::size_t i = 0; i < fill; ++i) words.push_back("c" + std::to_string(rng() % 50));
    std::shuffle(words.begin(), words.end(), rng);
    std::string line, fline;
    for (const auto& w : words) line += (line.empty() ? "" : " ") + w;
    const std::size_t flen = 3 + rng() % 8;
    for (std::size_t i = 0; i < flen; ++i) {
      fline += (fline.empty() ? "" : " ") + ("m" + std::to_string(rng() % 60));
    }
    out.e.push_back(line + " .");
    out.f.push_back(fline + " .");
  }
  return out;
}

oracle::Verse to_oracle(const Annotation& ann) {
  oracle::Verse v;
  for (const auto& g : ann.groups) {
    oracle::Group og;
    for (Position p : g.e_positions) og.e.push_back(static_cast<int>(p));
    for (Position p : g.f_positions) og.f.push_back(static_cast<int>(p));
    v.push_back(std::move(og));
  }
  return v;
}

}  // namespace testing_support
