#pragma once

#include <goldalign/alignment.hpp>
#include <goldalign/bitext.hpp>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"

namespace testing_support {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "goldalign");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Verse pair built from whitespace-separated words, bypassing the
// tokenizer. Single-character non-alphanumerics count as punctuation.
goldalign::VersePair verse(const std::string& id, const std::string& e, const std::string& f);

// Verse pair of anonymous words w1..wn / m1..mn.
goldalign::VersePair blank_verse(const std::string& id, std::size_t e_len, std::size_t f_len);

// Random complete annotation: groups of 1-2 E and 1-3 F words plus NT marks.
goldalign::Annotation random_complete(const goldalign::VersePair& pair, const std::string& annotator,
                                      std::mt19937_64& rng);

// Random annotation with arbitrary (possibly missing) coverage.
goldalign::Annotation random_partial(const goldalign::VersePair& pair, const std::string& annotator,
                                     std::mt19937_64& rng);

// Parallel lines for sampling tests: `rare_per_freq` distinct words at each
// frequency 1..4 scattered over the verses, padded with frequent filler.
struct SyntheticCorpus {
  std::vector<std::string> e;
  std::vector<std::string> f;
};
SyntheticCorpus synthetic_corpus(std::size_t verses, std::size_t rare_per_freq, std::uint64_t seed);

oracle::Verse to_oracle(const goldalign::Annotation& ann);

}  // namespace testing_support
