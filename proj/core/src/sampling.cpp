#include "goldalign/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <unordered_map>

#include "goldalign/error.hpp"

namespace goldalign {

std::uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::uniform(std::uint64_t n) {
  if (n == 0) throw ArgumentError("uniform(0)");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % n;
  }
}

StrataSpec::StrataSpec(std::vector<Stratum> strata) : strata_(std::move(strata)) {
  if (strata_.empty()) throw ArgumentError("strata spec is empty");
  std::sort(strata_.begin(), strata_.end(),
            [](const Stratum& a, const Stratum& b) { return a.frequency < b.frequency; });
  for (std::size_t i = 0; i < strata_.size(); ++i) {
    if (strata_[i].frequency == 0) throw ArgumentError("stratum frequency must be positive");
    if (strata_[i].type_count == 0) throw ArgumentError("stratum type count must be positive");
    if (i > 0 && strata_[i].frequency == strata_[i - 1].frequency) {
      throw ArgumentError("duplicate stratum frequency " + std::to_string(strata_[i].frequency));
    }
  }
}

StrataSpec StrataSpec::defaults() { return StrataSpec({{1, 25}, {2, 25}, {3, 25}, {4, 25}}); }

StrataSpec StrataSpec::parse(std::string_view text) {
  std::vector<Stratum> strata;
  auto number = [&](std::string_view field) -> unsigned long {
    unsigned long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
      throw ArgumentError("bad strata field '" + std::string(field) + "' in '" + std::string(text) +
                          "'");
    }
    return value;
  };
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ArgumentError("strata entries are freq:count, got '" + std::string(item) + "'");
    }
    const auto freq = number(item.substr(0, colon));
    if (freq > std::numeric_limits<unsigned>::max()) throw ArgumentError("stratum frequency too large");
    strata.push_back({static_cast<unsigned>(freq), number(item.substr(colon + 1))});
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  return StrataSpec(std::move(strata));
}

std::size_t StrataSpec::expected_instances() const {
  std::size_t total = 0;
  for (const auto& s : strata_) total += s.frequency * s.type_count;
  return total;
}

std::size_t StrataSpec::total_types() const {
  std::size_t total = 0;
  for (const auto& s : strata_) total += s.type_count;
  return total;
}

namespace {

/// Remaining draw candidates of one stratum. Draws are swap-remove on a
/// lexicographically sorted vector, so the sequence depends only on the seed.
struct Pool {
  unsigned frequency;
  std::vector<std::string> candidates;

  std::optional<std::string> draw(Rng& rng) {
    if (candidates.empty()) return std::nullopt;
    const auto i = static_cast<std::size_t>(rng.uniform(candidates.size()));
    std::string word = std::move(candidates[i]);
    candidates[i] = std::move(candidates.back());
    candidates.pop_back();
    return word;
  }
};

[[noreturn]] void infeasible(unsigned frequency, const std::string& why) {
  throw SamplingInfeasible(frequency,
                           "sampling infeasible in stratum " + std::to_string(frequency) + ": " + why);
}

}  // namespace

SampleResult stratified_sample(const Histogram& hist, const StrataSpec& spec, Rng& rng,
                               const Bitext& bitext, Side side) {
  std::map<unsigned, Pool> pools;
  for (const auto& s : spec.strata()) pools.emplace(s.frequency, Pool{s.frequency, {}});
  for (const auto& [word, count] : hist) {
    if (count > std::numeric_limits<unsigned>::max()) continue;
    auto it = pools.find(static_cast<unsigned>(count));
    if (it != pools.end()) it->second.candidates.push_back(word);
  }

  // Verse indices of every instance of every candidate, in corpus order.
  std::unordered_map<std::string, std::vector<std::size_t>> instances;
  for (const auto& [freq, pool] : pools) {
    for (const auto& word : pool.candidates) instances[word];
  }
  for (std::size_t i = 0; i < bitext.pairs.size(); ++i) {
    for (const auto& tok : bitext.pairs[i].side(side)) {
      if (tok.kind != TokenKind::word) continue;
      auto it = instances.find(tok.surface);
      if (it != instances.end()) it->second.push_back(i);
    }
  }

  FocusSet focus;
  for (const auto& s : spec.strata()) {
    Pool& pool = pools.at(s.frequency);
    if (pool.candidates.size() < s.type_count) {
      infeasible(s.frequency, "needs " + std::to_string(s.type_count) + " types, corpus has " +
                                  std::to_string(pool.candidates.size()));
    }
    for (std::size_t k = 0; k < s.type_count; ++k) focus.emplace(*pool.draw(rng), s.frequency);
  }

  SampleResult result;
  for (;;) {
    // verse index -> focus words with an instance there (with repetition)
    std::map<std::size_t, std::vector<const std::string*>> occupancy;
    for (const auto& [word, freq] : focus) {
      for (std::size_t v : instances.at(word)) occupancy[v].push_back(&word);
    }
    const auto conflict = std::find_if(occupancy.begin(), occupancy.end(),
                                       [](const auto& entry) { return entry.second.size() > 1; });
    if (conflict == occupancy.end()) {
      for (const auto& [v, words] : occupancy) result.pair_indices.push_back(v);
      break;
    }
    // Lowest frequency loses; among equals the lexicographically last word.
    const std::string* loser = nullptr;
    for (const std::string* w : conflict->second) {
      if (loser == nullptr) {
        loser = w;
        continue;
      }
      const unsigned fw = focus.at(*w);
      const unsigned fl = focus.at(*loser);
      if (fw < fl || (fw == fl && *w > *loser)) loser = w;
    }
    const std::string discarded = *loser;
    const unsigned freq = focus.at(discarded);
    focus.erase(discarded);
    result.discarded.push_back(discarded);
    auto replacement = pools.at(freq).draw(rng);
    if (!replacement) {
      infeasible(freq, "no replacement left after discarding '" + discarded + "'");
    }
    focus.emplace(std::move(*replacement), freq);
  }

  result.focus = std::move(focus);
  result.pairs.reserve(result.pair_indices.size());
  for (std::size_t v : result.pair_indices) result.pairs.push_back(bitext.pairs[v]);
  return result;
}

bool CoverageReport::pass() const {
  return duplicate_pairs == 0 && std::all_of(words.begin(), words.end(), [](const WordCoverage& w) {
           return w.in_corpus > 0 && w.in_sample == w.in_corpus;
         });
}

CoverageReport verify_focus_coverage(const Bitext& bitext, const FocusSet& focus,
                                     const std::vector<VersePair>& pairs, Side side) {
  std::map<std::string, WordCoverage, std::less<>> counts;
  for (const auto& [word, freq] : focus) counts[word].word = word;
  auto tally = [&](const std::vector<VersePair>& source, std::size_t WordCoverage::*field) {
    for (const auto& pair : source) {
      for (const auto& tok : pair.side(side)) {
        if (tok.kind != TokenKind::word) continue;
        auto it = counts.find(tok.surface);
        if (it != counts.end()) ++(it->second.*field);
      }
    }
  };
  tally(bitext.pairs, &WordCoverage::in_corpus);
  tally(pairs, &WordCoverage::in_sample);

  CoverageReport report;
  std::set<std::string> ids;
  for (const auto& pair : pairs) {
    if (!ids.insert(pair.verse_id).second) ++report.duplicate_pairs;
  }
  for (auto& [word, cov] : counts) report.words.push_back(std::move(cov));
  return report;
}

void write_focus_set(std::ostream& out, const FocusSet& focus) {
  std::vector<std::pair<unsigned, std::string_view>> rows;
  rows.reserve(focus.size());
  for (const auto& [word, freq] : focus) rows.emplace_back(freq, word);
  std::sort(rows.begin(), rows.end());
  for (const auto& [freq, word] : rows) out << word << '\t' << freq << '\n';
}

FocusSet read_focus_set(const std::filesystem::path& path) {
  FocusSet focus;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError("expected word<TAB>frequency", lineno);
    unsigned freq = 0;
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, freq);
    if (ec != std::errc() || ptr != last || freq == 0) {
      throw FormatError("bad frequency '" + line.substr(tab + 1) + "'", lineno);
    }
    if (!focus.emplace(line.substr(0, tab), freq).second) {
      throw FormatError("duplicate focus word '" + line.substr(0, tab) + "'", lineno);
    }
  }
  return focus;
}

}  // namespace goldalign
