#include "goldalign/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "goldalign/error.hpp"

namespace goldalign {

namespace {

/// Translation types one annotator gave to the word at `position`.
std::set<std::string> translations_of(const Annotation& ann, const VersePair& pair, Side side,
                                      Position position) {
  std::set<std::string> out;
  const Side other = opposite(side);
  for (const auto& g : ann.groups) {
    const PositionSet& mine = side == Side::E ? g.e_positions : g.f_positions;
    if (!std::binary_search(mine.begin(), mine.end(), position)) continue;
    const PositionSet& theirs = side == Side::E ? g.f_positions : g.e_positions;
    for (Position p : theirs) {
      const Token& tok = pair.side(other).at(p - 1);
      if (tok.kind == TokenKind::word) out.insert(tok.surface);
    }
    // Linked only to punctuation: nothing to translate to.
    if (out.empty()) out.emplace(kNoTranslation);
    return out;
  }
  for (const auto& nt : ann.nt_marks) {
    if (nt.side == side && nt.position == position) {
      out.emplace(kNoTranslation);
      return out;
    }
  }
  return out;
}

}  // namespace

Lexicon extract_gold_lexicon(std::span<const AnnotatorSet> annotators, const FocusSet& focus,
                             const Bitext& bitext, Side side, GoldMode mode) {
  std::vector<std::unordered_map<std::string_view, const Annotation*>> by_id(annotators.size());
  for (std::size_t a = 0; a < annotators.size(); ++a) {
    for (const auto& ann : annotators[a].annotations) by_id[a].emplace(ann.verse_id, &ann);
  }

  std::map<std::string, std::set<std::string>, std::less<>> gold;
  for (const auto& [word, freq] : focus) gold[word];

  for (const auto& pair : bitext.pairs) {
    for (const auto& tok : pair.side(side)) {
      if (tok.kind != TokenKind::word) continue;
      const auto entry = gold.find(tok.surface);
      if (entry == gold.end()) continue;

      std::map<std::string, std::size_t> votes;
      for (std::size_t a = 0; a < annotators.size(); ++a) {
        const auto it = by_id[a].find(pair.verse_id);
        if (it == by_id[a].end()) {
          throw InputError("coverage: annotator '" + annotators[a].annotator +
                           "' did not annotate verse '" + pair.verse_id + "' (focus word '" +
                           tok.surface + "')");
        }
        for (const auto& t : translations_of(*it->second, pair, side, tok.position)) ++votes[t];
      }
      for (const auto& [translation, count] : votes) {
        if (mode == GoldMode::union_of_annotators || 2 * count > annotators.size()) {
          entry->second.insert(translation);
        }
      }
    }
  }

  Lexicon out;
  for (const auto& [word, translations] : gold) {
    LexiconEntry e;
    e.headword = word;
    for (const auto& t : translations) e.translations.emplace(t, 1.0);
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

WeightedLinkSet as_fuzzy_set(const LexiconEntry* entry, bool unit_weights,
                             std::map<std::string, std::size_t>& ids) {
  WeightedLinkSet out;
  if (entry == nullptr) return out;
  for (const auto& [translation, weight] : entry->translations) {
    const auto id = ids.try_emplace(translation, ids.size()).first->second;
    out.emplace(LinkKey{id, {}}, unit_weights ? 1.0 : weight);
  }
  return out;
}

}  // namespace

LexiconScore evaluate_lexicon(const Lexicon& candidate, const Lexicon& gold) {
  std::map<std::string_view, const LexiconEntry*> cand;
  for (const auto& e : candidate) cand.emplace(e.headword, &e);

  LexiconScore score;
  double shared = 0;
  double cand_total = 0;
  double gold_total = 0;
  std::set<std::string_view> gold_heads;
  for (const auto& g : gold) {
    gold_heads.insert(g.headword);
    const auto it = cand.find(g.headword);
    std::map<std::string, std::size_t> ids;
    const WeightedLinkSet x = as_fuzzy_set(it == cand.end() ? nullptr : it->second, false, ids);
    const WeightedLinkSet y = as_fuzzy_set(&g, true, ids);

    EntryScore entry;
    entry.headword = g.headword;
    const double inter = intersection_size(x, y);
    const double sx = set_size(x);
    const double sy = set_size(y);
    if (sx > 0) entry.precision = inter / sx;
    if (sy > 0) entry.recall = inter / sy;
    if (sx + sy > 0) entry.dice = 2 * inter / (sx + sy);
    shared += inter;
    cand_total += sx;
    gold_total += sy;
    score.entries.push_back(std::move(entry));
  }
  for (const auto& e : candidate) {
    if (!gold_heads.contains(e.headword)) score.unmatched.push_back(e.headword);
  }
  score.precision = cand_total > 0 ? shared / cand_total : 0;
  score.recall = gold_total > 0 ? shared / gold_total : 0;
  score.dice = cand_total + gold_total > 0 ? 2 * shared / (cand_total + gold_total) : 0;
  return score;
}

Lexicon read_lexicon(std::istream& in) {
  std::map<std::string, LexiconEntry, std::less<>> entries;
  std::vector<std::string> order;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const auto tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() || fields[1].empty()) {
      throw FormatError("expected headword<TAB>translation[<TAB>weight]", lineno);
    }
    double weight = 1.0;
    if (fields.size() == 3) {
      const auto& w = fields[2];
      const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
      if (ec != std::errc() || ptr != w.data() + w.size() || !(weight > 0) || !std::isfinite(weight)) {
        throw FormatError("weight must be a positive number, got '" + w + "'", lineno);
      }
    }
    auto [it, inserted] = entries.try_emplace(fields[0]);
    if (inserted) {
      it->second.headword = fields[0];
      order.push_back(fields[0]);
    }
    if (!it->second.translations.emplace(fields[1], weight).second) {
      throw FormatError("duplicate translation '" + fields[1] + "' for '" + fields[0] + "'", lineno);
    }
  }
  Lexicon out;
  for (const auto& head : order) out.push_back(std::move(entries.at(head)));
  return out;
}

Lexicon read_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_lexicon(in);
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
  for (const auto& entry : lexicon) {
    for (const auto& [translation, weight] : entry.translations) {
      out << entry.headword << '\t' << translation;
      if (weight != 1.0) out << '\t' << std::setprecision(17) << weight;
      out << '\n';
    }
  }
}

}  // namespace goldalign
