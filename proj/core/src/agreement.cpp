#include "goldalign/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "goldalign/error.hpp"
#include "utf8.hpp"

namespace goldalign {

double set_size(const WeightedLinkSet& x) {
  double total = 0;
  for (const auto& [key, w] : x) total += w;
  return total;
}

double intersection_size(const WeightedLinkSet& x, const WeightedLinkSet& y) {
  double total = 0;
  auto ix = x.begin();
  auto iy = y.begin();
  while (ix != x.end() && iy != y.end()) {
    if (ix->first < iy->first) {
      ++ix;
    } else if (iy->first < ix->first) {
      ++iy;
    } else {
      total += std::min(ix->second, iy->second);
      ++ix;
      ++iy;
    }
  }
  return total;
}

double precision(const WeightedLinkSet& x, const WeightedLinkSet& y) {
  const double denom = set_size(x);
  if (denom <= 0) throw UndefinedRate("precision of an empty test set");
  return intersection_size(x, y) / denom;
}

double recall(const WeightedLinkSet& x, const WeightedLinkSet& y) {
  const double denom = set_size(y);
  if (denom <= 0) throw UndefinedRate("recall against an empty reference set");
  return intersection_size(x, y) / denom;
}

double dice(const WeightedLinkSet& x, const WeightedLinkSet& y) {
  const double denom = set_size(x) + set_size(y);
  if (denom <= 0) throw UndefinedRate("Dice of two empty sets");
  return 2 * intersection_size(x, y) / denom;
}

namespace {

using Endpoint = std::pair<std::size_t, Position>;  // (segment, position)

std::set<LinkKey> as_keys(const std::set<LinkToken>& tokens) {
  std::set<LinkKey> keys;
  for (const auto& t : tokens) keys.insert({0, t});
  return keys;
}

}  // namespace

WeightedLinkSet fanout_weights(const std::set<LinkKey>& tokens) {
  std::map<Endpoint, std::size_t> fan_e;
  std::map<Endpoint, std::size_t> fan_f;
  for (const auto& k : tokens) {
    if (k.token.e != 0) ++fan_e[{k.segment, k.token.e}];
    if (k.token.f != 0) ++fan_f[{k.segment, k.token.f}];
  }
  WeightedLinkSet out;
  for (const auto& k : tokens) {
    const std::size_t fe = k.token.e != 0 ? fan_e.at({k.segment, k.token.e}) : 1;
    const std::size_t ff = k.token.f != 0 ? fan_f.at({k.segment, k.token.f}) : 1;
    out.emplace(k, 1.0 / static_cast<double>(std::max(fe, ff)));
  }
  return out;
}

WeightedLinkSet fanout_weights(const std::set<LinkToken>& tokens) {
  return fanout_weights(as_keys(tokens));
}

WeightedLinkSet directional_weights(const std::set<LinkKey>& tokens, Direction direction) {
  auto source = [direction](const LinkKey& k) {
    return direction == Direction::f_to_e ? k.token.f : k.token.e;
  };
  std::map<Endpoint, std::size_t> emitted;
  for (const auto& k : tokens) {
    if (source(k) != 0) ++emitted[{k.segment, source(k)}];
  }
  WeightedLinkSet out;
  for (const auto& k : tokens) {
    const std::size_t n = source(k) != 0 ? emitted.at({k.segment, source(k)}) : 1;
    out.emplace(k, 1.0 / static_cast<double>(n));
  }
  return out;
}

WeightedLinkSet directional_weights(const std::set<LinkToken>& tokens, Direction direction) {
  return directional_weights(as_keys(tokens), direction);
}

std::set<LinkKey> link_keys(const Annotation& ann, std::size_t segment, bool null_links) {
  std::set<LinkKey> keys;
  for (const auto& t : expand_link_tokens(ann)) keys.insert({segment, t});
  if (null_links) {
    for (const auto& nt : ann.nt_marks) {
      const LinkToken t = nt.side == Side::E ? LinkToken{nt.position, 0} : LinkToken{0, nt.position};
      keys.insert({segment, t});
    }
  }
  return keys;
}

namespace {

double agreement_of(const std::set<LinkKey>& a, const std::set<LinkKey>& b,
                    const AgreementOptions& options) {
  if (options.mode == WeightingMode::fanout) {
    return dice(fanout_weights(a), fanout_weights(b));
  }
  const double fe = dice(directional_weights(a, Direction::f_to_e),
                         directional_weights(b, Direction::f_to_e));
  const double ef = dice(directional_weights(a, Direction::e_to_f),
                         directional_weights(b, Direction::e_to_f));
  return (fe + ef) / 2;
}

}  // namespace

double pair_agreement(std::span<const Annotation> a, std::span<const Annotation> b,
                      const AgreementOptions& options) {
  std::map<std::string_view, const Annotation*> by_id;
  for (const auto& ann : b) {
    if (!by_id.emplace(ann.verse_id, &ann).second) {
      throw InputError("verse '" + ann.verse_id + "' annotated twice by '" + ann.annotator_id + "'");
    }
  }
  if (a.size() != b.size()) {
    throw InputError("annotators cover different verse sets (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + " verses)");
  }
  std::set<LinkKey> keys_a;
  std::set<LinkKey> keys_b;
  for (std::size_t seg = 0; seg < a.size(); ++seg) {
    const auto it = by_id.find(a[seg].verse_id);
    if (it == by_id.end()) {
      throw InputError("verse '" + a[seg].verse_id + "' missing from the second annotator");
    }
    keys_a.merge(link_keys(a[seg], seg, options.null_links));
    keys_b.merge(link_keys(*it->second, seg, options.null_links));
  }
  return agreement_of(keys_a, keys_b, options);
}

// ---------------------------------------------------------------------------
// Pooling

PoolingPlan::PoolingPlan(std::vector<std::vector<std::size_t>> pools) : pools_(std::move(pools)) {
  std::set<std::size_t> seen;
  for (const auto& pool : pools_) {
    if (pool.empty()) throw ArgumentError("empty pool in pooling plan");
    for (std::size_t v : pool) {
      if (!seen.insert(v).second) {
        throw ArgumentError("verse index " + std::to_string(v) + " is in more than one pool");
      }
    }
  }
}

PoolingPlan PoolingPlan::contiguous(std::size_t verse_count, std::size_t pool_count,
                                    std::size_t pool_size) {
  if (pool_count == 0 || pool_size == 0) throw ArgumentError("pool count and size must be positive");
  if (pool_count * pool_size > verse_count) {
    throw ArgumentError(std::to_string(pool_count) + " pools of " + std::to_string(pool_size) +
                        " need " + std::to_string(pool_count * pool_size) + " verses, have " +
                        std::to_string(verse_count));
  }
  std::vector<std::vector<std::size_t>> pools(pool_count);
  for (std::size_t p = 0; p < pool_count; ++p) {
    for (std::size_t k = 0; k < pool_size; ++k) pools[p].push_back(p * pool_size + k);
  }
  return PoolingPlan(std::move(pools));
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  out.n = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(out.n - 1));
  }
  return out;
}

const PairCell& AgreementReport::cell(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  for (const auto& c : cells) {
    if (c.first == i && c.second == j) return c;
  }
  throw ArgumentError("no cell for annotators " + std::to_string(i) + "," + std::to_string(j));
}

AgreementReport pooled_agreement(std::span<const AnnotatorSet> annotators,
                                 std::span<const std::string> verse_order, const PoolingPlan& plan,
                                 const AgreementOptions& options) {
  if (annotators.size() < 2) throw ArgumentError("agreement needs at least two annotators");
  for (const auto& pool : plan.pools()) {
    for (std::size_t v : pool) {
      if (v >= verse_order.size()) {
        throw ArgumentError("pool refers to verse index " + std::to_string(v) + " of " +
                            std::to_string(verse_order.size()));
      }
    }
  }

  // keys[annotator][pool]: that annotator's links pooled over the pool.
  std::vector<std::vector<std::set<LinkKey>>> keys(annotators.size());
  for (std::size_t a = 0; a < annotators.size(); ++a) {
    std::unordered_map<std::string_view, const Annotation*> by_id;
    for (const auto& ann : annotators[a].annotations) by_id.emplace(ann.verse_id, &ann);
    for (const auto& pool : plan.pools()) {
      std::set<LinkKey> pooled;
      for (std::size_t v : pool) {
        const auto it = by_id.find(verse_order[v]);
        if (it == by_id.end()) {
          throw InputError("annotator '" + annotators[a].annotator + "' has no annotation for verse '" +
                           verse_order[v] + "'");
        }
        pooled.merge(link_keys(*it->second, v, options.null_links));
      }
      keys[a].push_back(std::move(pooled));
    }
  }

  AgreementReport report;
  report.options = options;
  for (const auto& a : annotators) report.annotators.push_back(a.annotator);
  std::vector<std::vector<double>> by_annotator(annotators.size());
  std::vector<double> all;
  for (std::size_t i = 0; i < annotators.size(); ++i) {
    for (std::size_t j = i + 1; j < annotators.size(); ++j) {
      PairCell cell;
      cell.first = i;
      cell.second = j;
      for (std::size_t p = 0; p < plan.pools().size(); ++p) {
        double rate = 0;
        try {
          rate = 100.0 * agreement_of(keys[i][p], keys[j][p], options);
        } catch (const UndefinedRate&) {
          throw UndefinedRate("pool " + std::to_string(p + 1) + " has no links for annotators '" +
                              annotators[i].annotator + "' and '" + annotators[j].annotator + "'");
        }
        cell.pool_rates.push_back(rate);
        by_annotator[i].push_back(rate);
        by_annotator[j].push_back(rate);
        all.push_back(rate);
      }
      cell.summary = mean_std(cell.pool_rates);
      report.cells.push_back(std::move(cell));
    }
  }
  for (const auto& rates : by_annotator) report.per_annotator.push_back(mean_std(rates));
  report.grand = mean_std(all);
  return report;
}

namespace {

std::string format_cell(const MeanStd& m) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << m.mean << " ± " << m.stddev;
  return out.str();
}

/// Display width, counting UTF-8 code points.
std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

void pad(std::ostream& out, std::string_view text, std::size_t width) {
  out << text;
  for (std::size_t w = display_width(text); w < width; ++w) out << ' ';
}

}  // namespace

void write_report_table(std::ostream& out, const AgreementReport& report) {
  const std::size_t n = report.annotators.size();
  std::size_t width = 16;
  for (const auto& name : report.annotators) width = std::max(width, display_width(name) + 2);
  const std::size_t label_width = std::max<std::size_t>(12, width);

  out << "agreement (" << (report.options.mode == WeightingMode::directional ? "directional" : "fanout")
      << (report.content_only ? ", content words only" : "")
      << (report.options.null_links ? ", NULL links" : "") << "), percent ± sample stddev\n";
  for (std::size_t j = 1; j < n; ++j) pad(out, report.annotators[j], width);
  out << "| ";
  pad(out, "annotator", label_width);
  out << "| mean\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) pad(out, j > i ? format_cell(report.cell(i, j).summary) : "", width);
    out << "| ";
    pad(out, report.annotators[i], label_width);
    out << "| " << format_cell(report.per_annotator[i]) << '\n';
  }
  for (std::size_t j = 1; j < n; ++j) pad(out, "", width);
  out << "| ";
  pad(out, "grand mean", label_width);
  out << "| " << format_cell(report.grand) << '\n';
}

void write_report_csv(std::ostream& out, const AgreementReport& report) {
  out << "pair,pool,rate\n";
  for (const auto& cell : report.cells) {
    for (std::size_t p = 0; p < cell.pool_rates.size(); ++p) {
      out << report.annotators[cell.first] << '-' << report.annotators[cell.second] << ',' << (p + 1)
          << ',' << std::fixed << std::setprecision(6) << cell.pool_rates[p] << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Content words

Stoplist::Stoplist(std::string language, std::unordered_set<std::string> words)
    : language_(std::move(language)) {
  for (const auto& w : words) words_.insert(detail::fold_case(w));
}

Stoplist Stoplist::load(const std::filesystem::path& path, std::string language) {
  std::unordered_set<std::string> words;
  for (auto line : read_lines(path)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    words.insert(line.substr(first, last - first + 1));
  }
  if (words.empty()) throw InputError("stoplist " + path.string() + " is empty");
  return Stoplist(std::move(language), std::move(words));
}

bool Stoplist::contains(std::string_view surface) const {
  return words_.contains(detail::fold_case(surface));
}

std::vector<Annotation> content_filter(std::span<const Annotation> annotations,
                                       const Stoplist& stop_e, const Stoplist& stop_f,
                                       const Bitext& bitext) {
  if (stop_e.empty() || stop_f.empty()) throw ArgumentError("content filtering needs both stoplists");
  std::unordered_map<std::string_view, const VersePair*> pairs;
  for (const auto& p : bitext.pairs) pairs.emplace(p.verse_id, &p);

  std::vector<Annotation> out;
  out.reserve(annotations.size());
  for (const auto& ann : annotations) {
    const auto it = pairs.find(ann.verse_id);
    if (it == pairs.end()) throw InputError("verse '" + ann.verse_id + "' is not in the bitext");
    const VersePair& pair = *it->second;
    auto is_function = [&](Side side, Position p) {
      const auto& half = pair.side(side);
      if (p < 1 || p > half.size()) {
        throw RangeError("position " + std::to_string(p) + " outside verse '" + ann.verse_id + "'");
      }
      const Token& tok = half[p - 1];
      return tok.kind == TokenKind::punctuation ||
             (side == Side::E ? stop_e : stop_f).contains(tok.surface);
    };

    // A token survives iff neither endpoint is a function word, so a
    // group's survivors are exactly the cross product of its content words.
    Annotation filtered = ann;
    filtered.finalized = false;
    filtered.groups.clear();
    filtered.nt_marks.clear();
    for (const auto& g : ann.groups) {
      LinkGroup kept;
      for (Position p : g.e_positions) {
        if (!is_function(Side::E, p)) kept.e_positions.push_back(p);
      }
      for (Position p : g.f_positions) {
        if (!is_function(Side::F, p)) kept.f_positions.push_back(p);
      }
      if (!kept.e_positions.empty() && !kept.f_positions.empty()) {
        filtered.groups.push_back(std::move(kept));
      }
    }
    for (const auto& nt : ann.nt_marks) {
      if (!is_function(nt.side, nt.position)) filtered.nt_marks.push_back(nt);
    }
    out.push_back(std::move(filtered));
  }
  return out;
}

}  // namespace goldalign
