#include "goldalign/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "goldalign/error.hpp"

namespace goldalign {

Annotation Annotation::fresh(const VersePair& pair, std::string annotator_id) {
  Annotation ann;
  ann.verse_id = pair.verse_id;
  ann.annotator_id = std::move(annotator_id);
  ann.e_length = pair.side_e.size();
  ann.f_length = pair.side_f.size();
  return ann;
}

namespace {

std::size_t length_of(const Annotation& ann, Side side) {
  return side == Side::E ? ann.e_length : ann.f_length;
}

void check_range(const Annotation& ann, Side side, Position p, std::size_t line = 0) {
  if (p < 1 || p > length_of(ann, side)) {
    throw RangeError("position " + std::to_string(p) + " outside " +
                         std::string(1, side_letter(side)) + " half of '" + ann.verse_id +
                         "' (1.." + std::to_string(length_of(ann, side)) + ")",
                     line);
  }
}

PositionSet normalized(PositionSet set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

bool contains(const PositionSet& set, Position p) {
  return std::binary_search(set.begin(), set.end(), p);
}

bool intersects(const PositionSet& a, const PositionSet& b) {
  return std::any_of(a.begin(), a.end(), [&](Position p) { return contains(b, p); });
}

void sort_canonical(Annotation& ann) {
  std::sort(ann.groups.begin(), ann.groups.end(), [](const LinkGroup& a, const LinkGroup& b) {
    return a.e_positions.front() < b.e_positions.front();
  });
  std::sort(ann.nt_marks.begin(), ann.nt_marks.end());
}

/// Drops every group and mark that touches the given positions.
void supplant(Annotation& ann, const PositionSet& e_set, const PositionSet& f_set) {
  std::erase_if(ann.groups, [&](const LinkGroup& g) {
    return intersects(g.e_positions, e_set) || intersects(g.f_positions, f_set);
  });
  std::erase_if(ann.nt_marks, [&](const NotTranslated& nt) {
    return contains(nt.side == Side::E ? e_set : f_set, nt.position);
  });
}

void require_editable(const Annotation& ann) {
  if (ann.finalized) {
    throw ArgumentError("annotation of '" + ann.verse_id + "' by '" + ann.annotator_id +
                        "' is finalized");
  }
}

std::string join(const PositionSet& set) {
  std::string out;
  for (Position p : set) {
    if (!out.empty()) out.push_back(',');
    out += std::to_string(p);
  }
  return out;
}

}  // namespace

Annotation apply_link(const Annotation& ann, const PositionSet& e_set, const PositionSet& f_set) {
  require_editable(ann);
  if (e_set.empty() || f_set.empty()) {
    throw ArgumentError("a link needs at least one position on each side");
  }
  LinkGroup group{normalized(e_set), normalized(f_set)};
  for (Position p : group.e_positions) check_range(ann, Side::E, p);
  for (Position p : group.f_positions) check_range(ann, Side::F, p);

  Annotation out = ann;
  supplant(out, group.e_positions, group.f_positions);
  out.groups.push_back(std::move(group));
  sort_canonical(out);
  return out;
}

Annotation mark_not_translated(const Annotation& ann, Side side, Position position) {
  require_editable(ann);
  check_range(ann, side, position);
  Annotation out = ann;
  const PositionSet selected{position};
  supplant(out, side == Side::E ? selected : PositionSet{}, side == Side::F ? selected : PositionSet{});
  out.nt_marks.push_back({side, position});
  sort_canonical(out);
  return out;
}

Coverage completeness(const Annotation& ann) {
  std::vector<bool> seen_e(ann.e_length + 1, false);
  std::vector<bool> seen_f(ann.f_length + 1, false);
  auto mark = [](std::vector<bool>& seen, Position p) {
    if (p < seen.size()) seen[p] = true;
  };
  for (const auto& g : ann.groups) {
    for (Position p : g.e_positions) mark(seen_e, p);
    for (Position p : g.f_positions) mark(seen_f, p);
  }
  for (const auto& nt : ann.nt_marks) mark(nt.side == Side::E ? seen_e : seen_f, nt.position);

  Coverage cov;
  for (Position p = 1; p <= ann.e_length; ++p) {
    if (!seen_e[p]) cov.missing_e.push_back(p);
  }
  for (Position p = 1; p <= ann.f_length; ++p) {
    if (!seen_f[p]) cov.missing_f.push_back(p);
  }
  return cov;
}

Annotation finalize(const Annotation& ann) {
  const Coverage cov = completeness(ann);
  if (!cov.complete()) {
    throw IncompleteAnnotation("verse '" + ann.verse_id + "' by '" + ann.annotator_id +
                               "' leaves positions unaccounted: e=" + join(cov.missing_e) +
                               " f=" + join(cov.missing_f));
  }
  Annotation out = ann;
  out.finalized = true;
  return out;
}

std::set<LinkToken> expand_link_tokens(const Annotation& ann) {
  std::set<LinkToken> tokens;
  for (const auto& g : ann.groups) {
    for (Position e : g.e_positions) {
      for (Position f : g.f_positions) tokens.insert({e, f});
    }
  }
  return tokens;
}

Annotation canonicalize(Annotation ann) {
  std::vector<int> owner_e(ann.e_length + 1, 0);
  std::vector<int> owner_f(ann.f_length + 1, 0);
  auto claim = [&](Side side, Position p) {
    check_range(ann, side, p);
    auto& owner = side == Side::E ? owner_e : owner_f;
    if (owner[p]++ > 0) {
      throw ArgumentError("position " + std::string(1, side_letter(side)) + std::to_string(p) +
                          " of '" + ann.verse_id + "' is claimed more than once");
    }
  };
  for (auto& g : ann.groups) {
    if (g.e_positions.empty() || g.f_positions.empty()) {
      throw ArgumentError("link group with an empty side in '" + ann.verse_id + "'");
    }
    g.e_positions = normalized(std::move(g.e_positions));
    g.f_positions = normalized(std::move(g.f_positions));
    for (Position p : g.e_positions) claim(Side::E, p);
    for (Position p : g.f_positions) claim(Side::F, p);
  }
  for (const auto& nt : ann.nt_marks) claim(nt.side, nt.position);
  sort_canonical(ann);
  return ann;
}

// ---------------------------------------------------------------------------
// Alignment file format

void write_alignment(std::ostream& out, std::span<const AlignmentRecord> records,
                     const WriteOptions& options) {
  bool first = true;
  for (const auto& record : records) {
    const Annotation ann = canonicalize(record.annotation);
    if (!ann.finalized) {
      if (!options.draft) {
        throw IncompleteAnnotation("record " + std::to_string(record.ordinal) + " ('" +
                                   ann.verse_id + "') is not finalized; write it as a draft");
      }
    } else if (!completeness(ann).complete()) {
      throw IncompleteAnnotation("record " + std::to_string(record.ordinal) + " ('" +
                                 ann.verse_id + "') is marked final but incomplete");
    }
    if (ann.annotator_id.empty() || ann.annotator_id.find_first_of(" \t\n") != std::string::npos) {
      throw ArgumentError("annotator id must be a non-empty word, got '" + ann.annotator_id + "'");
    }
    if (!first) out << '\n';
    first = false;
    out << "P " << record.ordinal << ' ' << ann.verse_id << ' ' << ann.annotator_id << '\n';
    if (!ann.finalized) out << "D\n";
    for (const auto& g : ann.groups) {
      out << "L e=" << join(g.e_positions) << " f=" << join(g.f_positions) << '\n';
    }
    for (const auto& nt : ann.nt_marks) {
      if (nt.side == Side::E) {
        out << "L e=" << nt.position << " f=0\n";
      } else {
        out << "L e=0 f=" << nt.position << '\n';
      }
    }
  }
}

std::string format_alignment(std::span<const AlignmentRecord> records, const WriteOptions& options) {
  std::ostringstream out;
  write_alignment(out, records, options);
  return out.str();
}

namespace {

Position parse_position(std::string_view text, std::size_t line) {
  Position value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw FormatError("bad position '" + std::string(text) + "'", line);
  }
  return value;
}

PositionSet parse_positions(std::string_view field, std::string_view key, std::size_t line) {
  if (!field.starts_with(key)) {
    throw FormatError("expected '" + std::string(key) + "...', got '" + std::string(field) + "'",
                      line);
  }
  field.remove_prefix(key.size());
  PositionSet out;
  while (true) {
    const auto comma = field.find(',');
    out.push_back(parse_position(field.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    field.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto next = line.find(' ', pos);
    out.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

struct PendingRecord {
  AlignmentRecord record;
  std::size_t header_line = 0;
  std::vector<std::pair<std::size_t, std::pair<Side, Position>>> claims;
};

void close_record(PendingRecord& pending, std::vector<AlignmentRecord>& out) {
  Annotation& ann = pending.record.annotation;
  // Per-line claim check so duplicate positions report the line that
  // repeats them.
  std::vector<bool> seen_e(ann.e_length + 1, false);
  std::vector<bool> seen_f(ann.f_length + 1, false);
  for (const auto& [line, claim] : pending.claims) {
    const auto [side, p] = claim;
    check_range(ann, side, p, line);
    auto& seen = side == Side::E ? seen_e : seen_f;
    if (seen[p]) {
      throw FormatError("position " + std::string(1, side_letter(side)) + std::to_string(p) +
                            " appears in more than one assertion",
                        line);
    }
    seen[p] = true;
  }
  ann = canonicalize(std::move(ann));
  if (ann.finalized) {
    const Coverage cov = completeness(ann);
    if (!cov.complete()) {
      throw FormatError("finalized record leaves positions unaccounted: e=" + join(cov.missing_e) +
                            " f=" + join(cov.missing_f),
                        pending.header_line);
    }
  }
  out.push_back(std::move(pending.record));
}

}  // namespace

std::vector<AlignmentRecord> read_alignment(std::istream& in, std::span<const VersePair> pairs) {
  std::vector<AlignmentRecord> out;
  std::optional<PendingRecord> pending;
  bool draft_allowed = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      if (pending) close_record(*pending, out);
      pending.reset();
      continue;
    }
    const auto fields = split_spaces(line);
    const std::string_view tag = fields.front();
    if (tag == "P") {
      if (pending) close_record(*pending, out);
      if (fields.size() < 4) throw FormatError("header needs ordinal, verse id and annotator", lineno);
      std::size_t ordinal = 0;
      const auto [ptr, ec] =
          std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), ordinal);
      if (ec != std::errc() || ptr != fields[1].data() + fields[1].size() || ordinal == 0) {
        throw FormatError("bad ordinal '" + std::string(fields[1]) + "'", lineno);
      }
      if (ordinal > pairs.size()) {
        throw RangeError("ordinal " + std::to_string(ordinal) + " exceeds the set's " +
                             std::to_string(pairs.size()) + " verse pairs",
                         lineno);
      }
      // Verse ids may contain spaces; the annotator id is the last field.
      const std::size_t id_begin = fields[2].data() - line.data();
      const std::size_t id_end = fields.back().data() - line.data() - 1;
      const std::string verse_id = line.substr(id_begin, id_end - id_begin);
      const VersePair& pair = pairs[ordinal - 1];
      if (verse_id != pair.verse_id) {
        throw FormatError("ordinal " + std::to_string(ordinal) + " is verse '" + pair.verse_id +
                              "', header says '" + verse_id + "'",
                          lineno);
      }
      pending.emplace();
      pending->header_line = lineno;
      pending->record.ordinal = ordinal;
      pending->record.annotation = Annotation::fresh(pair, std::string(fields.back()));
      pending->record.annotation.finalized = true;
      draft_allowed = true;
      continue;
    }
    if (!pending) throw FormatError("'" + std::string(tag) + "' line outside a record", lineno);
    Annotation& ann = pending->record.annotation;
    if (tag == "D" && fields.size() == 1) {
      if (!draft_allowed) throw FormatError("'D' must follow the header directly", lineno);
      ann.finalized = false;
    } else if (tag == "L" && fields.size() == 3) {
      const PositionSet e = parse_positions(fields[1], "e=", lineno);
      const PositionSet f = parse_positions(fields[2], "f=", lineno);
      const bool null_e = e.size() == 1 && e.front() == 0;
      const bool null_f = f.size() == 1 && f.front() == 0;
      if (null_e && null_f) throw FormatError("link between two NULL positions", lineno);
      if (null_f) {
        for (Position p : e) {
          ann.nt_marks.push_back({Side::E, p});
          pending->claims.push_back({lineno, {Side::E, p}});
        }
      } else if (null_e) {
        for (Position p : f) {
          ann.nt_marks.push_back({Side::F, p});
          pending->claims.push_back({lineno, {Side::F, p}});
        }
      } else {
        for (Position p : e) pending->claims.push_back({lineno, {Side::E, p}});
        for (Position p : f) pending->claims.push_back({lineno, {Side::F, p}});
        ann.groups.push_back({e, f});
      }
    } else if (tag == "N" && fields.size() == 2) {
      const bool is_e = fields[1].starts_with("e=");
      if (!is_e && !fields[1].starts_with("f=")) {
        throw FormatError("expected 'N e=<p>' or 'N f=<p>'", lineno);
      }
      const Side side = is_e ? Side::E : Side::F;
      const Position p = parse_position(fields[1].substr(2), lineno);
      ann.nt_marks.push_back({side, p});
      pending->claims.push_back({lineno, {side, p}});
    } else {
      throw FormatError("unrecognized line '" + line + "'", lineno);
    }
    draft_allowed = false;
  }
  if (pending) close_record(*pending, out);
  return out;
}

void write_alignment_file(const std::filesystem::path& path,
                          std::span<const AlignmentRecord> records, const WriteOptions& options) {
  const std::string text = format_alignment(records, options);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

std::vector<AlignmentRecord> read_alignment_file(const std::filesystem::path& path,
                                                 std::span<const VersePair> pairs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_alignment(in, pairs);
}

}  // namespace goldalign
