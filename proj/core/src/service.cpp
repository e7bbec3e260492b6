#include "goldalign/service.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "goldalign/atomic_file.hpp"

namespace goldalign {

namespace fs = std::filesystem;

struct AnnotationService::Session {
  std::mutex mutex;
  std::string annotator;
  /// Indexed by ordinal - 1. Always unfinalized copies.
  std::vector<std::optional<Annotation>> working;
  std::vector<bool> finalized;
  /// Last state written to disk, as records.
  std::vector<AlignmentRecord> persisted;
  std::vector<std::uint64_t> versions;
  std::size_t current = 1;
  double elapsed = 0;
  std::optional<double> last_request;
};

std::shared_ptr<const VerseSet> load_verse_set(const fs::path& dir, const ProfilePair& profiles) {
  auto set = std::make_shared<VerseSet>();
  set->id = dir.filename().string();
  set->dir = dir;
  const fs::path ids = dir / "pairs.ids";
  set->bitext = load_bitext(dir / "pairs.e", dir / "pairs.f",
                            fs::exists(ids) ? std::optional<fs::path>(ids) : std::nullopt, profiles);
  return set;
}

std::vector<AnnotatorSet> load_annotator_sets(const VerseSet& set, bool allow_drafts) {
  std::vector<fs::path> files;
  const fs::path dir = set.dir / "annotations";
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".align") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, std::map<std::size_t, Annotation>> by_annotator;
  for (const auto& file : files) {
    for (auto& rec : read_alignment_file(file, set.bitext.pairs)) {
      if (!rec.annotation.finalized && !allow_drafts) {
        throw IncompleteAnnotation(file.string() + ": record " + std::to_string(rec.ordinal) +
                                   " ('" + rec.annotation.verse_id + "') is a draft");
      }
      auto& slot = by_annotator[rec.annotation.annotator_id];
      if (!slot.emplace(rec.ordinal, std::move(rec.annotation)).second) {
        throw FormatError(file.string() + ": verse " + std::to_string(rec.ordinal) +
                          " annotated twice by the same annotator");
      }
    }
  }
  std::vector<AnnotatorSet> out;
  for (auto& [annotator, records] : by_annotator) {
    AnnotatorSet a;
    a.annotator = annotator;
    for (auto& [ordinal, ann] : records) a.annotations.push_back(std::move(ann));
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

void check_annotator(const std::string& annotator) {
  const bool ok = !annotator.empty() && annotator.front() != '.' &&
                  std::all_of(annotator.begin(), annotator.end(), [](char c) {
                    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                           (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
                  });
  if (!ok) {
    throw ArgumentError("annotator id must be non-empty [A-Za-z0-9_.-], got '" + annotator + "'");
  }
}

double steady_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

}  // namespace

fs::path annotation_path(const fs::path& set_dir, const std::string& annotator) {
  check_annotator(annotator);
  return set_dir / "annotations" / (annotator + ".align");
}

fs::path session_path(const fs::path& set_dir, const std::string& annotator) {
  check_annotator(annotator);
  return set_dir / "annotations" / (annotator + ".session.json");
}

AnnotationService::AnnotationService(ServiceConfig config) : config_(std::move(config)) {
  if (!config_.clock) config_.clock = steady_seconds;
  if (!fs::is_directory(config_.data_dir)) {
    throw InputError("data directory " + config_.data_dir.string() + " does not exist");
  }
  for (const auto& entry : fs::directory_iterator(config_.data_dir)) {
    if (!entry.is_directory() || !fs::exists(entry.path() / "pairs.e")) continue;
    auto set = load_verse_set(entry.path(), config_.profiles);
    sets_.emplace(set->id, std::move(set));
  }
}

AnnotationService::~AnnotationService() = default;

std::vector<SetSummary> AnnotationService::list_sets() const {
  std::vector<SetSummary> out;
  for (const auto& [id, set] : sets_) out.push_back({id, set->bitext.pairs.size()});
  return out;
}

std::shared_ptr<const VerseSet> AnnotationService::find_set(const std::string& set) const {
  const auto it = sets_.find(set);
  if (it == sets_.end()) throw NotFound("no verse set '" + set + "'");
  return it->second;
}

AnnotationService::Session& AnnotationService::session(const VerseSet& set,
                                                       const std::string& annotator) {
  check_annotator(annotator);
  std::lock_guard lock(sessions_mutex_);
  auto& slot = sessions_[{set.id, annotator}];
  if (slot) return *slot;

  auto s = std::make_unique<Session>();
  const std::size_t n = set.bitext.pairs.size();
  s->annotator = annotator;
  s->working.resize(n);
  s->finalized.assign(n, false);
  s->versions.assign(n, 0);

  const fs::path align = annotation_path(set.dir, annotator);
  if (fs::exists(align)) {
    s->persisted = read_alignment_file(align, set.bitext.pairs);
    for (const auto& rec : s->persisted) {
      if (rec.annotation.annotator_id != annotator) {
        throw FormatError(align.string() + ": record " + std::to_string(rec.ordinal) +
                          " belongs to '" + rec.annotation.annotator_id + "'");
      }
      Annotation ann = rec.annotation;
      s->finalized[rec.ordinal - 1] = ann.finalized;
      ann.finalized = false;
      s->working[rec.ordinal - 1] = std::move(ann);
    }
  }
  const fs::path meta = session_path(set.dir, annotator);
  if (fs::exists(meta)) {
    std::ifstream in(meta);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw FormatError(meta.string() + ": not valid JSON");
    s->current = std::clamp<std::size_t>(j.value("current", std::size_t{1}), 1, std::max<std::size_t>(n, 1));
    s->elapsed = j.value("elapsed_seconds", 0.0);
    const auto versions = j.value("versions", std::vector<std::uint64_t>{});
    for (std::size_t i = 0; i < std::min(n, versions.size()); ++i) s->versions[i] = versions[i];
  }
  slot = std::move(s);
  return *slot;
}

void AnnotationService::touch(Session& s) {
  const double now = config_.clock();
  if (s.last_request) {
    const double gap = now - *s.last_request;
    if (gap > 0 && gap <= config_.idle_cutoff_seconds) s.elapsed += gap;
  }
  if (!s.last_request || now > *s.last_request) s.last_request = now;
}

PairView AnnotationService::view(const VerseSet& set, const Session& s, std::size_t ordinal) const {
  PairView v;
  v.set_id = set.id;
  v.ordinal = ordinal;
  v.total = set.bitext.pairs.size();
  v.pair = &set.bitext.pairs[ordinal - 1];
  v.annotation = s.working[ordinal - 1] ? *s.working[ordinal - 1]
                                        : Annotation::fresh(*v.pair, s.annotator);
  v.finalized = s.finalized[ordinal - 1];
  v.version = s.versions[ordinal - 1];
  v.coverage = completeness(v.annotation);
  return v;
}

void AnnotationService::persist_meta(const VerseSet& set, const Session& s) {
  nlohmann::json j;
  j["current"] = s.current;
  j["elapsed_seconds"] = s.elapsed;
  j["versions"] = s.versions;
  fs::create_directories(set.dir / "annotations");
  write_file_atomic(session_path(set.dir, s.annotator), j.dump() + "\n");
}

void AnnotationService::persist(const VerseSet& set, Session& s) {
  std::vector<AlignmentRecord> records;
  for (std::size_t i = 0; i < s.working.size(); ++i) {
    if (!s.working[i]) continue;
    Annotation ann = *s.working[i];
    ann.finalized = s.finalized[i];
    records.push_back({i + 1, std::move(ann)});
  }
  fs::create_directories(set.dir / "annotations");
  write_file_atomic(annotation_path(set.dir, s.annotator),
                    format_alignment(records, WriteOptions{.draft = true}));
  s.persisted = std::move(records);
  persist_meta(set, s);
}

namespace {

void check_ordinal(const VerseSet& set, std::size_t ordinal) {
  if (ordinal < 1 || ordinal > set.bitext.pairs.size()) {
    throw NotFound("set '" + set.id + "' has no pair " + std::to_string(ordinal) + " (1.." +
                   std::to_string(set.bitext.pairs.size()) + ")");
  }
}

}  // namespace

PairView AnnotationService::fetch(const std::string& set_id, std::size_t ordinal,
                                  const std::string& annotator) {
  const auto set = find_set(set_id);
  check_ordinal(*set, ordinal);
  Session& s = session(*set, annotator);
  std::lock_guard lock(s.mutex);
  touch(s);
  return view(*set, s, ordinal);
}

template <typename Edit>
PairView AnnotationService::edit(const std::string& set_id, std::size_t ordinal,
                                 const std::string& annotator,
                                 std::optional<std::uint64_t> expected_version, Edit&& fn) {
  const auto set = find_set(set_id);
  check_ordinal(*set, ordinal);
  Session& s = session(*set, annotator);
  std::lock_guard lock(s.mutex);
  touch(s);
  const std::uint64_t current = s.versions[ordinal - 1];
  if (expected_version && *expected_version != current) {
    throw StaleVersion(current, "stale write to pair " + std::to_string(ordinal) + ": version " +
                                    std::to_string(*expected_version) + ", current " +
                                    std::to_string(current));
  }
  const VersePair& pair = set->bitext.pairs[ordinal - 1];
  const Annotation base =
      s.working[ordinal - 1] ? *s.working[ordinal - 1] : Annotation::fresh(pair, annotator);
  Annotation next = fn(base, pair);
  next.finalized = false;
  s.working[ordinal - 1] = std::move(next);
  s.finalized[ordinal - 1] = false;
  s.versions[ordinal - 1] = current + 1;
  persist_meta(*set, s);
  return view(*set, s, ordinal);
}

PairView AnnotationService::save(const std::string& set, std::size_t ordinal,
                                 const std::string& annotator, std::uint64_t expected_version,
                                 std::vector<LinkGroup> groups, std::vector<NotTranslated> nt_marks) {
  return edit(set, ordinal, annotator, expected_version,
              [&](const Annotation& base, const VersePair&) {
                Annotation ann = base;
                ann.groups = std::move(groups);
                ann.nt_marks = std::move(nt_marks);
                return canonicalize(std::move(ann));
              });
}

PairView AnnotationService::link(const std::string& set, std::size_t ordinal,
                                 const std::string& annotator,
                                 std::optional<std::uint64_t> expected_version, const PositionSet& e,
                                 const PositionSet& f) {
  return edit(set, ordinal, annotator, expected_version,
              [&](const Annotation& base, const VersePair&) { return apply_link(base, e, f); });
}

PairView AnnotationService::not_translated(const std::string& set, std::size_t ordinal,
                                           const std::string& annotator,
                                           std::optional<std::uint64_t> expected_version, Side side,
                                           Position position) {
  return edit(set, ordinal, annotator, expected_version,
              [&](const Annotation& base, const VersePair&) {
                return mark_not_translated(base, side, position);
              });
}

PairView AnnotationService::reset(const std::string& set, std::size_t ordinal,
                                  const std::string& annotator,
                                  std::optional<std::uint64_t> expected_version) {
  return edit(set, ordinal, annotator, expected_version,
              [&](const Annotation&, const VersePair& pair) {
                return Annotation::fresh(pair, annotator);
              });
}

PairView AnnotationService::advance(const std::string& set_id, std::size_t ordinal,
                                    const std::string& annotator) {
  const auto set = find_set(set_id);
  check_ordinal(*set, ordinal);
  Session& s = session(*set, annotator);
  std::lock_guard lock(s.mutex);
  touch(s);
  const VersePair& pair = set->bitext.pairs[ordinal - 1];
  const Annotation ann =
      s.working[ordinal - 1] ? *s.working[ordinal - 1] : Annotation::fresh(pair, annotator);
  Coverage cov = completeness(ann);
  if (!cov.complete()) {
    std::ostringstream msg;
    msg << "pair " << ordinal << " ('" << pair.verse_id << "') has unaccounted positions:";
    for (Position p : cov.missing_e) msg << " E" << p;
    for (Position p : cov.missing_f) msg << " F" << p;
    throw AdvanceRejected(std::move(cov), msg.str());
  }
  s.working[ordinal - 1] = ann;
  s.finalized[ordinal - 1] = true;
  const std::size_t next = std::min(ordinal + 1, set->bitext.pairs.size());
  s.current = next;
  persist(*set, s);
  return view(*set, s, next);
}

PairView AnnotationService::previous(const std::string& set_id, std::size_t ordinal,
                                     const std::string& annotator) {
  const auto set = find_set(set_id);
  check_ordinal(*set, ordinal);
  Session& s = session(*set, annotator);
  std::lock_guard lock(s.mutex);
  touch(s);
  const std::size_t prev = ordinal > 1 ? ordinal - 1 : 1;
  s.current = prev;
  persist(*set, s);
  return view(*set, s, prev);
}

PairView AnnotationService::reload(const std::string& set_id, std::size_t ordinal,
                                   const std::string& annotator) {
  const auto set = find_set(set_id);
  check_ordinal(*set, ordinal);
  Session& s = session(*set, annotator);
  std::lock_guard lock(s.mutex);
  touch(s);
  const std::size_t n = set->bitext.pairs.size();
  std::vector<std::optional<Annotation>> working(n);
  std::vector<bool> finalized(n, false);
  for (const auto& rec : s.persisted) {
    Annotation ann = rec.annotation;
    finalized[rec.ordinal - 1] = ann.finalized;
    ann.finalized = false;
    working[rec.ordinal - 1] = std::move(ann);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (working[i] != s.working[i] || finalized[i] != s.finalized[i]) ++s.versions[i];
  }
  s.working = std::move(working);
  s.finalized = std::move(finalized);
  s.current = ordinal;
  persist(*set, s);
  return view(*set, s, ordinal);
}

Progress AnnotationService::progress(const std::string& set_id, const std::string& annotator) {
  const auto set = find_set(set_id);
  Session& s = session(*set, annotator);
  std::lock_guard lock(s.mutex);
  touch(s);
  Progress p;
  p.set_id = set->id;
  p.annotator = annotator;
  p.total = set->bitext.pairs.size();
  p.finalized = static_cast<std::size_t>(std::count(s.finalized.begin(), s.finalized.end(), true));
  p.current = s.current;
  p.elapsed_seconds = s.elapsed;
  return p;
}

}  // namespace goldalign
