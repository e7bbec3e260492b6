#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "goldalign/agreement.hpp"
#include "goldalign/alignment.hpp"
#include "goldalign/bitext.hpp"
#include "goldalign/error.hpp"

namespace goldalign {

/// Unknown set, pair ordinal or annotator.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// A write based on an outdated version of a pair's annotation.
class StaleVersion : public Error {
 public:
  StaleVersion(std::uint64_t current, const std::string& what) : Error(what), current_(current) {}
  std::uint64_t current() const noexcept { return current_; }

 private:
  std::uint64_t current_;
};

/// Advance refused because the pair still has unaccounted positions.
class AdvanceRejected : public IncompleteAnnotation {
 public:
  AdvanceRejected(Coverage coverage, const std::string& what)
      : IncompleteAnnotation(what), coverage_(std::move(coverage)) {}
  const Coverage& coverage() const noexcept { return coverage_; }

 private:
  Coverage coverage_;
};

/// A prepared verse-pair set: `<data-dir>/<id>/pairs.e`, `pairs.f` and
/// optionally `pairs.ids`. Immutable once loaded.
struct VerseSet {
  std::string id;
  std::filesystem::path dir;
  Bitext bitext;
};

std::shared_ptr<const VerseSet> load_verse_set(const std::filesystem::path& dir,
                                               const ProfilePair& profiles);

/// Reads every `annotations/*.align` file of a set directory, grouped by
/// annotator id (sorted) with annotations in verse order. Throws
/// IncompleteAnnotation on draft records unless `allow_drafts`.
std::vector<AnnotatorSet> load_annotator_sets(const VerseSet& set, bool allow_drafts = false);

/// Where an annotator's work on a set is persisted.
std::filesystem::path annotation_path(const std::filesystem::path& set_dir,
                                      const std::string& annotator);
std::filesystem::path session_path(const std::filesystem::path& set_dir,
                                   const std::string& annotator);

struct ServiceConfig {
  std::filesystem::path data_dir;
  /// Gaps between requests longer than this do not count as work time.
  double idle_cutoff_seconds = 300;
  ProfilePair profiles{LanguageProfile::builtin("en"), LanguageProfile::builtin("fr")};
  /// Seconds on an arbitrary monotonic scale; defaults to steady_clock.
  std::function<double()> clock;
};

struct SetSummary {
  std::string id;
  std::size_t pairs = 0;
};

/// Everything the UI needs to render one pair.
struct PairView {
  std::string set_id;
  std::size_t ordinal = 0;
  std::size_t total = 0;
  const VersePair* pair = nullptr;
  /// Always unfinalized; `finalized` below says whether the pair has been
  /// advanced past since its last edit.
  Annotation annotation;
  bool finalized = false;
  std::uint64_t version = 0;
  Coverage coverage;
};

struct Progress {
  std::string set_id;
  std::string annotator;
  std::size_t total = 0;
  std::size_t finalized = 0;
  std::size_t current = 1;
  double elapsed_seconds = 0;
};

/// Forced-choice annotation sessions over the sets under a data directory.
///
/// Edits (save, link, not_translated, reset) change only the in-memory
/// working copy and bump the pair's version. Navigation (advance, previous,
/// reload) writes the annotator's alignment file atomically before
/// returning, so an acknowledged navigation survives a crash. Advance is
/// refused while any position of the pair is unaccounted for.
///
/// Thread-safe: work is serialized per (annotator, set); sets are immutable.
class AnnotationService {
 public:
  explicit AnnotationService(ServiceConfig config);
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  std::vector<SetSummary> list_sets() const;

  PairView fetch(const std::string& set, std::size_t ordinal, const std::string& annotator);

  /// Replaces the pair's working annotation. `expected_version` must equal
  /// the current version, otherwise StaleVersion.
  PairView save(const std::string& set, std::size_t ordinal, const std::string& annotator,
                std::uint64_t expected_version, std::vector<LinkGroup> groups,
                std::vector<NotTranslated> nt_marks);

  PairView link(const std::string& set, std::size_t ordinal, const std::string& annotator,
                std::optional<std::uint64_t> expected_version, const PositionSet& e,
                const PositionSet& f);

  PairView not_translated(const std::string& set, std::size_t ordinal, const std::string& annotator,
                          std::optional<std::uint64_t> expected_version, Side side,
                          Position position);

  /// Clears the pair's links in memory only; reload brings them back.
  PairView reset(const std::string& set, std::size_t ordinal, const std::string& annotator,
                 std::optional<std::uint64_t> expected_version = std::nullopt);

  /// Finalizes pair `ordinal`, persists, and returns the next pair (or the
  /// same one when it is the last). Throws AdvanceRejected.
  PairView advance(const std::string& set, std::size_t ordinal, const std::string& annotator);

  /// Persists (drafts allowed) and returns the previous pair.
  PairView previous(const std::string& set, std::size_t ordinal, const std::string& annotator);

  /// Discards unsaved edits on every pair of the set and returns pair
  /// `ordinal` as last persisted.
  PairView reload(const std::string& set, std::size_t ordinal, const std::string& annotator);

  Progress progress(const std::string& set, const std::string& annotator);

 private:
  struct Session;

  std::shared_ptr<const VerseSet> find_set(const std::string& set) const;
  Session& session(const VerseSet& set, const std::string& annotator);
  void touch(Session& s);
  PairView view(const VerseSet& set, const Session& s, std::size_t ordinal) const;
  void persist(const VerseSet& set, Session& s);
  void persist_meta(const VerseSet& set, const Session& s);
  template <typename Edit>
  PairView edit(const std::string& set, std::size_t ordinal, const std::string& annotator,
                std::optional<std::uint64_t> expected_version, Edit&& fn);

  ServiceConfig config_;
  std::map<std::string, std::shared_ptr<const VerseSet>> sets_;
  std::mutex sessions_mutex_;
  std::map<std::pair<std::string, std::string>, std::unique_ptr<Session>> sessions_;
};

}  // namespace goldalign
