// goldalign: command-line entry points for building and evaluating
// word-alignment gold standards.
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "goldalign/agreement.hpp"
#include "goldalign/alignment.hpp"
#include "goldalign/bitext.hpp"
#include "goldalign/error.hpp"
#include "goldalign/http_service.hpp"
#include "goldalign/lexicon.hpp"
#include "goldalign/sampling.hpp"
#include "goldalign/service.hpp"

namespace fs = std::filesystem;
using namespace goldalign;

namespace {

struct ProfileOptions {
  std::string lang_e = "en";
  std::string lang_f = "fr";
  std::string file_e;
  std::string file_f;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--lang-e", lang_e, "Built-in profile for the E half")->capture_default_str();
    cmd.add_option("--lang-f", lang_f, "Built-in profile for the F half")->capture_default_str();
    cmd.add_option("--profile-e", file_e, "Profile file for the E half (overrides --lang-e)")
        ->check(CLI::ExistingFile);
    cmd.add_option("--profile-f", file_f, "Profile file for the F half (overrides --lang-f)")
        ->check(CLI::ExistingFile);
  }

  ProfilePair load() const {
    return {file_e.empty() ? LanguageProfile::builtin(lang_e) : load_profile(file_e),
            file_f.empty() ? LanguageProfile::builtin(lang_f) : load_profile(file_f)};
  }
};

// ---------------------------------------------------------------------------

struct TokenizeCmd {
  std::string lang = "en";
  std::string profile;
  std::string input;
  bool print_profile = false;

  int run() const {
    const LanguageProfile p = profile.empty() ? LanguageProfile::builtin(lang) : load_profile(profile);
    if (print_profile) {
      write_profile(std::cout, p);
      return 0;
    }
    std::ifstream file;
    if (!input.empty()) {
      file.open(input, std::ios::binary);
      if (!file) throw InputError("cannot open " + input);
    }
    std::istream& in = input.empty() ? std::cin : file;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      try {
        std::cout << join_surfaces(tokenize(line, p)) << '\n';
      } catch (const InputError& e) {
        throw InputError("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    return 0;
  }
};

struct SampleCmd {
  std::string file_e;
  std::string file_f;
  std::string ids;
  std::uint64_t seed = 0;
  std::string strata = "1:25,2:25,3:25,4:25";
  std::string side = "E";
  std::string out;
  ProfileOptions profiles;

  int run() const {
    const Bitext bitext = load_bitext(file_e, file_f,
                                      ids.empty() ? std::nullopt : std::optional<fs::path>(ids),
                                      profiles.load());
    const Side s = parse_side(side);
    const StrataSpec spec = StrataSpec::parse(strata);
    Rng rng(seed);
    const SampleResult result = stratified_sample(word_histogram(bitext, s), spec, rng, bitext, s);
    const CoverageReport coverage = verify_focus_coverage(bitext, result.focus, result.pairs, s);
    if (!coverage.pass()) throw Error("internal: sample does not cover every focus instance");

    fs::create_directories(out);
    {
      std::ofstream focus(fs::path(out) / "focus.tsv", std::ios::binary);
      write_focus_set(focus, result.focus);
    }
    write_bitext(fs::path(out) / "pairs.e", fs::path(out) / "pairs.f", fs::path(out) / "pairs.ids",
                 result.pairs);
    std::cout << result.focus.size() << " focus types, " << result.pairs.size()
              << " verse pairs, " << result.discarded.size() << " discarded in conflicts\n";
    return 0;
  }
};

struct ValidateCmd {
  std::string set;
  std::vector<std::string> alignments;
  bool draft = false;
  std::string focus;
  std::string corpus_e;
  std::string corpus_f;
  std::string corpus_ids;
  std::string side = "E";
  ProfileOptions profiles;

  int run() const {
    const ProfilePair pp = profiles.load();
    const auto verse_set = load_verse_set(set, pp);
    std::vector<fs::path> files(alignments.begin(), alignments.end());
    if (files.empty() && fs::is_directory(fs::path(set) / "annotations")) {
      for (const auto& entry : fs::directory_iterator(fs::path(set) / "annotations")) {
        if (entry.path().extension() == ".align") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
    }
    int failures = 0;
    for (const auto& file : files) {
      try {
        const auto records = read_alignment_file(file, verse_set->bitext.pairs);
        std::size_t drafts = 0;
        for (const auto& r : records) drafts += r.annotation.finalized ? 0 : 1;
        if (drafts > 0 && !draft) {
          std::cout << "FAIL " << file.string() << ": " << drafts << " draft record(s)\n";
          ++failures;
        } else {
          std::cout << "ok   " << file.string() << ": " << records.size() << " record(s)\n";
        }
      } catch (const Error& e) {
        std::cout << "FAIL " << file.string() << ": " << e.what() << '\n';
        ++failures;
      }
    }
    if (!focus.empty()) {
      if (corpus_e.empty() || corpus_f.empty()) {
        throw ArgumentError("--focus needs --corpus-e and --corpus-f");
      }
      const Bitext corpus = load_bitext(
          corpus_e, corpus_f, corpus_ids.empty() ? std::nullopt : std::optional<fs::path>(corpus_ids),
          pp);
      const CoverageReport report =
          verify_focus_coverage(corpus, read_focus_set(focus), verse_set->bitext.pairs, parse_side(side));
      for (const auto& w : report.words) {
        if (w.in_sample != w.in_corpus || w.in_corpus == 0) {
          std::cout << "FAIL focus '" << w.word << "': " << w.in_sample << " of " << w.in_corpus
                    << " instances in the set\n";
        }
      }
      if (report.duplicate_pairs > 0) {
        std::cout << "FAIL " << report.duplicate_pairs << " duplicate verse pair(s)\n";
      }
      std::cout << (report.pass() ? "ok   " : "FAIL ") << "focus coverage over " << report.words.size()
                << " word(s)\n";
      if (!report.pass()) ++failures;
    }
    return failures == 0 ? 0 : 1;
  }
};

struct AgreeCmd {
  std::string part;
  std::size_t pools = 10;
  std::size_t pool_size = 10;
  std::string mode = "directional";
  bool null_links = false;
  bool content_only = false;
  std::string stoplist_e;
  std::string stoplist_f;
  std::string csv;
  ProfileOptions profiles;

  int run() const {
    const auto set = load_verse_set(part, profiles.load());
    std::vector<AnnotatorSet> annotators = load_annotator_sets(*set);
    if (annotators.size() < 2) {
      throw InputError(part + " holds annotations from " + std::to_string(annotators.size()) +
                       " annotator(s); agreement needs two or more");
    }
    AgreementOptions options;
    options.mode = mode == "fanout" ? WeightingMode::fanout : WeightingMode::directional;
    options.null_links = null_links;
    if (content_only) {
      if (stoplist_e.empty() || stoplist_f.empty()) {
        throw ArgumentError("--content-only needs --stoplist-e and --stoplist-f");
      }
      const Stoplist se = Stoplist::load(stoplist_e, set->bitext.lang_e);
      const Stoplist sf = Stoplist::load(stoplist_f, set->bitext.lang_f);
      for (auto& a : annotators) a.annotations = content_filter(a.annotations, se, sf, set->bitext);
    }
    std::vector<std::string> order;
    for (const auto& p : set->bitext.pairs) order.push_back(p.verse_id);
    const auto plan = PoolingPlan::contiguous(order.size(), pools, pool_size);
    AgreementReport report = pooled_agreement(annotators, order, plan, options);
    report.content_only = content_only;
    write_report_table(std::cout, report);
    if (!csv.empty()) {
      std::ofstream out(csv, std::ios::binary);
      if (!out) throw InputError("cannot write " + csv);
      write_report_csv(out, report);
    }
    return 0;
  }
};

struct LexiconExtractCmd {
  std::string part;
  std::string focus;
  bool majority = false;
  std::string side = "E";
  std::string out;
  ProfileOptions profiles;

  int run() const {
    const auto set = load_verse_set(part, profiles.load());
    const auto annotators = load_annotator_sets(*set);
    const Lexicon gold =
        extract_gold_lexicon(annotators, read_focus_set(focus), set->bitext, parse_side(side),
                             majority ? GoldMode::majority : GoldMode::union_of_annotators);
    if (out.empty()) {
      write_lexicon(std::cout, gold);
    } else {
      std::ofstream file(out, std::ios::binary);
      if (!file) throw InputError("cannot write " + out);
      write_lexicon(file, gold);
    }
    return 0;
  }
};

struct LexiconEvalCmd {
  std::string candidate;
  std::string gold;

  int run() const {
    const LexiconScore score = evaluate_lexicon(read_lexicon_file(candidate), read_lexicon_file(gold));
    auto rate = [](const std::optional<double>& r) {
      std::ostringstream s;
      if (r) {
        s << std::fixed << std::setprecision(4) << *r;
      } else {
        s << "undef";
      }
      return s.str();
    };
    std::cout << "headword\tprecision\trecall\tdice\n";
    for (const auto& e : score.entries) {
      std::cout << e.headword << '\t' << rate(e.precision) << '\t' << rate(e.recall) << '\t'
                << rate(e.dice) << '\n';
    }
    std::cout << "micro\t" << rate(score.precision) << '\t' << rate(score.recall) << '\t'
              << rate(score.dice) << '\n';
    for (const auto& h : score.unmatched) std::cerr << "no gold entry for '" << h << "'\n";
    return 0;
  }
};

HttpService* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

struct ServeCmd {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  double idle_cutoff_min = 5;
  ProfileOptions profiles;

  int run() const {
    ServiceConfig config;
    config.data_dir = data_dir;
    config.idle_cutoff_seconds = idle_cutoff_min * 60;
    config.profiles = profiles.load();
    AnnotationService service(std::move(config));
    HttpService http(service);
    const int bound = http.bind(host, port);
    if (bound <= 0) throw InputError("cannot bind " + host + ":" + std::to_string(port));
    g_server = &http;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on http://" << host << ':' << bound << std::endl;
    http.listen();
    g_server = nullptr;
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and evaluate word-alignment gold standards"};
  app.require_subcommand(1);

  TokenizeCmd tokenize_cmd;
  auto* tok = app.add_subcommand("tokenize", "Tokenize verses, one per line, stdin to stdout");
  tok->add_option("--lang", tokenize_cmd.lang, "Built-in profile (en, fr)")->capture_default_str();
  tok->add_option("--profile", tokenize_cmd.profile, "Profile file")->check(CLI::ExistingFile);
  tok->add_option("--input", tokenize_cmd.input, "Input file instead of stdin")->check(CLI::ExistingFile);
  tok->add_flag("--print-profile", tokenize_cmd.print_profile, "Print the effective profile and exit");

  SampleCmd sample_cmd;
  auto* smp = app.add_subcommand("sample", "Draw a frequency-stratified focus set and its verses");
  smp->add_option("--e", sample_cmd.file_e, "E half, one verse per line")->required()->check(CLI::ExistingFile);
  smp->add_option("--f", sample_cmd.file_f, "F half, one verse per line")->required()->check(CLI::ExistingFile);
  smp->add_option("--ids", sample_cmd.ids, "Verse ids, one per line")->check(CLI::ExistingFile);
  smp->add_option("--seed", sample_cmd.seed, "Random seed")->capture_default_str();
  smp->add_option("--strata", sample_cmd.strata, "freq:count,...")->capture_default_str();
  smp->add_option("--side", sample_cmd.side, "Half the focus words come from")->capture_default_str();
  smp->add_option("--out", sample_cmd.out, "Output set directory")->required();
  sample_cmd.profiles.add_to(*smp);

  ValidateCmd validate_cmd;
  auto* val = app.add_subcommand("validate", "Check alignment files (and optionally focus coverage)");
  val->add_option("--set", validate_cmd.set, "Set directory")->required()->check(CLI::ExistingDirectory);
  val->add_option("--alignments", validate_cmd.alignments, "Alignment files (default: annotations/*.align)");
  val->add_flag("--draft", validate_cmd.draft, "Accept unfinalized records");
  val->add_option("--focus", validate_cmd.focus, "focus.tsv to check coverage of")->check(CLI::ExistingFile);
  val->add_option("--corpus-e", validate_cmd.corpus_e, "Full corpus E half")->check(CLI::ExistingFile);
  val->add_option("--corpus-f", validate_cmd.corpus_f, "Full corpus F half")->check(CLI::ExistingFile);
  val->add_option("--corpus-ids", validate_cmd.corpus_ids, "Full corpus ids")->check(CLI::ExistingFile);
  val->add_option("--side", validate_cmd.side, "Focus side")->capture_default_str();
  validate_cmd.profiles.add_to(*val);

  AgreeCmd agree_cmd;
  auto* agr = app.add_subcommand("agree", "Pooled inter-annotator agreement report");
  agr->add_option("--part", agree_cmd.part, "Set directory with annotations/")->required()->check(CLI::ExistingDirectory);
  agr->add_option("--pools", agree_cmd.pools, "Number of pools")->capture_default_str();
  agr->add_option("--pool-size", agree_cmd.pool_size, "Verse pairs per pool")->capture_default_str();
  agr->add_option("--mode", agree_cmd.mode, "Link weighting")
      ->check(CLI::IsMember({"directional", "fanout"}))
      ->capture_default_str();
  agr->add_flag("--null-links", agree_cmd.null_links, "Count Not Translated marks as NULL links");
  agr->add_flag("--content-only", agree_cmd.content_only, "Drop links touching stoplisted words");
  agr->add_option("--stoplist-e", agree_cmd.stoplist_e, "E stoplist")->check(CLI::ExistingFile);
  agr->add_option("--stoplist-f", agree_cmd.stoplist_f, "F stoplist")->check(CLI::ExistingFile);
  agr->add_option("--csv", agree_cmd.csv, "Also write pair,pool,rate CSV here");
  agree_cmd.profiles.add_to(*agr);

  auto* lex = app.add_subcommand("lexicon", "Gold translation lexicons");
  lex->require_subcommand(1);
  LexiconExtractCmd extract_cmd;
  auto* ext = lex->add_subcommand("extract", "Extract the gold lexicon of the focus words");
  ext->add_option("--part", extract_cmd.part, "Set directory with annotations/")->required()->check(CLI::ExistingDirectory);
  ext->add_option("--focus", extract_cmd.focus, "focus.tsv")->required()->check(CLI::ExistingFile);
  ext->add_flag("--majority", extract_cmd.majority, "Keep translations a majority agrees on");
  ext->add_option("--side", extract_cmd.side, "Half of the focus words")->capture_default_str();
  ext->add_option("--out", extract_cmd.out, "Output lexicon file (default stdout)");
  extract_cmd.profiles.add_to(*ext);
  LexiconEvalCmd eval_cmd;
  auto* evl = lex->add_subcommand("eval", "Score a candidate lexicon against a gold lexicon");
  evl->add_option("--candidate", eval_cmd.candidate, "Candidate lexicon")->required()->check(CLI::ExistingFile);
  evl->add_option("--gold", eval_cmd.gold, "Gold lexicon")->required()->check(CLI::ExistingFile);

  ServeCmd serve_cmd;
  auto* srv = app.add_subcommand("serve", "Run the annotation service");
  srv->add_option("--host", serve_cmd.host, "Bind address")->capture_default_str();
  srv->add_option("--port", serve_cmd.port, "Port (0 picks a free one)")->capture_default_str();
  srv->add_option("--data-dir", serve_cmd.data_dir, "Directory of verse-pair sets")->required()->check(CLI::ExistingDirectory);
  srv->add_option("--idle-cutoff-min", serve_cmd.idle_cutoff_min, "Idle gap excluded from work time")
      ->capture_default_str();
  serve_cmd.profiles.add_to(*srv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*tok) return tokenize_cmd.run();
    if (*smp) return sample_cmd.run();
    if (*val) return validate_cmd.run();
    if (*agr) return agree_cmd.run();
    if (*ext) return extract_cmd.run();
    if (*evl) return eval_cmd.run();
    if (*srv) return serve_cmd.run();
  } catch (const Error& e) {
    std::cerr << "goldalign: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "goldalign: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
