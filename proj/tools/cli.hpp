#ifndef WNMAP_TOOLS_CLI_HPP
#define WNMAP_TOOLS_CLI_HPP

// Subcommands of the `wnmap` batch tool. Exit codes: 0 success, 1 input or
// data error, 2 usage error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wnmap/wnmap.hpp"

namespace wnmap::cli {

namespace fs = std::filesystem;

inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kUsageError = 2;

/// Raised for bad input files or data; mapped to exit code 1.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised for flag combinations CLI11 cannot check; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_exists(const std::string& path, const char* what) {
  if (!fs::exists(path)) throw DataError(std::string(what) + " not found: " + path);
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

inline fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

inline Vocabulary load_vocabulary(const std::string& path, std::vector<std::string>& warnings) {
  require_exists(path, "vocabulary");
  try {
    auto parsed = parse_vocabulary_ntriples(read_file(path), fs::path(path).stem().string());
    for (auto& w : parsed.warnings) warnings.push_back(path + ": " + w);
    return std::move(parsed.value);
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline MappingSet load_mapping_file(const std::string& path, std::vector<std::string>& warnings,
                                    const char* what) {
  require_exists(path, what);
  try {
    auto parsed = load_gold(read_file(path));
    for (auto& w : parsed.warnings) warnings.push_back(path + ": " + w);
    return std::move(parsed.value);
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline WordNetStore load_store(const std::string& path) {
  require_exists(path, "WordNet");
  try {
    return load_wordnet(path);
  } catch (const LoadError& e) {
    throw DataError(std::string("WordNet ") + e.what());
  }
}

inline const StopwordSet& stopwords(const std::string& path, std::optional<StopwordSet>& holder) {
  if (path.empty()) return StopwordSet::english();
  require_exists(path, "stopword list");
  try {
    holder = StopwordSet::from_file(path);
  } catch (const LoadError& e) {
    throw DataError(e.what());
  }
  return *holder;
}

/// Roots file: one synset name per line (`lemma-noun-N` or `n<offset>`),
/// `#` starts a comment.
inline std::vector<SynsetId> load_roots(const std::string& path, const WordNetStore& store) {
  require_exists(path, "roots file");
  std::vector<SynsetId> roots;
  wnmap::detail::for_each_line(read_file(path), [&](std::string_view line, std::size_t no) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string name = wnmap::detail::trim(line);
    if (name.empty()) return;
    auto id = store.resolve(name);
    if (!id) throw DataError(path + ":" + std::to_string(no) + ": unknown taxonomy root '" + name + "'");
    roots.push_back(*id);
  });
  return roots;
}

inline std::shared_ptr<const SynsetSet> load_taxonomy(const std::string& roots_path, const WordNetStore& store) {
  const auto roots = load_roots(roots_path, store);
  return std::make_shared<const SynsetSet>(store.taxonomy_closure(roots));
}

/// Appends `--key value` for each `key = value` line of a config file whose
/// key is not already given on the command line. `true`/`false` values
/// toggle flags.
inline void expand_config(std::vector<std::string>& args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || std::next(it) == args.end()) return;
  const std::string path = *std::next(it);
  args.erase(it, std::next(it, 2));
  require_exists(path, "config file");
  std::vector<std::string> extra;
  wnmap::detail::for_each_line(read_file(path), [&](std::string_view line, std::size_t no) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (wnmap::detail::trim(line).empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw DataError(path + ":" + std::to_string(no) + ": expected 'key = value'");
    const std::string key = "--" + wnmap::detail::trim(line.substr(0, eq));
    const std::string value = wnmap::detail::trim(line.substr(eq + 1));
    if (std::find(args.begin(), args.end(), key) != args.end()) return;
    if (value == "true") extra.push_back(key);
    else if (value != "false") {
      extra.push_back(key);
      extra.push_back(value);
    }
  });
  args.insert(args.end(), extra.begin(), extra.end());
}

}  // namespace detail

struct MapOptions {
  std::string vocab, wordnet, roots, out = "out", stopwords;
  std::uint32_t min_overlap = 0, min_freq = 0;
  bool alt_labels = false;
};

inline int cmd_map(const MapOptions& o, std::ostream& out) {
  std::vector<std::string> warnings;
  const Vocabulary vocab = detail::load_vocabulary(o.vocab, warnings);
  const WordNetStore store = detail::load_store(o.wordnet);
  std::optional<StopwordSet> sw_holder;
  const StopwordSet& sw = detail::stopwords(o.stopwords, sw_holder);
  MapperConfig config;
  config.ol_min = o.min_overlap;
  config.f_min = o.min_freq;
  config.use_alt_labels = o.alt_labels;
  if (!o.roots.empty()) config.taxonomy = detail::load_taxonomy(o.roots, store);
  const fs::path dir = detail::prepare_out_dir(o.out);

  MappingRun run = run_mapping(vocab, store, sw, config);
  detail::write_file(dir / "mapping.nt", serialize_mappings_ntriples(run.mappings));
  detail::write_file(dir / "mapping.tsv", serialize_mappings_tsv(run.mappings));

  std::string report;
  report += "vocabulary\t" + o.vocab + "\t" + std::to_string(vocab.size()) + " terms\n";
  report += "wordnet\t" + o.wordnet + "\t" + std::to_string(store.size()) + " synsets\n";
  report += "min_overlap\t" + std::to_string(config.ol_min) + "\n";
  report += "min_freq\t" + std::to_string(config.f_min) + "\n";
  report += "taxonomy\t" + (config.taxonomy ? o.roots + "\t" + std::to_string(config.taxonomy->size()) + " synsets"
                                            : std::string("off")) + "\n";
  report += "alt_labels\t" + std::string(config.use_alt_labels ? "on" : "off") + "\n";
  report += "mappings\t" + std::to_string(run.mappings.size()) + "\n";
  for (const auto& w : warnings) report += "warning\t" + w + "\n";
  for (const auto& w : run.warnings) report += "warning\t" + w + "\n";
  for (const auto& t : run.unmapped) report += "unmapped\t" + t.uri() + "\n";
  detail::write_file(dir / "run-report.txt", report);

  out << "mapped " << (vocab.size() - run.unmapped.size()) << " of " << vocab.size() << " terms, "
      << run.mappings.size() << " mappings written to " << dir.string() << "\n";
  return kOk;
}

struct SweepOptions {
  std::string vocab, wordnet, gold, roots, out = "out", stopwords, taxonomy = "both";
  std::vector<std::uint32_t> ol_min, f_min;
  unsigned workers = 10;
  double beta = 0.5;
  bool no_timing = false;
};

inline int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  SweepGrid grid;
  if (o.taxonomy == "off") grid.taxonomy_options = {false};
  else if (o.taxonomy == "on") grid.taxonomy_options = {true};
  if (!o.ol_min.empty()) grid.ol_min_values = o.ol_min;
  if (!o.f_min.empty()) grid.f_min_values = o.f_min;
  const bool needs_taxonomy =
      std::find(grid.taxonomy_options.begin(), grid.taxonomy_options.end(), true) != grid.taxonomy_options.end();
  if (needs_taxonomy && o.roots.empty())
    throw UsageError("--taxonomy-roots is required unless --taxonomy off");

  std::vector<std::string> warnings;
  const Vocabulary vocab = detail::load_vocabulary(o.vocab, warnings);
  const MappingSet gold = detail::load_mapping_file(o.gold, warnings, "gold standard");
  const WordNetStore store = detail::load_store(o.wordnet);
  std::optional<StopwordSet> sw_holder;
  const StopwordSet& sw = detail::stopwords(o.stopwords, sw_holder);
  std::shared_ptr<const SynsetSet> taxonomy;
  if (needs_taxonomy) taxonomy = detail::load_taxonomy(o.roots, store);
  const fs::path dir = detail::prepare_out_dir(o.out);

  const PreparedVocabulary prepared = prepare(vocab, store, sw);
  SweepOutcome sweep = run_sweep(prepared, store, gold, grid, taxonomy, o.workers, o.beta);
  detail::write_file(dir / "sweep.tsv", sweep_tsv(sweep.rows, !o.no_timing));
  detail::write_file(dir / "summary.tsv", summary_tsv(sweep.rows));
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  for (const auto& w : sweep.warnings) err << "warning: " << w << "\n";

  const auto best = std::max_element(sweep.rows.begin(), sweep.rows.end(), [](const auto& a, const auto& b) {
    return a.result.f_measure < b.result.f_measure;
  });
  out << sweep.rows.size() << " configurations evaluated";
  if (best != sweep.rows.end())
    out << "; best F=" << format_fixed(best->result.f_measure) << " at taxonomy="
        << (best->point.taxonomy ? "on" : "off") << " f_min=" << best->point.f_min
        << " ol_min=" << best->point.ol_min;
  out << "\n";
  return kOk;
}

struct EvalOptions {
  std::string mapping, gold;
  double beta = 0.5;
};

inline int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const MappingSet mapping = detail::load_mapping_file(o.mapping, warnings, "mapping");
  const MappingSet gold = detail::load_mapping_file(o.gold, warnings, "gold standard");
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  const EvalResult r = evaluate(mapping, gold, o.beta);
  out << "mappings\t" << r.n_mappings << "\n"
      << "gold\t" << r.n_gold << "\n"
      << "correct\t" << r.n_correct << "\n"
      << "precision\t" << format_fixed(r.precision) << "\n"
      << "recall\t" << format_fixed(r.recall) << "\n"
      << "f_measure\t" << format_fixed(r.f_measure) << "\n"
      << "P=" << format_fixed(r.precision) << " R=" << format_fixed(r.recall)
      << " F=" << format_fixed(r.f_measure) << "\n";
  return kOk;
}

struct TaxonomyOptions {
  std::string wordnet, roots, out;
};

inline int cmd_taxonomy(const TaxonomyOptions& o, std::ostream& out) {
  const WordNetStore store = detail::load_store(o.wordnet);
  const auto taxonomy = detail::load_taxonomy(o.roots, store);
  std::string text;
  for (SynsetId id : *taxonomy) text += store.synset_name(id) + "\n";
  text += "# count " + std::to_string(taxonomy->size()) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    const fs::path path(o.out);
    if (path.has_parent_path()) detail::prepare_out_dir(path.parent_path().string());
    detail::write_file(path, text);
    out << taxonomy->size() << " synsets written to " << o.out << "\n";
  }
  return kOk;
}

struct BaselineOptions {
  std::string kind, vocab, wordnet, out = "out", stopwords;
  std::uint64_t seed = 0;
  double threshold = 0.9;
};

inline int cmd_baseline(const BaselineOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const Vocabulary vocab = detail::load_vocabulary(o.vocab, warnings);
  const WordNetStore store = detail::load_store(o.wordnet);
  std::optional<StopwordSet> sw_holder;
  const StopwordSet& sw = detail::stopwords(o.stopwords, sw_holder);
  const fs::path dir = detail::prepare_out_dir(o.out);
  MappingSet mappings;
  if (o.kind == "random") mappings = random_baseline_mapping(vocab, store, sw, o.seed);
  else if (o.kind == "trigram-labels") mappings = trigram_baseline_mapping(vocab, store, o.threshold, TrigramStrategy::Labels);
  else mappings = trigram_baseline_mapping(vocab, store, o.threshold, TrigramStrategy::Definitions);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  detail::write_file(dir / "mapping.nt", serialize_mappings_ntriples(mappings));
  detail::write_file(dir / "mapping.tsv", serialize_mappings_tsv(mappings));
  out << o.kind << " baseline: " << mappings.size() << " mappings written to " << dir.string() << "\n";
  return kOk;
}

/// Entry point. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Map vocabulary terms to WordNet synsets and evaluate the mappings", "wnmap"};
  app.require_subcommand(1);

  auto add_config = [](CLI::App* sub) {
    // Consumed by expand_config before parsing; declared here for --help.
    sub->add_option("--config", "File of 'key = value' lines; command-line flags take precedence");
  };

  MapOptions map_o;
  auto* map = app.add_subcommand("map", "Map a vocabulary to WordNet");
  map->add_option("--vocab", map_o.vocab, "Vocabulary (N-Triples)")->required();
  map->add_option("--wordnet", map_o.wordnet, "WNDB directory or JSON fixture")->required();
  map->add_option("--taxonomy-roots", map_o.roots, "Roots of the salient taxonomy, one per line");
  map->add_option("--min-overlap", map_o.min_overlap, "Minimum lexical overlap")->capture_default_str();
  map->add_option("--min-freq", map_o.min_freq, "Minimum word sense frequency")->capture_default_str();
  map->add_flag("--alt-labels", map_o.alt_labels, "Also try altLabels when the prefLabel finds nothing");
  map->add_option("--stopwords", map_o.stopwords, "Stopword list (default: built-in English list)");
  map->add_option("--out", map_o.out, "Output directory")->capture_default_str();
  add_config(map);

  SweepOptions sweep_o;
  auto* sweep = app.add_subcommand("sweep", "Evaluate the mapper over a parameter grid");
  sweep->add_option("--vocab", sweep_o.vocab, "Vocabulary (N-Triples)")->required();
  sweep->add_option("--wordnet", sweep_o.wordnet, "WNDB directory or JSON fixture")->required();
  sweep->add_option("--gold", sweep_o.gold, "Gold standard mapping (N-Triples)")->required();
  sweep->add_option("--taxonomy-roots", sweep_o.roots, "Roots of the salient taxonomy, one per line");
  sweep->add_option("--taxonomy", sweep_o.taxonomy, "Taxonomy options to sweep")
      ->check(CLI::IsMember({"off", "on", "both"}))->capture_default_str();
  sweep->add_option("--ol-min", sweep_o.ol_min, "Minimum overlap values (comma separated)")->delimiter(',');
  sweep->add_option("--f-min", sweep_o.f_min, "Minimum frequency values (comma separated)")->delimiter(',');
  sweep->add_option("--workers", sweep_o.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--beta", sweep_o.beta, "F-measure beta")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_flag("--no-timing", sweep_o.no_timing, "Write 0 in the wall_ms column");
  sweep->add_option("--stopwords", sweep_o.stopwords, "Stopword list (default: built-in English list)");
  sweep->add_option("--out", sweep_o.out, "Output directory")->capture_default_str();
  add_config(sweep);

  EvalOptions eval_o;
  auto* eval = app.add_subcommand("eval", "Score a mapping against a gold standard");
  eval->add_option("--mapping", eval_o.mapping, "Mapping (N-Triples)")->required();
  eval->add_option("--gold", eval_o.gold, "Gold standard (N-Triples)")->required();
  eval->add_option("--beta", eval_o.beta, "F-measure beta")->check(CLI::PositiveNumber)->capture_default_str();
  add_config(eval);

  TaxonomyOptions tax_o;
  auto* tax = app.add_subcommand("taxonomy", "Extract the salient taxonomy below a set of roots");
  tax->add_option("--wordnet", tax_o.wordnet, "WNDB directory or JSON fixture")->required();
  tax->add_option("--roots", tax_o.roots, "Roots file, one synset per line")->required();
  tax->add_option("--out", tax_o.out, "Output file (default: stdout)");
  add_config(tax);

  BaselineOptions base_o;
  auto* base = app.add_subcommand("baseline", "Run the random or trigram baseline");
  base->add_option("--kind", base_o.kind, "Baseline kind")
      ->check(CLI::IsMember({"random", "trigram-labels", "trigram-definitions"}))->required();
  base->add_option("--vocab", base_o.vocab, "Vocabulary (N-Triples)")->required();
  base->add_option("--wordnet", base_o.wordnet, "WNDB directory or JSON fixture")->required();
  base->add_option("--seed", base_o.seed, "Seed of the random baseline")->capture_default_str();
  base->add_option("--threshold", base_o.threshold, "Similarity threshold of the trigram baselines")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  base->add_option("--stopwords", base_o.stopwords, "Stopword list (default: built-in English list)");
  base->add_option("--out", base_o.out, "Output directory")->capture_default_str();
  add_config(base);

  try {
    detail::expand_config(args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }

  try {
    if (map->parsed()) return cmd_map(map_o, out);
    if (sweep->parsed()) return cmd_sweep(sweep_o, out, err);
    if (eval->parsed()) return cmd_eval(eval_o, out, err);
    if (tax->parsed()) return cmd_taxonomy(tax_o, out);
    if (base->parsed()) return cmd_baseline(base_o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace wnmap::cli

#endif  // WNMAP_TOOLS_CLI_HPP
