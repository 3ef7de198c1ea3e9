#ifndef WNMAP_EVAL_HPP
#define WNMAP_EVAL_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "wnmap/mapper.hpp"
#include "wnmap/vocab.hpp"
#include "wnmap/wordnet.hpp"

namespace wnmap {

struct EvalResult {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double beta = 0.5;
  std::size_t n_mappings = 0;  // |M|
  std::size_t n_gold = 0;      // |M_h|
  std::size_t n_correct = 0;   // |M ∩ M_h|
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// Mappings are compared as (term, relation, synset) triples; a right pair
/// with the wrong relation counts as incorrect. Empty sets give 0.
inline PrecisionRecall precision_recall(const MappingSet& mapping, const MappingSet& gold) {
  std::size_t shared = 0;
  for (const auto& key : mapping.keys()) shared += gold.contains(key);
  PrecisionRecall out;
  if (!mapping.empty()) out.precision = static_cast<double>(shared) / static_cast<double>(mapping.size());
  if (!gold.empty()) out.recall = static_cast<double>(shared) / static_cast<double>(gold.size());
  return out;
}

/// (1 + b^2) P R / (b^2 P + R), 0 when the denominator vanishes.
inline double f_measure(double precision, double recall, double beta = 0.5) {
  const double b2 = beta * beta;
  const double denominator = b2 * precision + recall;
  if (denominator <= 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denominator;
}

inline EvalResult evaluate(const MappingSet& mapping, const MappingSet& gold, double beta = 0.5) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  EvalResult r;
  const auto pr = precision_recall(mapping, gold);
  r.precision = pr.precision;
  r.recall = pr.recall;
  r.f_measure = f_measure(pr.precision, pr.recall, beta);
  r.beta = beta;
  r.n_mappings = mapping.size();
  r.n_gold = gold.size();
  for (const auto& key : mapping.keys()) r.n_correct += gold.contains(key);
  return r;
}

// ---------------------------------------------------------------------------
// Parameter sweep

struct SweepGrid {
  std::vector<bool> taxonomy_options{false, true};
  std::vector<std::uint32_t> ol_min_values{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::uint32_t> f_min_values{0,  1,  2,  3,  4,  5,  10,  20,  30,
                                          40, 50, 60, 70, 80, 90, 100, 150, 200};

  std::size_t size() const {
    return taxonomy_options.size() * ol_min_values.size() * f_min_values.size();
  }

  struct Point {
    bool taxonomy = false;
    std::uint32_t f_min = 0;
    std::uint32_t ol_min = 0;
  };

  /// Grid points ordered by (taxonomy, f_min, ol_min).
  std::vector<Point> points() const {
    auto tax = taxonomy_options;
    auto fs = f_min_values;
    auto ols = ol_min_values;
    std::sort(tax.begin(), tax.end());
    tax.erase(std::unique(tax.begin(), tax.end()), tax.end());
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    std::sort(ols.begin(), ols.end());
    ols.erase(std::unique(ols.begin(), ols.end()), ols.end());
    std::vector<Point> out;
    for (bool t : tax)
      for (auto f : fs)
        for (auto ol : ols) out.push_back({t, f, ol});
    return out;
  }
};

struct SweepRow {
  SweepGrid::Point point;
  EvalResult result;
  double wall_ms = 0.0;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

/// Maps and evaluates every grid point. Candidate generation is shared across
/// points; each point is an independent pure computation, so rows do not
/// depend on the worker count.
inline SweepOutcome run_sweep(const PreparedVocabulary& prepared, const WordNetStore& store,
                              const MappingSet& gold, const SweepGrid& grid,
                              std::shared_ptr<const SynsetSet> taxonomy, unsigned workers = 10,
                              double beta = 0.5) {
  if (workers == 0) throw std::invalid_argument("workers must be positive");
  const auto points = grid.points();
  SweepOutcome out;
  for (const auto& p : points)
    if (p.taxonomy && !taxonomy)
      throw std::invalid_argument("grid enables the salient taxonomy but none was given");

  std::set<std::string> vocab_terms, gold_terms;
  for (const auto& t : prepared.terms) vocab_terms.insert(t.id.uri());
  for (const auto& m : gold.mappings()) gold_terms.insert(m.term.uri());
  const bool shared = std::any_of(gold_terms.begin(), gold_terms.end(),
                                  [&](const std::string& t) { return vocab_terms.count(t) != 0; });
  if (!shared) out.warnings.push_back("gold standard shares no terms with the vocabulary");

  out.rows.resize(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const auto start = std::chrono::steady_clock::now();
      MapperConfig config;
      config.ol_min = points[i].ol_min;
      config.f_min = points[i].f_min;
      if (points[i].taxonomy) config.taxonomy = taxonomy;
      const MappingRun run = apply(prepared, store, config);
      SweepRow row;
      row.point = points[i];
      row.result = evaluate(run.mappings, gold, beta);
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      out.rows[i] = row;
    }
  };
  const unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(points.size(), 1)));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
  }
  return out;
}

/// `sweep.tsv`. With `timing` off the wall_ms column is written as 0 so the
/// file is reproducible byte for byte.
inline std::string sweep_tsv(const std::vector<SweepRow>& rows, bool timing = true) {
  std::string out = "taxonomy\tf_min\tol_min\tprecision\trecall\tf_measure\tn_mappings\twall_ms\n";
  for (const auto& r : rows) {
    out += r.point.taxonomy ? "on" : "off";
    out += '\t' + std::to_string(r.point.f_min);
    out += '\t' + std::to_string(r.point.ol_min);
    out += '\t' + format_fixed(r.result.precision);
    out += '\t' + format_fixed(r.result.recall);
    out += '\t' + format_fixed(r.result.f_measure);
    out += '\t' + std::to_string(r.result.n_mappings);
    out += '\t' + format_fixed(timing ? r.wall_ms : 0.0, 3);
    out += '\n';
  }
  return out;
}

enum class SweepParameter { Taxonomy, FMin, OlMin };

inline std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Taxonomy: return "taxonomy";
    case SweepParameter::FMin: return "f_min";
    case SweepParameter::OlMin: break;
  }
  return "ol_min";
}

struct SummaryRow {
  SweepParameter parameter = SweepParameter::Taxonomy;
  std::uint32_t value = 0;  // 0/1 for taxonomy off/on
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f_measure = 0.0;
  std::size_t count = 0;
  bool best_precision = false;
  bool best_recall = false;
  bool best_f_measure = false;

  std::string value_text() const {
    if (parameter == SweepParameter::Taxonomy) return value ? "on" : "off";
    return std::to_string(value);
  }
};

/// Mean P, R and F over the rows sharing each value of `parameter`; the best
/// value of each column is flagged (ties all flagged).
inline std::vector<SummaryRow> summarize(const std::vector<SweepRow>& rows, SweepParameter parameter) {
  std::map<std::uint32_t, SummaryRow> groups;
  for (const auto& r : rows) {
    const std::uint32_t v = parameter == SweepParameter::Taxonomy ? (r.point.taxonomy ? 1u : 0u)
                            : parameter == SweepParameter::FMin   ? r.point.f_min
                                                                  : r.point.ol_min;
    SummaryRow& s = groups[v];
    s.parameter = parameter;
    s.value = v;
    s.mean_precision += r.result.precision;
    s.mean_recall += r.result.recall;
    s.mean_f_measure += r.result.f_measure;
    ++s.count;
  }
  std::vector<SummaryRow> out;
  for (auto& [v, s] : groups) {
    const double n = static_cast<double>(s.count);
    s.mean_precision /= n;
    s.mean_recall /= n;
    s.mean_f_measure /= n;
    out.push_back(s);
  }
  auto mark = [&](double SummaryRow::*column, bool SummaryRow::*flag) {
    double best = -1.0;
    for (const auto& s : out) best = std::max(best, s.*column);
    for (auto& s : out) s.*flag = std::abs(s.*column - best) <= 1e-12;
  };
  mark(&SummaryRow::mean_precision, &SummaryRow::best_precision);
  mark(&SummaryRow::mean_recall, &SummaryRow::best_recall);
  mark(&SummaryRow::mean_f_measure, &SummaryRow::best_f_measure);
  return out;
}

/// Column maxima over all rows (not necessarily from the same row).
inline EvalResult upper_bounds(const std::vector<SweepRow>& rows) {
  EvalResult out;
  for (const auto& r : rows) {
    out.precision = std::max(out.precision, r.result.precision);
    out.recall = std::max(out.recall, r.result.recall);
    out.f_measure = std::max(out.f_measure, r.result.f_measure);
  }
  return out;
}

/// `summary.tsv`: per-parameter means with `*` on the best value of each
/// column, then an `upper_bounds` row of column maxima.
inline std::string summary_tsv(const std::vector<SweepRow>& rows) {
  std::string out = "parameter\tvalue\tmean_precision\tmean_recall\tmean_f_measure\n";
  for (auto p : {SweepParameter::Taxonomy, SweepParameter::FMin, SweepParameter::OlMin}) {
    for (const auto& s : summarize(rows, p)) {
      out += std::string(to_string(p)) + '\t' + s.value_text();
      out += '\t' + format_fixed(s.mean_precision) + (s.best_precision ? "*" : "");
      out += '\t' + format_fixed(s.mean_recall) + (s.best_recall ? "*" : "");
      out += '\t' + format_fixed(s.mean_f_measure) + (s.best_f_measure ? "*" : "");
      out += '\n';
    }
  }
  const EvalResult ub = upper_bounds(rows);
  out += "upper_bounds\t-\t" + format_fixed(ub.precision) + '\t' + format_fixed(ub.recall) + '\t' +
         format_fixed(ub.f_measure) + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Trigram string-similarity baseline

namespace detail {

inline constexpr char kTrigramPad = '\x1f';

// Sorted multiset of padded character trigrams, packed into integers.
inline std::vector<std::uint32_t> trigram_profile(std::string_view text) {
  std::string s(2, kTrigramPad);
  for (char c : text) s += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  s.append(2, kTrigramPad);
  std::vector<std::uint32_t> out;
  out.reserve(s.size() - 2);
  for (std::size_t i = 0; i + 3 <= s.size(); ++i)
    out.push_back((static_cast<std::uint32_t>(static_cast<unsigned char>(s[i])) << 16) |
                  (static_cast<std::uint32_t>(static_cast<unsigned char>(s[i + 1])) << 8) |
                  static_cast<std::uint32_t>(static_cast<unsigned char>(s[i + 2])));
  std::sort(out.begin(), out.end());
  return out;
}

inline double dice(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::size_t i = 0, j = 0, shared = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(a.size() + b.size());
}

}  // namespace detail

/// Dice coefficient over multisets of character trigrams, each string padded
/// with two boundary markers on either side. Case-insensitive for ASCII.
inline double trigram_similarity(std::string_view a, std::string_view b) {
  return detail::dice(detail::trigram_profile(a), detail::trigram_profile(b));
}

enum class TrigramStrategy { Labels, Definitions };

/// Every (term, synset) pair whose compared strings reach `threshold`
/// becomes a Related mapping scored by the similarity. Labels are compared
/// with word-sense lemmas (underscores read as spaces), definitions with
/// glosses.
inline MappingSet trigram_baseline_mapping(const Vocabulary& vocab, const WordNetStore& store,
                                           double threshold, TrigramStrategy strategy) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold must be in [0,1]");
  struct Target {
    std::vector<std::uint32_t> profile;
    std::vector<SynsetId> synsets;
    std::string word;
  };
  std::vector<Target> targets;
  if (strategy == TrigramStrategy::Labels) {
    for (const auto& [lemma, senses] : store.lemma_index()) {
      std::string spaced = lemma;
      std::replace(spaced.begin(), spaced.end(), '_', ' ');
      Target t{detail::trigram_profile(spaced), {}, lemma};
      for (const auto& ws : senses) t.synsets.push_back(ws.synset);
      targets.push_back(std::move(t));
    }
  } else {
    for (const auto& [id, synset] : store.synsets())
      targets.push_back({detail::trigram_profile(synset.gloss), {id}, synset.senses.front().lemma});
  }

  MappingSet out;
  for (const auto& [id, term] : vocab.terms()) {
    std::string_view text;
    if (strategy == TrigramStrategy::Labels) text = term.pref_label;
    else if (term.definition) text = *term.definition;
    else continue;
    const auto profile = detail::trigram_profile(text);
    std::map<SynsetId, std::pair<double, const Target*>> best;
    for (const Target& t : targets) {
      const double a = static_cast<double>(profile.size()), b = static_cast<double>(t.profile.size());
      if (2.0 * std::min(a, b) / (a + b) < threshold) continue;
      const double sim = detail::dice(profile, t.profile);
      if (sim < threshold) continue;
      for (SynsetId s : t.synsets) {
        auto [it, fresh] = best.try_emplace(s, sim, &t);
        if (!fresh && sim > it->second.first) it->second = {sim, &t};
      }
    }
    for (const auto& [synset, hit] : best) {
      Mapping m;
      m.term = id;
      m.relation = MappingRelation::Related;
      m.synset_id = synset;
      m.synset = store.synset_uri(synset);
      m.score = std::min(1.0, hit.first);
      m.provenance = strategy == TrigramStrategy::Labels ? Provenance::LabelDerived : Provenance::DefinitionDerived;
      m.source_word = hit.second->word;
      out.insert(std::move(m));
    }
  }
  return out;
}

}  // namespace wnmap

#endif  // WNMAP_EVAL_HPP
