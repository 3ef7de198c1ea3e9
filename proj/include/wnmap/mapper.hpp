#ifndef WNMAP_MAPPER_HPP
#define WNMAP_MAPPER_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "wnmap/text.hpp"
#include "wnmap/vocab.hpp"
#include "wnmap/wordnet.hpp"

namespace wnmap {

enum class MatchKind { Complete, Partial };

inline std::string_view to_string(MatchKind k) {
  return k == MatchKind::Complete ? "complete" : "partial";
}

/// Complete when the lemma's tokens equal the label's tokens, Partial when
/// they occur as a contiguous run inside the label. Underscores in the lemma
/// separate tokens.
inline std::optional<MatchKind> lexical_match(std::string_view lemma, std::string_view label) {
  std::vector<std::string_view> lemma_tokens;
  for (std::size_t start = 0;;) {
    const auto us = lemma.find('_', start);
    lemma_tokens.push_back(lemma.substr(start, us == std::string_view::npos ? us : us - start));
    if (us == std::string_view::npos) break;
    start = us + 1;
  }
  const auto label_tokens = tokenize(label);
  if (lemma_tokens.empty() || lemma_tokens.size() > label_tokens.size()) return std::nullopt;
  for (std::size_t i = 0; i + lemma_tokens.size() <= label_tokens.size(); ++i) {
    if (std::equal(lemma_tokens.begin(), lemma_tokens.end(), label_tokens.begin() + i)) {
      return lemma_tokens.size() == label_tokens.size() ? MatchKind::Complete : MatchKind::Partial;
    }
  }
  return std::nullopt;
}

/// A word sense that survived the salience filters for one term.
struct Candidate {
  WordSense word_sense;
  MatchKind match = MatchKind::Partial;
  std::uint32_t f = 0;    // tag frequency of the word sense
  std::uint32_t ol = 0;   // lexical overlap of definitions
  int theta = 0;          // 1 when the synset is in the salient taxonomy

  SynsetId synset() const { return word_sense.synset; }
};

/// Every word sense whose lemma lexically matches `label`, ordered by
/// (lemma, sense number). Only the label's contiguous token runs can match,
/// so those are looked up directly.
inline std::vector<std::pair<WordSense, MatchKind>> lexical_matches(std::string_view label,
                                                                    const WordNetStore& store) {
  const auto tokens = tokenize(label);
  std::vector<std::pair<WordSense, MatchKind>> out;
  std::set<std::string> lemmas;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string lemma;
    for (std::size_t j = i; j < tokens.size(); ++j) {
      if (j > i) lemma += '_';
      lemma += tokens[j];
      if (!lemmas.insert(lemma).second) continue;
      const MatchKind kind =
          (i == 0 && j + 1 == tokens.size()) ? MatchKind::Complete : MatchKind::Partial;
      for (const WordSense& ws : store.lookup_senses(lemma)) out.emplace_back(ws, kind);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.lemma, a.first.sense_number) < std::tie(b.first.lemma, b.first.sense_number);
  });
  return out;
}

/// Lemmas excluded from both sides of an overlap computation: those of the
/// term's own label and of the form being looked up.
inline LemmaBag overlap_exclusions(const Term& term, std::string_view form, const WordNetStore& store) {
  LemmaBag out = label_lemmas(term.pref_label, store);
  out.merge(label_lemmas(form, store));
  return out;
}

/// Lexical matches of `form` with f and ol filled in and no filter applied.
inline std::vector<Candidate> unfiltered_candidates(const Term& term, std::string_view form,
                                                    const WordNetStore& store,
                                                    const StopwordSet& stopwords) {
  const LemmaBag exclude = overlap_exclusions(term, form, store);
  const LemmaBag term_bag =
      term.definition ? normalize_definition(*term.definition, exclude, store, stopwords) : LemmaBag{};
  std::vector<Candidate> out;
  for (auto& [ws, kind] : lexical_matches(form, store)) {
    Candidate c;
    c.word_sense = ws;
    c.match = kind;
    c.f = ws.tag_frequency;
    c.ol = static_cast<std::uint32_t>(
        lexical_overlap(term_bag, normalize_definition(store.at(ws.synset).gloss, exclude, store, stopwords)));
    out.push_back(std::move(c));
  }
  return out;
}

/// Applies the taxonomy, frequency and overlap filters and sets theta.
inline std::vector<Candidate> filter_candidates(std::span<const Candidate> raw, const MapperConfig& config) {
  std::vector<Candidate> out;
  for (const Candidate& c : raw) {
    const bool in_taxonomy = !config.taxonomy || config.taxonomy->count(c.synset()) != 0;
    if (!in_taxonomy) continue;
    if (c.f < config.f_min) continue;
    if (c.ol < config.ol_min) continue;
    Candidate kept = c;
    kept.theta = 1;
    out.push_back(std::move(kept));
  }
  return out;
}

/// The candidate set of `term` for one lexical form of its label.
inline std::vector<Candidate> find_candidates(const Term& term, std::string_view label,
                                              const WordNetStore& store, const StopwordSet& stopwords,
                                              const MapperConfig& config) {
  return filter_candidates(unfiltered_candidates(term, label, store, stopwords), config);
}

/// Descending competition ranking: 1 + number of strictly greater values.
template <typename T>
std::vector<int> rank_desc(std::span<const T> values) {
  std::vector<T> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<T>());
  std::vector<int> ranks;
  ranks.reserve(values.size());
  for (const T& v : values) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), v, std::greater<T>());
    ranks.push_back(static_cast<int>(first - sorted.begin()) + 1);
  }
  return ranks;
}

template <typename T>
std::vector<int> rank_desc(const std::vector<T>& values) {
  return rank_desc(std::span<const T>(values));
}

/// Normalised salience of each candidate,
/// (2|C| - rank(f) - rank(ol) + theta) / (2|C| - 1), kept as the integer
/// numerator over the shared denominator so comparisons are exact.
struct SalienceScores {
  std::vector<int> numerators;
  int denominator = 1;

  double value(std::size_t i) const { return static_cast<double>(numerators[i]) / denominator; }
};

inline SalienceScores salience_scores(std::span<const Candidate> all) {
  if (all.empty()) throw std::invalid_argument("salience of an empty candidate set");
  std::vector<std::uint32_t> f, ol;
  for (const Candidate& c : all) {
    f.push_back(c.f);
    ol.push_back(c.ol);
  }
  const auto rf = rank_desc(f);
  const auto rol = rank_desc(ol);
  const int n = static_cast<int>(all.size());
  SalienceScores out;
  out.denominator = 2 * n - 1;
  for (std::size_t i = 0; i < all.size(); ++i)
    out.numerators.push_back(2 * n - rf[i] - rol[i] + all[i].theta);
  return out;
}

/// Salience of one member of `all`.
inline double salience(const Candidate& c, std::span<const Candidate> all) {
  if (all.empty()) throw std::invalid_argument("salience of an empty candidate set");
  int rf = 1, rol = 1;
  for (const Candidate& o : all) {
    rf += o.f > c.f;
    rol += o.ol > c.ol;
  }
  const int n = static_cast<int>(all.size());
  return static_cast<double>(2 * n - rf - rol + c.theta) / (2 * n - 1);
}

/// Index of the highest-salience candidate. Ties go to higher f, then lower
/// synset offset, then lemma and sense number.
inline std::size_t select_best(std::span<const Candidate> candidates) {
  if (candidates.empty()) throw std::invalid_argument("select_best on an empty candidate set");
  const SalienceScores scores = salience_scores(candidates);
  std::size_t best = 0;
  auto key = [&](std::size_t i) {
    const Candidate& c = candidates[i];
    return std::make_tuple(scores.numerators[i], c.f, -static_cast<std::int64_t>(c.synset().offset));
  };
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto ki = key(i), kb = key(best);
    if (ki > kb) {
      best = i;
    } else if (ki == kb) {
      const auto& a = candidates[i].word_sense;
      const auto& b = candidates[best].word_sense;
      if (std::tie(a.lemma, a.sense_number) < std::tie(b.lemma, b.sense_number)) best = i;
    }
  }
  return best;
}

/// Close when the best candidate is a complete match holding both the
/// maximal overlap and the maximal frequency of the set; Related otherwise.
inline MappingRelation assign_relation(const Candidate& best, std::span<const Candidate> all) {
  std::uint32_t max_f = 0, max_ol = 0;
  for (const Candidate& c : all) {
    max_f = std::max(max_f, c.f);
    max_ol = std::max(max_ol, c.ol);
  }
  if (best.match == MatchKind::Complete && best.ol == max_ol && best.f == max_f)
    return MappingRelation::Close;
  return MappingRelation::Related;
}

// ---------------------------------------------------------------------------
// Whole-vocabulary mapping. Candidate generation does not depend on the
// thresholds, so it is done once (prepare) and filtered per configuration
// (apply).

/// The lexical forms tried for one word, with their unfiltered candidates.
struct PreparedQuery {
  struct Form {
    std::string text;
    std::vector<Candidate> raw;
    bool alt_label = false;
  };
  std::string word;
  std::vector<Form> forms;
};

struct PreparedTerm {
  TermId id;
  PreparedQuery label;
  std::vector<PreparedQuery> definition_terms;
};

struct PreparedVocabulary {
  std::vector<PreparedTerm> terms;  // TermId order
  std::vector<std::string> warnings;
};

/// Forms tried for a label: compound_candidates, each followed by its
/// lemmatized variant when that differs.
inline std::vector<std::string> label_forms(std::string_view label, const WordNetStore& store) {
  std::vector<std::string> out;
  for (std::string& form : compound_candidates(label)) {
    std::string lemma = lemmatize_noun(form, store);
    const bool differs = lemma != form;
    if (std::find(out.begin(), out.end(), form) == out.end()) out.push_back(std::move(form));
    if (differs && std::find(out.begin(), out.end(), lemma) == out.end()) out.push_back(std::move(lemma));
  }
  return out;
}

/// Definition terms D_t of a term, excluding its own label.
inline std::vector<std::string> definition_terms(const Term& term, const WordNetStore& store,
                                                 const StopwordSet& stopwords) {
  if (!term.definition) return {};
  return extract_definition_terms(*term.definition, store, stopwords,
                                  label_lemmas(term.pref_label, store));
}

inline PreparedTerm prepare_term(const Term& term, const WordNetStore& store, const StopwordSet& stopwords) {
  PreparedTerm out;
  out.id = term.id;
  out.label.word = term.pref_label;
  auto add_forms = [&](PreparedQuery& q, std::string_view label, bool alt) {
    for (std::string& form : label_forms(label, store)) {
      const bool dup = std::any_of(q.forms.begin(), q.forms.end(),
                                   [&](const auto& f) { return f.text == form; });
      if (dup) continue;
      auto raw = unfiltered_candidates(term, form, store, stopwords);
      q.forms.push_back({std::move(form), std::move(raw), alt});
    }
  };
  add_forms(out.label, term.pref_label, false);
  for (const std::string& alt : term.alt_labels) add_forms(out.label, alt, true);
  for (const std::string& d : definition_terms(term, store, stopwords)) {
    PreparedQuery q;
    q.word = d;
    add_forms(q, d, false);
    out.definition_terms.push_back(std::move(q));
  }
  return out;
}

inline PreparedVocabulary prepare(const Vocabulary& vocab, const WordNetStore& store,
                                  const StopwordSet& stopwords) {
  PreparedVocabulary out;
  for (const auto& [id, term] : vocab.terms()) {
    if (tokenize(term.pref_label).empty())
      out.warnings.push_back(id.uri() + ": label '" + term.pref_label + "' has no word tokens");
    if (!term.definition)
      out.warnings.push_back(id.uri() + ": no definition, all overlaps are 0");
    out.terms.push_back(prepare_term(term, store, stopwords));
  }
  return out;
}

/// Best candidate of the first form with a non-empty candidate set.
inline std::optional<Mapping> resolve_query(const PreparedQuery& query, const TermId& term,
                                            const WordNetStore& store, const MapperConfig& config) {
  for (const auto& form : query.forms) {
    if (form.alt_label && !config.use_alt_labels) continue;
    const auto candidates = filter_candidates(form.raw, config);
    if (candidates.empty()) continue;
    const std::size_t best = select_best(candidates);
    const SalienceScores scores = salience_scores(candidates);
    const Candidate& b = candidates[best];
    Mapping m;
    m.term = term;
    m.relation = assign_relation(b, candidates);
    m.synset_id = b.synset();
    m.synset = store.synset_uri(b.synset());
    m.score = scores.value(best);
    m.provenance = Provenance::LabelDerived;
    m.source_word = b.word_sense.lemma;
    return m;
  }
  return std::nullopt;
}

struct MappingRun {
  MappingSet mappings;
  std::vector<TermId> unmapped;  // terms without a label-derived mapping
  std::vector<std::string> warnings;
};

inline MappingRun apply(const PreparedVocabulary& prepared, const WordNetStore& store,
                        const MapperConfig& config) {
  MappingRun run{MappingSet(config), {}, prepared.warnings};
  for (const PreparedTerm& term : prepared.terms) {
    if (auto m = resolve_query(term.label, term.id, store, config)) run.mappings.insert(std::move(*m));
    else run.unmapped.push_back(term.id);
    for (const PreparedQuery& q : term.definition_terms) {
      if (auto m = resolve_query(q, term.id, store, config)) {
        m->relation = MappingRelation::Related;
        m->provenance = Provenance::DefinitionDerived;
        run.mappings.insert(std::move(*m));
      }
    }
  }
  return run;
}

/// Label-derived mapping for a single term, or nullopt.
inline std::optional<Mapping> find_semantic_mapping(const Term& term, const WordNetStore& store,
                                                    const StopwordSet& stopwords, const MapperConfig& config) {
  const PreparedTerm prepared = prepare_term(term, store, stopwords);
  return resolve_query(prepared.label, term.id, store, config);
}

inline MappingRun run_mapping(const Vocabulary& vocab, const WordNetStore& store,
                              const StopwordSet& stopwords, const MapperConfig& config) {
  return apply(prepare(vocab, store, stopwords), store, config);
}

inline MappingSet map_vocabulary(const Vocabulary& vocab, const WordNetStore& store,
                                 const StopwordSet& stopwords, const MapperConfig& config) {
  return run_mapping(vocab, store, stopwords, config).mappings;
}

// ---------------------------------------------------------------------------
// Random disambiguation baseline

namespace detail {

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform index in [0, n) by rejection, independent of the standard
// library's distribution implementation.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

}  // namespace detail

/// Picks one lexically matching sense per word uniformly at random; every
/// mapping is Related. Deterministic in (seed, term, word).
inline MappingSet random_baseline_mapping(const Vocabulary& vocab, const WordNetStore& store,
                                          const StopwordSet& stopwords, std::uint64_t seed) {
  MapperConfig config;
  config.seed = seed;
  MappingSet out(config);
  auto pick = [&](const TermId& term, std::string_view word, Provenance provenance) {
    for (const std::string& form : label_forms(word, store)) {
      const auto matches = lexical_matches(form, store);
      if (matches.empty()) continue;
      std::mt19937_64 rng(detail::splitmix64(
          seed ^ detail::fnv1a(word, detail::fnv1a(term.uri() + '\x1f'))));
      const auto& ws = matches[detail::uniform_index(rng, matches.size())].first;
      Mapping m;
      m.term = term;
      m.relation = MappingRelation::Related;
      m.synset_id = ws.synset;
      m.synset = store.synset_uri(ws.synset);
      m.score = 1.0 / static_cast<double>(matches.size());
      m.provenance = provenance;
      m.source_word = ws.lemma;
      out.insert(std::move(m));
      return;
    }
  };
  for (const auto& [id, term] : vocab.terms()) {
    pick(id, term.pref_label, Provenance::LabelDerived);
    for (const std::string& d : definition_terms(term, store, stopwords))
      pick(id, d, Provenance::DefinitionDerived);
  }
  return out;
}

}  // namespace wnmap

#endif  // WNMAP_MAPPER_HPP
