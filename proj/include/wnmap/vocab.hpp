#ifndef WNMAP_VOCAB_HPP
#define WNMAP_VOCAB_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "wnmap/ntriples.hpp"
#include "wnmap/wordnet.hpp"

namespace wnmap {

namespace skos {
inline constexpr std::string_view kNamespace = "http://www.w3.org/2004/02/skos/core#";
inline const std::string kPrefLabel = std::string(kNamespace) + "prefLabel";
inline const std::string kAltLabel = std::string(kNamespace) + "altLabel";
inline const std::string kDefinition = std::string(kNamespace) + "definition";
inline const std::string kBroader = std::string(kNamespace) + "broader";
inline const std::string kNarrower = std::string(kNamespace) + "narrower";
inline const std::string kRelated = std::string(kNamespace) + "related";
inline const std::string kExactMatch = std::string(kNamespace) + "exactMatch";
inline const std::string kCloseMatch = std::string(kNamespace) + "closeMatch";
inline const std::string kRelatedMatch = std::string(kNamespace) + "relatedMatch";
}  // namespace skos

/// Absolute IRI naming a vocabulary term.
class TermId {
 public:
  TermId() = default;

  explicit TermId(std::string uri) : uri_(std::move(uri)) {
    if (!is_absolute_iri(uri_)) throw std::invalid_argument("not an absolute IRI: '" + uri_ + "'");
  }

  static bool is_absolute_iri(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == s.size()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    if (!alpha(s[0])) return false;
    for (char c : s.substr(1, colon - 1))
      if (!alpha(c) && !(c >= '0' && c <= '9') && c != '+' && c != '-' && c != '.') return false;
    return s.find_first_of(" \t\n<>\"") == std::string_view::npos;
  }

  const std::string& uri() const { return uri_; }
  auto operator<=>(const TermId&) const = default;

 private:
  std::string uri_;
};

struct Term {
  TermId id;
  std::string pref_label;
  std::string language;  // tag of the chosen prefLabel, may be empty
  std::vector<std::string> alt_labels;
  std::optional<std::string> definition;
  std::vector<TermId> broader;
  std::vector<TermId> narrower;
  std::vector<TermId> related;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Ordered by TermId.
  const std::map<TermId, Term>& terms() const { return terms_; }

  const Term* find(const TermId& id) const {
    auto it = terms_.find(id);
    return it == terms_.end() ? nullptr : &it->second;
  }

  bool add(Term term) {
    TermId id = term.id;
    return terms_.emplace(std::move(id), std::move(term)).second;
  }

  /// broader/narrower/related targets that are not terms of this vocabulary.
  std::set<TermId> external_references() const {
    std::set<TermId> out;
    for (const auto& [id, term] : terms_)
      for (const auto* links : {&term.broader, &term.narrower, &term.related})
        for (const TermId& target : *links)
          if (!terms_.count(target)) out.insert(target);
    return out;
  }

 private:
  std::string name_;
  std::map<TermId, Term> terms_;
};

enum class MappingRelation { Exact, Close, Related };

inline const std::string& predicate_iri(MappingRelation r) {
  switch (r) {
    case MappingRelation::Exact: return skos::kExactMatch;
    case MappingRelation::Close: return skos::kCloseMatch;
    case MappingRelation::Related: break;
  }
  return skos::kRelatedMatch;
}

inline std::optional<MappingRelation> relation_from_predicate(std::string_view iri) {
  if (iri == skos::kExactMatch) return MappingRelation::Exact;
  if (iri == skos::kCloseMatch) return MappingRelation::Close;
  if (iri == skos::kRelatedMatch) return MappingRelation::Related;
  return std::nullopt;
}

inline std::string_view to_string(MappingRelation r) {
  switch (r) {
    case MappingRelation::Exact: return "exact";
    case MappingRelation::Close: return "close";
    case MappingRelation::Related: break;
  }
  return "related";
}

enum class Provenance { LabelDerived, DefinitionDerived };

inline std::string_view to_string(Provenance p) {
  return p == Provenance::LabelDerived ? "label" : "definition";
}

/// Parameters of one mapping run. A null taxonomy means every synset is
/// salient.
struct MapperConfig {
  std::uint32_t ol_min = 0;
  std::uint32_t f_min = 0;
  std::shared_ptr<const SynsetSet> taxonomy;
  bool use_alt_labels = false;
  std::uint64_t seed = 0;
};

/// A triple <term, relation, synset> with its salience score.
struct Mapping {
  TermId term;
  MappingRelation relation = MappingRelation::Related;
  std::string synset;                  // synset IRI
  std::optional<SynsetId> synset_id;   // absent for mappings read from files
  double score = 1.0;
  Provenance provenance = Provenance::LabelDerived;
  std::string source_word;

  using Key = std::tuple<std::string, MappingRelation, std::string>;
  Key key() const { return {term.uri(), relation, synset}; }
};

/// Mappings without duplicate (term, relation, synset) triples, in insertion
/// order.
class MappingSet {
 public:
  MappingSet() = default;
  explicit MappingSet(std::optional<MapperConfig> config) : config_(std::move(config)) {}

  /// False when the triple is already present; the first one is kept.
  bool insert(Mapping m) {
    if (m.provenance == Provenance::DefinitionDerived && m.relation != MappingRelation::Related)
      throw std::invalid_argument("definition-derived mappings must be 'related'");
    if (!(m.score >= 0.0 && m.score <= 1.0))
      throw std::invalid_argument("mapping score outside [0,1]");
    if (!keys_.insert(m.key()).second) return false;
    mappings_.push_back(std::move(m));
    return true;
  }

  bool contains(const Mapping::Key& key) const { return keys_.count(key) != 0; }
  const std::set<Mapping::Key>& keys() const { return keys_; }
  const std::vector<Mapping>& mappings() const { return mappings_; }
  std::size_t size() const { return mappings_.size(); }
  bool empty() const { return mappings_.empty(); }

  const std::optional<MapperConfig>& config() const { return config_; }
  void set_config(MapperConfig config) { config_ = std::move(config); }

  /// Pointers into mappings() ordered by (subject, predicate, object).
  std::vector<const Mapping*> sorted() const {
    std::vector<const Mapping*> out;
    out.reserve(mappings_.size());
    for (const auto& m : mappings_) out.push_back(&m);
    std::sort(out.begin(), out.end(), [](const Mapping* a, const Mapping* b) {
      return std::forward_as_tuple(a->term.uri(), predicate_iri(a->relation), a->synset) <
             std::forward_as_tuple(b->term.uri(), predicate_iri(b->relation), b->synset);
    });
    return out;
  }

 private:
  std::vector<Mapping> mappings_;
  std::set<Mapping::Key> keys_;
  std::optional<MapperConfig> config_;
};

/// A parse result together with the non-fatal problems met on the way.
template <typename T>
struct Parsed {
  T value;
  std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// Readers and writers

namespace detail {

// Preferred language order: English, untagged, then first seen.
template <typename Entries>
const std::string* pick_language(const Entries& entries, std::string* language) {
  if (entries.empty()) return nullptr;
  for (std::string_view want : {std::string_view("en"), std::string_view("")})
    for (const auto& [lang, text] : entries)
      if (lang == want) {
        if (language) *language = lang;
        return &text;
      }
  if (language) *language = entries.front().first;
  return &entries.front().second;
}

}  // namespace detail

/// Reads SKOS concepts from N-Triples. Only subjects with a prefLabel become
/// terms; unknown predicates are ignored.
inline Parsed<Vocabulary> parse_vocabulary_ntriples(std::string_view text,
                                                    std::string name = "vocabulary") {
  struct Draft {
    std::size_t line = 0;
    std::vector<std::pair<std::string, std::string>> pref;  // (lang, text), first per lang
    std::vector<std::pair<std::string, std::string>> definition;
    std::vector<std::string> alt;
    std::vector<std::string> broader, narrower, related;
  };
  std::map<std::string, Draft> drafts;
  std::vector<std::string> order;
  Parsed<Vocabulary> out{Vocabulary(std::move(name)), {}};
  auto warn = [&](std::size_t line, const std::string& what) {
    out.warnings.push_back("line " + std::to_string(line) + ": " + what);
  };

  for (const nt::Triple& t : nt::parse(text)) {
    if (t.subject.kind != nt::NodeKind::Iri) continue;
    const std::string& p = t.predicate.value;
    const bool literal_pred = p == skos::kPrefLabel || p == skos::kAltLabel || p == skos::kDefinition;
    const bool link_pred = p == skos::kBroader || p == skos::kNarrower || p == skos::kRelated;
    if (!literal_pred && !link_pred) continue;

    auto [it, fresh] = drafts.try_emplace(t.subject.value);
    if (fresh) {
      it->second.line = t.line;
      order.push_back(t.subject.value);
    }
    Draft& d = it->second;

    if (literal_pred) {
      if (t.object.kind != nt::NodeKind::Literal) {
        warn(t.line, "expected a literal object for " + p);
        continue;
      }
      const std::string& lang = t.object.language;
      if (p == skos::kPrefLabel) {
        const bool dup = std::any_of(d.pref.begin(), d.pref.end(),
                                     [&](const auto& e) { return e.first == lang; });
        if (dup)
          warn(t.line, "extra prefLabel" + (lang.empty() ? std::string() : "@" + lang) +
                           " for " + t.subject.value + " ignored");
        else
          d.pref.emplace_back(lang, detail::trim(t.object.value));
      } else if (p == skos::kAltLabel) {
        d.alt.push_back(detail::trim(t.object.value));
      } else {
        const bool dup = std::any_of(d.definition.begin(), d.definition.end(),
                                     [&](const auto& e) { return e.first == lang; });
        if (!dup) d.definition.emplace_back(lang, t.object.value);
      }
    } else {
      if (t.object.kind != nt::NodeKind::Iri) {
        warn(t.line, "expected an IRI object for " + p);
        continue;
      }
      auto& target = p == skos::kBroader ? d.broader : p == skos::kNarrower ? d.narrower : d.related;
      target.push_back(t.object.value);
    }
  }

  for (const std::string& subject : order) {
    Draft& d = drafts[subject];
    if (d.pref.empty()) {
      if (!d.definition.empty()) warn(d.line, "term " + subject + " has a definition but no prefLabel; skipped");
      continue;
    }
    if (!TermId::is_absolute_iri(subject)) {
      warn(d.line, "subject '" + subject + "' is not an absolute IRI; skipped");
      continue;
    }
    Term term;
    term.id = TermId(subject);
    term.pref_label = *detail::pick_language(d.pref, &term.language);
    if (term.pref_label.empty()) {
      warn(d.line, "term " + subject + " has an empty prefLabel; skipped");
      continue;
    }
    if (const std::string* def = detail::pick_language(d.definition, nullptr)) term.definition = *def;
    std::set<std::string> seen{term.pref_label};
    for (auto& [lang, label] : d.pref)
      if (seen.insert(label).second) term.alt_labels.push_back(label);
    for (auto& label : d.alt)
      if (!label.empty() && seen.insert(label).second) term.alt_labels.push_back(label);
    auto links = [&](const std::vector<std::string>& iris, std::vector<TermId>& into) {
      for (const auto& iri : iris) {
        if (TermId::is_absolute_iri(iri)) into.emplace_back(iri);
        else warn(d.line, "link target '" + iri + "' is not an absolute IRI; dropped");
      }
    };
    links(d.broader, term.broader);
    links(d.narrower, term.narrower);
    links(d.related, term.related);
    out.value.add(std::move(term));
  }
  return out;
}

/// One `<term> <skos:...Match> <synset> .` line per mapping, sorted.
inline std::string serialize_mappings_ntriples(const MappingSet& set) {
  std::string out;
  for (const Mapping* m : set.sorted()) {
    out += '<';
    out += m->term.uri();
    out += "> <";
    out += predicate_iri(m->relation);
    out += "> <";
    out += m->synset;
    out += "> .\n";
  }
  return out;
}

inline std::string format_fixed(double value, int decimals = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

inline std::string serialize_mappings_tsv(const MappingSet& set) {
  std::string out = "term\trelation\tsynset\tscore\tprovenance\tsource_word\n";
  for (const Mapping* m : set.sorted()) {
    out += m->term.uri();
    out += '\t';
    out += to_string(m->relation);
    out += '\t';
    out += m->synset;
    out += '\t';
    out += format_fixed(m->score);
    out += '\t';
    out += to_string(m->provenance);
    out += '\t';
    out += m->source_word;
    out += '\n';
  }
  return out;
}

/// Reads a gold standard (or any mapping file) written as SKOS mapping
/// triples. Scores default to 1. When a store is given, synset IRIs are
/// resolved to ids where possible.
inline Parsed<MappingSet> load_gold(std::string_view text, const WordNetStore* store = nullptr) {
  Parsed<MappingSet> out;
  for (const nt::Triple& t : nt::parse(text)) {
    auto relation = relation_from_predicate(t.predicate.value);
    if (!relation) {
      out.warnings.push_back("line " + std::to_string(t.line) + ": predicate " +
                             t.predicate.value + " is not a mapping relation; ignored");
      continue;
    }
    if (t.subject.kind != nt::NodeKind::Iri || t.object.kind != nt::NodeKind::Iri ||
        !TermId::is_absolute_iri(t.subject.value)) {
      out.warnings.push_back("line " + std::to_string(t.line) + ": mapping needs IRI subject and object; ignored");
      continue;
    }
    Mapping m;
    m.term = TermId(t.subject.value);
    m.relation = *relation;
    m.synset = t.object.value;
    if (store && std::string_view(m.synset).starts_with(kSynsetNamespace))
      m.synset_id = store->resolve(std::string_view(m.synset).substr(kSynsetNamespace.size()));
    if (!out.value.insert(std::move(m)))
      out.warnings.push_back("line " + std::to_string(t.line) + ": duplicate mapping ignored");
  }
  return out;
}

}  // namespace wnmap

#endif  // WNMAP_VOCAB_HPP
