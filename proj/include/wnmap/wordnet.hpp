#ifndef WNMAP_WORDNET_HPP
#define WNMAP_WORDNET_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wnmap/error.hpp"

namespace wnmap {

inline constexpr std::string_view kSynsetNamespace =
    "http://www.w3.org/2006/03/wn/wn20/instances/synset-";

/// Identity of a synset: part of speech plus its database offset.
struct SynsetId {
  char pos = 'n';
  std::uint32_t offset = 0;

  auto operator<=>(const SynsetId&) const = default;
};

struct WordSense {
  std::string lemma;  // lowercase, collocations joined with '_'
  SynsetId synset;
  int sense_number = 1;
  std::uint32_t tag_frequency = 0;

  bool operator==(const WordSense&) const = default;
};

struct RelationKind {
  enum Kind { HyponymOf, PartMeronymOf, Other };

  Kind kind = Other;
  std::string label;  // source symbol or name, kept for Other

  static RelationKind hyponym_of() { return {HyponymOf, "hyponymOf"}; }
  static RelationKind part_meronym_of() { return {PartMeronymOf, "partMeronymOf"}; }
  static RelationKind other(std::string label) { return {Other, std::move(label)}; }

  bool is_taxonomic() const { return kind == HyponymOf || kind == PartMeronymOf; }
  bool operator==(const RelationKind&) const = default;
};

struct Relation {
  RelationKind kind;
  SynsetId target;

  bool operator==(const Relation&) const = default;
};

struct Synset {
  SynsetId id;
  std::vector<WordSense> senses;
  std::string gloss;
  std::vector<Relation> relations;
};

/// The salient taxonomy: a set of synsets of one store.
using SynsetSet = std::set<SynsetId>;

namespace detail {

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

template <typename T>
bool parse_number(std::string_view token, T& out, int base = 10) {
  if (token.empty()) return false;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out, base);
  return ec == std::errc() && ptr == end;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, number);
    start = end + 1;
  }
}

}  // namespace detail

/// Read-only, indexed noun WordNet. Built once, then shared freely.
class WordNetStore {
 public:
  class Builder;

  WordNetStore() = default;

  std::size_t size() const { return synsets_.size(); }
  bool empty() const { return synsets_.empty(); }

  const std::map<SynsetId, Synset>& synsets() const { return synsets_; }

  const Synset* find(SynsetId id) const {
    auto it = synsets_.find(id);
    return it == synsets_.end() ? nullptr : &it->second;
  }

  const Synset& at(SynsetId id) const {
    if (const Synset* s = find(id)) return *s;
    throw std::out_of_range("unknown synset n" + std::to_string(id.offset));
  }

  bool contains(SynsetId id) const { return synsets_.count(id) != 0; }

  /// All noun senses of `lemma` ordered by sense number.
  std::span<const WordSense> lookup_senses(std::string_view lemma) const {
    auto it = index_.find(std::string(lemma));
    if (it == index_.end()) return {};
    return it->second;
  }

  bool has_lemma(std::string_view lemma) const {
    return index_.count(std::string(lemma)) != 0;
  }

  const std::map<std::string, std::vector<WordSense>>& lemma_index() const {
    return index_;
  }

  const std::unordered_map<std::string, std::string>& exceptions() const {
    return exceptions_;
  }

  std::optional<std::string_view> exception_base(std::string_view form) const {
    auto it = exceptions_.find(std::string(form));
    if (it == exceptions_.end()) return std::nullopt;
    return std::string_view(it->second);
  }

  /// Synsets whose HyponymOf or PartMeronymOf edges point at `id`.
  std::span<const SynsetId> taxonomic_children(SynsetId id) const {
    auto it = children_.find(id);
    if (it == children_.end()) return {};
    return it->second;
  }

  /// Every synset reachable from `roots` by descending HyponymOf and
  /// PartMeronymOf edges, roots included.
  SynsetSet taxonomy_closure(std::span<const SynsetId> roots) const {
    SynsetSet visited;
    std::deque<SynsetId> queue;
    for (SynsetId root : roots) {
      if (!contains(root))
        throw std::out_of_range("unknown taxonomy root n" + std::to_string(root.offset));
      if (visited.insert(root).second) queue.push_back(root);
    }
    while (!queue.empty()) {
      const SynsetId current = queue.front();
      queue.pop_front();
      for (SynsetId child : taxonomic_children(current))
        if (visited.insert(child).second) queue.push_back(child);
    }
    return visited;
  }

  /// `<first lemma>-noun-<its sense number>`, the W3C WordNet 2.0 naming.
  std::string synset_name(SynsetId id) const {
    const WordSense& first = at(id).senses.front();
    return first.lemma + "-noun-" + std::to_string(first.sense_number);
  }

  std::string synset_uri(SynsetId id) const {
    return std::string(kSynsetNamespace) + synset_name(id);
  }

  /// Resolves `lemma-noun-N`, `n<offset>` or a bare offset.
  std::optional<SynsetId> resolve(std::string_view name) const {
    if (const auto pos = name.rfind("-noun-"); pos != std::string_view::npos) {
      int sense = 0;
      if (!detail::parse_number(name.substr(pos + 6), sense)) return std::nullopt;
      for (const WordSense& ws : lookup_senses(detail::ascii_lower(name.substr(0, pos))))
        if (ws.sense_number == sense) return ws.synset;
      return std::nullopt;
    }
    if (!name.empty() && name.front() == 'n') name.remove_prefix(1);
    std::uint32_t offset = 0;
    if (!detail::parse_number(name, offset)) return std::nullopt;
    const SynsetId id{'n', offset};
    if (!contains(id)) return std::nullopt;
    return id;
  }

 private:
  std::map<SynsetId, Synset> synsets_;
  std::map<std::string, std::vector<WordSense>> index_;
  std::unordered_map<std::string, std::string> exceptions_;
  std::map<SynsetId, std::vector<SynsetId>> children_;
};

/// Collects synsets and validates them into a WordNetStore.
class WordNetStore::Builder {
 public:
  explicit Builder(std::string source = "<memory>") : source_(std::move(source)) {}

  /// `line` is used only for error messages.
  Builder& add_synset(Synset synset, std::size_t line = 0) {
    if (synset.id.pos != 'n')
      throw LoadError(source_, line, "only noun synsets are supported");
    const SynsetId id = synset.id;
    for (WordSense& ws : synset.senses) ws.synset = id;
    if (!store_.synsets_.emplace(id, std::move(synset)).second)
      throw LoadError(source_, line, "duplicate synset id " + std::to_string(id.offset));
    lines_[id] = line;
    return *this;
  }

  Builder& add_exception(std::string form, std::string base) {
    store_.exceptions_.emplace(std::move(form), std::move(base));
    return *this;
  }

  WordNetStore build() && {
    std::set<std::pair<std::string, int>> seen;
    for (auto& [id, synset] : store_.synsets_) {
      const std::size_t line = lines_[id];
      if (synset.senses.empty())
        throw LoadError(source_, line,
                        "synset " + std::to_string(id.offset) + " has no word senses");
      for (const WordSense& ws : synset.senses) {
        if (ws.lemma.empty())
          throw LoadError(source_, line, "empty lemma in synset " + std::to_string(id.offset));
        if (ws.sense_number < 1)
          throw LoadError(source_, line, "sense number must be >= 1 for " + ws.lemma);
        if (!seen.emplace(ws.lemma, ws.sense_number).second)
          throw LoadError(source_, line,
                          "duplicate sense " + ws.lemma + "#" + std::to_string(ws.sense_number));
        store_.index_[ws.lemma].push_back(ws);
      }
      for (const Relation& rel : synset.relations) {
        if (!store_.synsets_.count(rel.target))
          throw LoadError(source_, line,
                          "dangling relation " + rel.kind.label + " from " +
                              std::to_string(id.offset) + " to " +
                              std::to_string(rel.target.offset));
        if (rel.kind.is_taxonomic()) store_.children_[rel.target].push_back(id);
      }
    }
    for (auto& [lemma, senses] : store_.index_)
      std::sort(senses.begin(), senses.end(),
                [](const WordSense& a, const WordSense& b) {
                  return a.sense_number < b.sense_number;
                });
    for (auto& [id, kids] : store_.children_) {
      std::sort(kids.begin(), kids.end());
      kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    }
    return std::move(store_);
  }

 private:
  std::string source_;
  WordNetStore store_;
  std::map<SynsetId, std::size_t> lines_;
};

// ---------------------------------------------------------------------------
// Princeton WNDB loader

namespace detail {

// Noun pointer symbols that feed the salient taxonomy. Instance hypernyms
// (WordNet 2.1+) are plain hypernyms in 2.0, so both count as HyponymOf.
inline RelationKind relation_from_pointer(std::string_view symbol) {
  if (symbol == "@" || symbol == "@i") return RelationKind::hyponym_of();
  if (symbol == "#p") return RelationKind::part_meronym_of();
  return RelationKind::other(std::string(symbol));
}

}  // namespace detail

/// Builds a store from the contents of index.noun, data.noun, cntlist.rev and
/// noun.exc. Senses missing from cntlist.rev get tag frequency 0.
inline WordNetStore load_wndb(std::string_view index_noun, std::string_view data_noun,
                              std::string_view cntlist_rev, std::string_view noun_exc) {
  using detail::parse_number;
  using detail::split_ws;

  // (lemma, sense number) -> tag count
  std::map<std::pair<std::string, int>, std::uint32_t> counts;
  detail::for_each_line(cntlist_rev, [&](std::string_view line, std::size_t no) {
    const auto f = split_ws(line);
    if (f.empty()) return;
    if (f.size() != 3) throw LoadError("cntlist.rev", no, "expected 3 fields");
    const auto pct = f[0].find('%');
    if (pct == std::string_view::npos || pct + 1 >= f[0].size())
      throw LoadError("cntlist.rev", no, "malformed sense key");
    if (f[0][pct + 1] != '1') return;  // not a noun
    int sense = 0;
    std::uint32_t tag = 0;
    if (!parse_number(f[1], sense) || !parse_number(f[2], tag))
      throw LoadError("cntlist.rev", no, "malformed sense number or count");
    counts[{detail::ascii_lower(f[0].substr(0, pct)), sense}] = tag;
  });

  // (lemma, offset) -> sense number
  std::map<std::pair<std::string, std::uint32_t>, int> sense_numbers;
  detail::for_each_line(index_noun, [&](std::string_view line, std::size_t no) {
    if (line.empty() || line.front() == ' ') return;  // license header
    const auto f = split_ws(line);
    std::size_t synset_cnt = 0, p_cnt = 0;
    if (f.size() < 4 || f[1] != "n" || !parse_number(f[2], synset_cnt) ||
        !parse_number(f[3], p_cnt))
      throw LoadError("index.noun", no, "malformed index entry");
    const std::size_t first = 4 + p_cnt + 2;
    if (f.size() != first + synset_cnt)
      throw LoadError("index.noun", no, "synset count does not match offsets");
    const std::string lemma = detail::ascii_lower(f[0]);
    for (std::size_t i = 0; i < synset_cnt; ++i) {
      std::uint32_t offset = 0;
      if (!parse_number(f[first + i], offset))
        throw LoadError("index.noun", no, "malformed synset offset");
      sense_numbers[{lemma, offset}] = static_cast<int>(i + 1);
    }
  });

  WordNetStore::Builder builder("data.noun");
  std::set<std::pair<std::string, std::uint32_t>> used;
  detail::for_each_line(data_noun, [&](std::string_view line, std::size_t no) {
    if (line.empty() || line.front() == ' ') return;
    const auto bar = line.find(" | ");
    std::string gloss;
    std::string_view head = line;
    if (bar != std::string_view::npos) {
      gloss = std::string(line.substr(bar + 3));
      while (!gloss.empty() && (gloss.back() == ' ' || gloss.back() == '\t')) gloss.pop_back();
      head = line.substr(0, bar);
    }
    const auto f = split_ws(head);
    auto fail = [&](const std::string& what) -> void { throw LoadError("data.noun", no, what); };
    Synset synset;
    std::size_t w_cnt = 0;
    if (f.size() < 4 || !parse_number(f[0], synset.id.offset) || f[2] != "n" ||
        !parse_number(f[3], w_cnt, 16))
      fail("malformed synset header");
    std::size_t i = 4;
    if (f.size() < i + 2 * w_cnt + 1) fail("truncated word list");
    for (std::size_t w = 0; w < w_cnt; ++w, i += 2) {
      std::string lemma = detail::ascii_lower(f[i]);
      if (const auto paren = lemma.find('('); paren != std::string::npos) lemma.resize(paren);
      auto it = sense_numbers.find({lemma, synset.id.offset});
      if (it == sense_numbers.end()) fail("word '" + lemma + "' missing from index.noun");
      used.insert(it->first);
      WordSense ws;
      ws.lemma = lemma;
      ws.sense_number = it->second;
      if (auto c = counts.find({lemma, it->second}); c != counts.end()) ws.tag_frequency = c->second;
      synset.senses.push_back(std::move(ws));
    }
    std::size_t p_cnt = 0;
    if (!parse_number(f[i], p_cnt)) fail("malformed pointer count");
    ++i;
    if (f.size() < i + 4 * p_cnt) fail("truncated pointer list");
    for (std::size_t p = 0; p < p_cnt; ++p, i += 4) {
      std::uint32_t target = 0;
      if (!parse_number(f[i + 1], target)) fail("malformed pointer offset");
      if (f[i + 2] != "n") continue;  // cross-POS pointers leave the noun store
      synset.relations.push_back({detail::relation_from_pointer(f[i]), SynsetId{'n', target}});
    }
    synset.gloss = std::move(gloss);
    builder.add_synset(std::move(synset), no);
  });
  if (used.size() != sense_numbers.size()) {
    for (const auto& [key, sense] : sense_numbers)
      if (!used.count(key))
        throw LoadError("index.noun", 0,
                        "entry " + key.first + " points at unknown synset " +
                            std::to_string(key.second));
  }

  detail::for_each_line(noun_exc, [&](std::string_view line, std::size_t no) {
    const auto f = split_ws(line);
    if (f.empty()) return;
    if (f.size() < 2) throw LoadError("noun.exc", no, "expected inflected form and base");
    builder.add_exception(detail::ascii_lower(f[0]), detail::ascii_lower(f[1]));
  });

  return std::move(builder).build();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Loads a WNDB `dict/` directory. cntlist.rev and noun.exc are optional.
inline WordNetStore load_wndb_dir(const std::filesystem::path& dir) {
  auto optional_file = [&](const char* name) {
    const auto p = dir / name;
    return std::filesystem::exists(p) ? read_file(p) : std::string();
  };
  return load_wndb(read_file(dir / "index.noun"), read_file(dir / "data.noun"),
                   optional_file("cntlist.rev"), optional_file("noun.exc"));
}

// ---------------------------------------------------------------------------
// JSON fixture loader (schema in docs/fixture-schema.md)

inline WordNetStore load_fixture(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw LoadError("fixture", 0, std::string("invalid JSON: ") + e.what());
  }
  auto fail = [](const std::string& what) -> void { throw LoadError("fixture", 0, what); };
  if (!doc.is_object() || !doc.contains("synsets") || !doc["synsets"].is_array())
    fail("top level must be an object with a 'synsets' array");

  WordNetStore::Builder builder("fixture");
  std::size_t n = 0;
  for (const json& js : doc["synsets"]) {
    ++n;
    const std::string where = "synsets[" + std::to_string(n - 1) + "]";
    if (!js.is_object()) fail(where + " must be an object");
    if (!js.contains("id") || !js["id"].is_number_unsigned())
      fail(where + ".id must be a non-negative integer");
    if (!js.contains("lemmas") || !js["lemmas"].is_array() || js["lemmas"].empty())
      fail(where + ".lemmas must be a non-empty array");
    Synset synset;
    synset.id = SynsetId{'n', js["id"].get<std::uint32_t>()};
    synset.gloss = js.value("gloss", std::string());
    for (const json& jl : js["lemmas"]) {
      if (!jl.is_object() || !jl.contains("lemma") || !jl["lemma"].is_string())
        fail(where + ": lemma entries need a string 'lemma'");
      WordSense ws;
      ws.lemma = detail::ascii_lower(jl["lemma"].get<std::string>());
      if (!jl.contains("senseNumber") || !jl["senseNumber"].is_number_integer())
        fail(where + ": lemma '" + ws.lemma + "' needs an integer 'senseNumber'");
      ws.sense_number = jl["senseNumber"].get<int>();
      if (jl.contains("frequency")) {
        if (!jl["frequency"].is_number_unsigned())
          fail(where + ": frequency of '" + ws.lemma + "' must be a non-negative integer");
        ws.tag_frequency = jl["frequency"].get<std::uint32_t>();
      }
      synset.senses.push_back(std::move(ws));
    }
    if (js.contains("relations")) {
      if (!js["relations"].is_array()) fail(where + ".relations must be an array");
      for (const json& jr : js["relations"]) {
        if (!jr.is_object() || !jr.contains("kind") || !jr["kind"].is_string() ||
            !jr.contains("target") || !jr["target"].is_number_unsigned())
          fail(where + ": relations need a string 'kind' and integer 'target'");
        const auto kind = jr["kind"].get<std::string>();
        RelationKind rk = kind == "hyponymOf"       ? RelationKind::hyponym_of()
                          : kind == "partMeronymOf" ? RelationKind::part_meronym_of()
                                                    : RelationKind::other(kind);
        synset.relations.push_back({std::move(rk), SynsetId{'n', jr["target"].get<std::uint32_t>()}});
      }
    }
    builder.add_synset(std::move(synset), n);
  }
  if (doc.contains("exceptions")) {
    if (!doc["exceptions"].is_object()) fail("'exceptions' must be an object");
    for (const auto& [form, base] : doc["exceptions"].items()) {
      if (!base.is_string()) fail("exception '" + form + "' must map to a string");
      builder.add_exception(detail::ascii_lower(form), detail::ascii_lower(base.get<std::string>()));
    }
  }
  return std::move(builder).build();
}

/// Loads a `.json` fixture file or a WNDB directory.
inline WordNetStore load_wordnet(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return load_wndb_dir(path);
  return load_fixture(read_file(path));
}

}  // namespace wnmap

#endif  // WNMAP_WORDNET_HPP
