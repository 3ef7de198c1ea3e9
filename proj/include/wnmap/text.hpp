#ifndef WNMAP_TEXT_HPP
#define WNMAP_TEXT_HPP

#include <algorithm>
#include <array>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "wnmap/generated/stopwords_en.hpp"
#include "wnmap/wordnet.hpp"

namespace wnmap {

/// Distinct, lowercase, stopword-free lemmas.
using LemmaBag = std::set<std::string>;

class StopwordSet {
 public:
  StopwordSet() = default;

  /// One word per line; blank lines and `#` comments are skipped.
  static StopwordSet from_text(std::string_view text) {
    StopwordSet set;
    detail::for_each_line(text, [&](std::string_view line, std::size_t) {
      while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
      while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
      if (line.empty() || line.front() == '#') return;
      set.words_.insert(detail::ascii_lower(line));
    });
    return set;
  }

  static StopwordSet from_file(const std::filesystem::path& path) {
    StopwordSet set = from_text(read_file(path));
    if (set.empty()) throw LoadError(path.string(), 0, "stopword list is empty");
    return set;
  }

  /// The list shipped in data/stopwords_en.txt.
  static const StopwordSet& english() {
    static const StopwordSet set = from_text(generated::kStopwordsEn);
    return set;
  }

  bool contains(std::string_view word) const { return words_.count(std::string(word)) != 0; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

namespace detail {

inline bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') ||
         u == '-' || u >= 0x80;
}

}  // namespace detail

/// Lowercase runs of letters, digits and hyphens. Hyphens at the edges of a
/// run are trimmed and runs without any letter or digit are dropped.
/// Non-ASCII bytes count as letters so UTF-8 words stay whole.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !detail::is_word_byte(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && detail::is_word_byte(text[i])) ++i;
    std::size_t end = i;
    while (start < end && text[start] == '-') ++start;
    while (end > start && text[end - 1] == '-') --end;
    if (end > start) out.push_back(detail::ascii_lower(text.substr(start, end - start)));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

/// Noun suffix detachment rules, tried in order.
inline constexpr std::array<std::pair<std::string_view, std::string_view>, 8> kNounRules{{
    {"s", ""},
    {"ses", "s"},
    {"xes", "x"},
    {"zes", "z"},
    {"ches", "ch"},
    {"shes", "sh"},
    {"ies", "y"},
    {"men", "man"},
}};

/// Morphy-style noun lemmatizer: exception list, then the token itself if it
/// is a known lemma, then the first suffix rule whose result is a known lemma.
inline std::string lemmatize_noun(std::string_view token, const WordNetStore& store) {
  if (auto base = store.exception_base(token)) return std::string(*base);
  if (store.has_lemma(token)) return std::string(token);
  for (const auto& [suffix, replacement] : kNounRules) {
    if (token.size() <= suffix.size() || !token.ends_with(suffix)) continue;
    std::string candidate(token.substr(0, token.size() - suffix.size()));
    candidate += replacement;
    if (store.has_lemma(candidate)) return candidate;
  }
  return std::string(token);
}

/// tokenize, drop stopwords, lemmatize, deduplicate, drop `exclude`.
inline LemmaBag normalize_definition(std::string_view text, const LemmaBag& exclude,
                                     const WordNetStore& store, const StopwordSet& stopwords) {
  LemmaBag bag;
  for (const std::string& token : tokenize(text)) {
    if (stopwords.contains(token)) continue;
    std::string lemma = lemmatize_noun(token, store);
    if (lemma.empty() || stopwords.contains(lemma) || exclude.count(lemma)) continue;
    bag.insert(std::move(lemma));
  }
  return bag;
}

/// Number of distinct lemmas shared by both bags.
inline std::size_t lexical_overlap(const LemmaBag& a, const LemmaBag& b) {
  const LemmaBag& small = a.size() <= b.size() ? a : b;
  const LemmaBag& large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (const auto& lemma : small) n += large.count(lemma);
  return n;
}

/// The full collocation first, then each token on its own.
inline std::vector<std::string> compound_candidates(std::string_view label) {
  std::vector<std::string> tokens = tokenize(label);
  if (tokens.size() <= 1) return tokens;
  std::vector<std::string> out;
  out.reserve(tokens.size() + 1);
  out.push_back(join(tokens, "_"));
  out.insert(out.end(), tokens.begin(), tokens.end());
  return out;
}

/// Lemmas that stand for the label itself: each token lemmatized, plus the
/// underscore collocation. Used to exclude the defined term from overlaps.
inline LemmaBag label_lemmas(std::string_view label, const WordNetStore& store) {
  LemmaBag out;
  const auto tokens = tokenize(label);
  for (const auto& token : tokens) out.insert(lemmatize_noun(token, store));
  if (tokens.size() > 1) out.insert(lemmatize_noun(join(tokens, "_"), store));
  return out;
}

/// Noun lemmas mentioned in a definition, in order of first occurrence.
/// Adjacent token pairs that form a known collocation are taken as one term
/// and their parts are not emitted separately.
inline std::vector<std::string> extract_definition_terms(std::string_view definition,
                                                         const WordNetStore& store,
                                                         const StopwordSet& stopwords,
                                                         const LemmaBag& exclude = {}) {
  const auto tokens = tokenize(definition);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  auto emit = [&](std::string lemma) {
    if (exclude.count(lemma) || stopwords.contains(lemma)) return;
    if (seen.insert(lemma).second) out.push_back(std::move(lemma));
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (stopwords.contains(tokens[i])) continue;
    if (i + 1 < tokens.size() && !stopwords.contains(tokens[i + 1])) {
      std::string pair = lemmatize_noun(tokens[i] + "_" + tokens[i + 1], store);
      if (store.has_lemma(pair)) {
        emit(std::move(pair));
        ++i;
        continue;
      }
    }
    std::string lemma = lemmatize_noun(tokens[i], store);
    if (store.has_lemma(lemma)) emit(std::move(lemma));
  }
  return out;
}

}  // namespace wnmap

#endif  // WNMAP_TEXT_HPP
