#ifndef WNMAP_NTRIPLES_HPP
#define WNMAP_NTRIPLES_HPP

// Minimal line-oriented N-Triples reader. Enough of the W3C grammar to read
// SKOS vocabularies and mapping files: IRIs, blank nodes, literals with
// language tags or datatypes, string escapes and comments.

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wnmap/error.hpp"

namespace wnmap::nt {

enum class NodeKind { Iri, Blank, Literal };

struct Node {
  NodeKind kind = NodeKind::Iri;
  std::string value;     // IRI, blank label or lexical form
  std::string language;  // literals only, lowercase
  std::string datatype;  // literals only
};

struct Triple {
  Node subject;
  Node predicate;
  Node object;
  std::size_t line = 0;
};

namespace detail {

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class LineReader {
 public:
  LineReader(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1), line_);
  }

  std::uint32_t hex(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated \\u escape");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char c = s_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<std::uint32_t>(c - 'A' + 10);
      else fail("bad hex digit in escape");
    }
    return cp;
  }

  std::string iri() {
    ++pos_;  // '<'
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      const char c = s_[pos_++];
      if (c == '>') break;
      if (c == ' ' || c == '<' || c == '"') fail("illegal character in IRI");
      if (c == '\\') {
        const char e = peek();
        ++pos_;
        if (e == 'u') append_utf8(out, hex(4));
        else if (e == 'U') append_utf8(out, hex(8));
        else fail("bad escape in IRI");
        continue;
      }
      out += c;
    }
    if (out.empty()) fail("empty IRI");
    return out;
  }

  std::string blank() {
    pos_ += 2;  // "_:"
    const std::size_t start = pos_;
    while (!at_end() && s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '.')
      ++pos_;
    if (start == pos_) fail("empty blank node label");
    return std::string(s_.substr(start, pos_ - start));
  }

  Node literal() {
    ++pos_;  // '"'
    Node node;
    node.kind = NodeKind::Literal;
    while (true) {
      if (at_end()) fail("unterminated literal");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        node.value += c;
        continue;
      }
      if (at_end()) fail("unterminated escape");
      const char e = s_[pos_++];
      switch (e) {
        case 't': node.value += '\t'; break;
        case 'b': node.value += '\b'; break;
        case 'n': node.value += '\n'; break;
        case 'r': node.value += '\r'; break;
        case 'f': node.value += '\f'; break;
        case '"': node.value += '"'; break;
        case '\'': node.value += '\''; break;
        case '\\': node.value += '\\'; break;
        case 'u': append_utf8(node.value, hex(4)); break;
        case 'U': append_utf8(node.value, hex(8)); break;
        default: fail(std::string("unknown escape \\") + e);
      }
    }
    if (peek() == '@') {
      ++pos_;
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                           s_[pos_] == '-'))
        ++pos_;
      if (start == pos_) fail("empty language tag");
      for (char ch : s_.substr(start, pos_ - start))
        node.language += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (peek() != '<') fail("datatype must be an IRI");
      node.datatype = iri();
    }
    return node;
  }

  Node term(bool allow_blank, bool allow_literal) {
    skip_ws();
    const char c = peek();
    if (c == '<') return Node{NodeKind::Iri, iri(), {}, {}};
    if (c == '_' && allow_blank && s_.substr(pos_, 2) == "_:")
      return Node{NodeKind::Blank, blank(), {}, {}};
    if (c == '"' && allow_literal) return literal();
    fail("unexpected token");
  }

  void finish() {
    skip_ws();
    if (peek() != '.') fail("expected '.'");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("trailing characters after '.'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

}  // namespace detail

/// Parses one line. Returns nullopt for blank and comment lines.
inline std::optional<Triple> parse_line(std::string_view line, std::size_t number) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  detail::LineReader reader(line, number);
  reader.skip_ws();
  if (reader.at_end() || reader.peek() == '#') return std::nullopt;
  Triple t;
  t.line = number;
  t.subject = reader.term(true, false);
  t.predicate = reader.term(false, false);
  t.object = reader.term(true, true);
  reader.finish();
  return t;
}

inline std::vector<Triple> parse(std::string_view text) {
  std::vector<Triple> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    if (auto t = parse_line(text.substr(start, end - start), number))
      out.push_back(std::move(*t));
    start = end + 1;
  }
  return out;
}

}  // namespace wnmap::nt

#endif  // WNMAP_NTRIPLES_HPP
