// Copyright 2026 The testaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "testaug/rust_syntax.h"

#include <algorithm>
#include <array>
#include <utility>

#include "testaug/error.h"

namespace testaug::rust {
namespace {

bool IsIdentStart(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80;
}

bool IsIdentChar(unsigned char c) {
  return IsIdentStart(c) || (c >= '0' && c <= '9');
}

bool IsDigit(unsigned char c) { return c >= '0' && c <= '9'; }

std::size_t Utf8Length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  // Returns an empty string on success, otherwise a diagnostic.
  std::string Run(std::vector<Token>& out) {
    std::vector<std::size_t> open_stack;
    while (pos_ < src_.size()) {
      const unsigned char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
        continue;
      }
      if (Starts("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      if (Starts("/*")) {
        if (!SkipBlockComment()) return Fail("unterminated block comment");
        continue;
      }
      const std::size_t start = pos_;
      const std::size_t start_line = line_;
      TokenKind kind;
      std::string err;
      if (IsIdentStart(c)) {
        kind = LexWordOrPrefixedLiteral(err);
      } else if (IsDigit(c)) {
        LexNumber();
        kind = TokenKind::kLiteral;
      } else if (c == '"') {
        if (!LexQuoted('"')) return Fail("unterminated string literal");
        kind = TokenKind::kLiteral;
      } else if (c == '\'') {
        kind = LexQuote(err);
      } else if (c == '(' || c == '[' || c == '{') {
        ++pos_;
        kind = TokenKind::kOpen;
      } else if (c == ')' || c == ']' || c == '}') {
        ++pos_;
        kind = TokenKind::kClose;
      } else if (Starts("::") || Starts("->") || Starts("=>")) {
        pos_ += 2;
        kind = TokenKind::kPunct;
      } else {
        ++pos_;
        kind = TokenKind::kPunct;
      }
      if (!err.empty()) return Fail(err);
      Token tok{kind, start, pos_ - start, start_line};
      const std::size_t index = out.size();
      if (kind == TokenKind::kOpen) {
        open_stack.push_back(index);
      } else if (kind == TokenKind::kClose) {
        if (open_stack.empty()) return Fail("unmatched closing delimiter");
        const std::size_t open = open_stack.back();
        open_stack.pop_back();
        const char want = src_[out[open].offset] == '(' ? ')'
                          : src_[out[open].offset] == '[' ? ']'
                                                          : '}';
        if (src_[start] != want) return Fail("mismatched delimiter");
        out[open].match = index;
        tok.match = open;
      }
      out.push_back(tok);
    }
    if (!open_stack.empty()) {
      line_ = out[open_stack.back()].line;
      return Fail("unclosed delimiter");
    }
    return {};
  }

 private:
  std::string Fail(const std::string& what) const {
    return "line " + std::to_string(line_) + ": " + what;
  }

  bool Starts(std::string_view s) const {
    return src_.substr(pos_, s.size()) == s;
  }

  unsigned char At(std::size_t p) const {
    return p < src_.size() ? static_cast<unsigned char>(src_[p]) : 0;
  }

  bool SkipBlockComment() {
    int depth = 0;
    while (pos_ < src_.size()) {
      if (Starts("/*")) {
        ++depth;
        pos_ += 2;
      } else if (Starts("*/")) {
        --depth;
        pos_ += 2;
        if (depth == 0) return true;
      } else {
        if (src_[pos_] == '\n') ++line_;
        ++pos_;
      }
    }
    return false;
  }

  // Consumes a "..." or '...' literal with backslash escapes; pos_ at quote.
  bool LexQuoted(char quote) {
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        if (At(pos_ + 1) == '\n') ++line_;
        pos_ += 2;
        continue;
      }
      if (c == '\n') ++line_;
      ++pos_;
      if (c == quote) return true;
    }
    return false;
  }

  // pos_ at the first '#' or '"' after the r prefix.
  bool LexRawString() {
    std::size_t hashes = 0;
    while (At(pos_) == '#') {
      ++hashes;
      ++pos_;
    }
    if (At(pos_) != '"') return false;
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_++];
      if (c == '\n') ++line_;
      if (c != '"') continue;
      std::size_t n = 0;
      while (n < hashes && At(pos_ + n) == '#') ++n;
      if (n == hashes) {
        pos_ += hashes;
        return true;
      }
    }
    return false;
  }

  void LexNumber() {
    while (IsIdentChar(At(pos_))) ++pos_;
    if (At(pos_) == '.' && IsDigit(At(pos_ + 1))) {
      ++pos_;
      while (IsIdentChar(At(pos_))) ++pos_;
    }
    const unsigned char prev = At(pos_ - 1);
    if ((prev == 'e' || prev == 'E') && (At(pos_) == '+' || At(pos_) == '-') &&
        IsDigit(At(pos_ + 1))) {
      ++pos_;
      while (IsIdentChar(At(pos_))) ++pos_;
    }
  }

  // Char literal or lifetime; pos_ at the quote.
  TokenKind LexQuote(std::string& err) {
    const unsigned char next = At(pos_ + 1);
    if (next == '\\') {
      if (!LexQuoted('\'')) err = "unterminated char literal";
      return TokenKind::kLiteral;
    }
    const std::size_t width = Utf8Length(next);
    if (At(pos_ + 1 + width) == '\'' && next != '\'') {
      pos_ += 2 + width;
      return TokenKind::kLiteral;
    }
    if (IsIdentStart(next)) {
      ++pos_;
      while (IsIdentChar(At(pos_))) ++pos_;
      return TokenKind::kLifetime;
    }
    err = "stray quote";
    return TokenKind::kPunct;
  }

  TokenKind LexWordOrPrefixedLiteral(std::string& err) {
    const unsigned char c = At(pos_);
    const unsigned char c1 = At(pos_ + 1);
    const unsigned char c2 = At(pos_ + 2);
    // Raw strings: r"..", r#".."#, br"..", cr"..".
    if (c == 'r' && (c1 == '"' || (c1 == '#' && (c2 == '"' || c2 == '#')))) {
      ++pos_;
      if (!LexRawString()) err = "unterminated raw string";
      return TokenKind::kLiteral;
    }
    if ((c == 'b' || c == 'c') && c1 == 'r' && (c2 == '"' || c2 == '#')) {
      pos_ += 2;
      if (!LexRawString()) err = "unterminated raw string";
      return TokenKind::kLiteral;
    }
    if ((c == 'b' || c == 'c') && c1 == '"') {
      ++pos_;
      if (!LexQuoted('"')) err = "unterminated string literal";
      return TokenKind::kLiteral;
    }
    if (c == 'b' && c1 == '\'') {
      ++pos_;
      if (!LexQuoted('\'')) err = "unterminated byte literal";
      return TokenKind::kLiteral;
    }
    if (c == 'r' && c1 == '#' && IsIdentStart(c2)) pos_ += 2;
    while (IsIdentChar(At(pos_))) ++pos_;
    return TokenKind::kIdent;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

constexpr std::array<std::string_view, 38> kKeywords = {
    "as",     "async", "await", "break",  "const",  "continue", "crate",
    "dyn",    "else",  "enum",  "extern", "false",  "fn",       "for",
    "if",     "impl",  "in",    "let",    "loop",   "match",    "mod",
    "move",   "mut",   "pub",   "ref",    "return", "self",     "Self",
    "static", "struct", "super", "trait", "true",   "type",     "unsafe",
    "use",    "where", "while"};

struct ScanContext {
  std::vector<std::string> module_path;
  std::optional<std::string> impl_type;
  bool in_cfg_test = false;
};

class ItemScanner {
 public:
  ItemScanner(const TokenStream& ts, ItemIndex& out) : ts_(ts), out_(out) {}

  void Scan(std::size_t begin, std::size_t end, const ScanContext& ctx) {
    std::size_t i = begin;
    while (i < end) {
      const std::size_t before = i;
      i = ScanItem(i, end, ctx);
      if (i <= before) i = before + 1;
    }
  }

 private:
  std::size_t After(std::size_t open) const { return ts_[open].match + 1; }

  // Skips to the `;` terminating the current item, or past the first brace
  // group at this level (plus an optional trailing `;`).
  std::size_t SkipItem(std::size_t i, std::size_t end) const {
    while (i < end) {
      if (ts_.Is(i, ";")) return i + 1;
      if (ts_[i].kind == TokenKind::kOpen) {
        const bool brace = ts_.IsOpen(i, '{');
        i = After(i);
        if (brace) return (i < end && ts_.Is(i, ";")) ? i + 1 : i;
        continue;
      }
      ++i;
    }
    return end;
  }

  std::size_t FindBodyOrSemicolon(std::size_t i, std::size_t end) const {
    while (i < end) {
      if (ts_.Is(i, ";") || ts_.IsOpen(i, '{')) return i;
      if (ts_[i].kind == TokenKind::kOpen) {
        i = After(i);
        continue;
      }
      ++i;
    }
    return end;
  }

  // Path of the attribute starting at `hash` (e.g. "test", "tokio::test").
  std::string AttrPath(std::size_t hash) const {
    std::string path;
    const std::size_t close = ts_[hash + 1].match;
    for (std::size_t j = hash + 2; j < close; ++j) {
      if (ts_.IsIdent(j)) {
        path += ts_.Text(j);
      } else if (ts_.Is(j, "::")) {
        path += "::";
      } else {
        break;
      }
    }
    return path;
  }

  bool AttrMentions(std::size_t hash, std::string_view ident) const {
    const std::size_t close = ts_[hash + 1].match;
    for (std::size_t j = hash + 2; j < close; ++j) {
      if (ts_.IsIdent(j) && ts_.Text(j) == ident) return true;
    }
    return false;
  }

  std::optional<std::string> ImplSelfType(std::size_t impl_kw,
                                          std::size_t brace) const {
    std::size_t i = impl_kw + 1;
    auto skip_angle = [&](std::size_t j) {
      int depth = 0;
      while (j < brace) {
        if (ts_.Is(j, "<")) ++depth;
        if (ts_.Is(j, ">") && --depth == 0) return j + 1;
        ++j;
      }
      return j;
    };
    if (ts_.Is(i, "<")) i = skip_angle(i);
    for (std::size_t j = i; j < brace; ++j) {
      if (ts_.Is(j, "<")) {
        j = skip_angle(j) - 1;
        continue;
      }
      if (ts_.Is(j, "for")) i = j + 1;
      if (ts_.Is(j, "where")) break;
    }
    std::optional<std::string> last;
    for (std::size_t j = i; j < brace; ++j) {
      if (ts_.Is(j, "where")) break;
      if (ts_.Is(j, "<")) {
        j = skip_angle(j) - 1;
        continue;
      }
      if (ts_.IsIdent(j) && !IsKeyword(ts_.Text(j))) {
        last = std::string(ts_.Text(j));
      }
    }
    return last;
  }

  std::size_t ScanItem(std::size_t i, std::size_t end, const ScanContext& ctx) {
    if (ts_.Is(i, ";")) return i + 1;
    if (ts_.Is(i, "#") && ts_.Is(i + 1, "!") && ts_.IsOpen(i + 2, '[')) {
      return After(i + 2);
    }
    const std::size_t first = i;
    std::vector<std::size_t> attrs;
    while (i < end && ts_.Is(i, "#") && ts_.IsOpen(i + 1, '[')) {
      attrs.push_back(i);
      i = After(i + 1);
    }
    if (i >= end) return end;
    // Visibility and qualifiers.
    for (;;) {
      if (ts_.Is(i, "pub")) {
        ++i;
        if (ts_.IsOpen(i, '(')) i = After(i);
        continue;
      }
      if (ts_.Is(i, "async") || ts_.Is(i, "unsafe") || ts_.Is(i, "default")) {
        ++i;
        continue;
      }
      if (ts_.Is(i, "const") &&
          (ts_.Is(i + 1, "fn") || ts_.Is(i + 1, "unsafe") ||
           ts_.Is(i + 1, "async") || ts_.Is(i + 1, "extern"))) {
        ++i;
        continue;
      }
      if (ts_.Is(i, "extern") && i + 1 < end &&
          ts_[i + 1].kind == TokenKind::kLiteral) {
        i += 2;
        continue;
      }
      if (ts_.Is(i, "extern") && ts_.Is(i + 1, "fn")) {
        ++i;
        continue;
      }
      break;
    }
    if (i >= end) return end;

    if (ts_.Is(i, "fn") && ts_.IsIdent(i + 1)) {
      FnItem fn;
      fn.name = std::string(ts_.Text(i + 1));
      fn.module_path = ctx.module_path;
      fn.impl_type = ctx.impl_type;
      fn.in_cfg_test = ctx.in_cfg_test;
      for (std::size_t a : attrs) {
        fn.attributes.emplace_back(ts_.Slice(a, ts_[a + 1].match));
        const std::string path = AttrPath(a);
        if (path == "test" ||
            (path.size() > 6 && path.ends_with("::test"))) {
          fn.has_test_attr = true;
        }
      }
      fn.first_token = first;
      fn.name_token = i + 1;
      const std::size_t stop = FindBodyOrSemicolon(i + 2, end);
      std::size_t last = stop < end ? stop : end - 1;
      if (stop < end && ts_.IsOpen(stop, '{')) {
        fn.body_open = stop;
        fn.body_close = ts_[stop].match;
        last = fn.body_close;
      }
      fn.begin_offset = ts_[first].offset;
      fn.end_offset = ts_[last].end();
      fn.begin_line = ts_[first].line;
      fn.end_line = ts_[last].line;
      out_.functions.push_back(std::move(fn));
      return last + 1;
    }

    if (ts_.Is(i, "mod") && ts_.IsIdent(i + 1)) {
      if (ts_.IsOpen(i + 2, '{')) {
        ScanContext inner = ctx;
        inner.module_path.emplace_back(ts_.Text(i + 1));
        inner.impl_type.reset();
        for (std::size_t a : attrs) {
          if (AttrPath(a) == "cfg" && AttrMentions(a, "test")) {
            inner.in_cfg_test = true;
          }
        }
        Scan(i + 3, ts_[i + 2].match, inner);
        return After(i + 2);
      }
      if (ts_.Is(i + 2, ";")) {
        out_.module_decls.emplace_back(ts_.Text(i + 1));
        return i + 3;
      }
    }

    if (ts_.Is(i, "impl") || (ts_.Is(i, "trait") && ts_.IsIdent(i + 1))) {
      const std::size_t brace = FindBodyOrSemicolon(i + 1, end);
      if (brace < end && ts_.IsOpen(brace, '{')) {
        ScanContext inner = ctx;
        inner.impl_type = ts_.Is(i, "impl")
                              ? ImplSelfType(i, brace)
                              : std::optional<std::string>(ts_.Text(i + 1));
        Scan(brace + 1, ts_[brace].match, inner);
        return After(brace);
      }
      return brace + 1;
    }

    if (ts_.Is(i, "use")) {
      std::size_t j = i;
      while (j < end && !ts_.Is(j, ";")) {
        j = ts_[j].kind == TokenKind::kOpen ? After(j) : j + 1;
      }
      const std::size_t last = std::min(j, end - 1);
      out_.uses.push_back(
          {std::string(ts_.Slice(first, last)), ctx.module_path, first, last});
      return last + 1;
    }

    if (ts_.IsIdent(i) && ts_.Is(i + 1, "!")) {
      std::size_t j = i + 2;
      if (ts_.IsIdent(j)) ++j;
      if (j < end && ts_[j].kind == TokenKind::kOpen) j = After(j);
      if (ts_.Is(j, ";")) ++j;
      return j;
    }

    return SkipItem(i, end);
  }

  const TokenStream& ts_;
  ItemIndex& out_;
};

bool IsBlockLikeStart(const TokenStream& ts, std::size_t j) {
  static constexpr std::array<std::string_view, 13> kStarts = {
      "if",     "match", "loop",  "while", "for", "unsafe", "fn",
      "struct", "enum",  "impl",  "trait", "mod", "union"};
  if (ts.IsOpen(j, '{')) return true;
  if (ts[j].kind == TokenKind::kLifetime && ts.Is(j + 1, ":")) return true;
  if (ts.IsIdent(j) && ts.Is(j + 1, "!") && ts.IsOpen(j + 2, '{')) return true;
  if (ts.IsIdent(j) && ts.Is(j + 1, "!") && ts.IsIdent(j + 2) &&
      ts.IsOpen(j + 3, '{')) {
    return true;  // macro_rules! name { ... }
  }
  for (std::string_view kw : kStarts) {
    if (ts.Is(j, kw)) return true;
  }
  return false;
}

// Whether a brace group ending a block-like statement continues into more
// expression (`else`, method chains, `?`, patterns followed by `=`/`in`).
bool ContinuesAfterBlock(const TokenStream& ts, std::size_t next,
                         std::size_t close) {
  if (next >= close) return false;
  return ts.Is(next, "else") || ts.Is(next, ".") || ts.Is(next, "?") ||
         ts.Is(next, "=") || ts.Is(next, "in") || ts.Is(next, "as");
}

// Skips visibility and item qualifiers so `pub(crate) async fn` and
// `extern "C" { .. }` are seen by IsBlockLikeStart.
std::size_t SkipQualifiers(const TokenStream& ts, std::size_t j,
                           std::size_t end) {
  if (j < end && ts.Is(j, "pub")) {
    ++j;
    if (j < end && ts.IsOpen(j, '(')) j = ts[j].match + 1;
  }
  while (j + 1 < end) {
    if (ts.Is(j, "async") || ts.Is(j, "default")) {
      ++j;
    } else if (ts.Is(j, "const") &&
               (ts.Is(j + 1, "fn") || ts.Is(j + 1, "unsafe") ||
                ts.Is(j + 1, "async") || ts.Is(j + 1, "extern"))) {
      ++j;
    } else if (ts.Is(j, "unsafe") &&
               (ts.Is(j + 1, "fn") || ts.Is(j + 1, "impl") ||
                ts.Is(j + 1, "trait") || ts.Is(j + 1, "extern"))) {
      ++j;
    } else if (ts.Is(j, "extern") && ts[j + 1].kind == TokenKind::kLiteral) {
      j += 2;
    } else {
      break;
    }
  }
  return j;
}

// Statements or items in tokens [begin, end).
std::vector<Statement> SplitRange(const TokenStream& ts, std::size_t begin,
                                  std::size_t end_tok) {
  std::vector<Statement> out;
  std::size_t i = begin;
  while (i < end_tok) {
    if (ts.Is(i, ";")) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (ts.Is(i, "#") && ts.Is(i + 1, "!") && i + 2 < end_tok &&
        ts.IsOpen(i + 2, '[')) {
      const std::size_t last = ts[i + 2].match;
      out.push_back({start, last, std::string(ts.Slice(start, last))});
      i = last + 1;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < end_tok && ts.Is(j, "#") && ts.IsOpen(j + 1, '[')) {
      j = ts[j + 1].match + 1;
    }
    j = SkipQualifiers(ts, j, end_tok);
    const bool block_like = j < end_tok && IsBlockLikeStart(ts, j);
    std::size_t end = kNoToken;
    std::size_t k = j;
    while (k < end_tok) {
      if (ts.Is(k, ";")) {
        end = k;
        break;
      }
      if (ts[k].kind == TokenKind::kOpen) {
        const std::size_t match = ts[k].match;
        if (block_like && ts.IsOpen(k, '{') &&
            !ContinuesAfterBlock(ts, match + 1, end_tok)) {
          end = match;
          break;
        }
        k = match + 1;
        continue;
      }
      ++k;
    }
    if (end == kNoToken) end = end_tok - 1;
    out.push_back({start, end, std::string(ts.Slice(start, end))});
    i = end + 1;
  }
  return out;
}

class CallCollector {
 public:
  CallCollector(const TokenStream& ts, std::vector<CallSite>& out)
      : ts_(ts), out_(out) {}

  // Tokens [begin, end).
  void Collect(std::size_t begin, std::size_t end) {
    std::size_t i = begin;
    while (i < end) {
      std::vector<CallSite> calls;
      std::vector<std::size_t> groups;
      i = Chain(i, end, calls, groups);
      for (auto it = calls.rbegin(); it != calls.rend(); ++it) {
        out_.push_back(*it);
      }
      for (std::size_t g : groups) Collect(g + 1, ts_[g].match);
      if (i < end && ts_[i].kind == TokenKind::kPunct) ++i;
    }
  }

 private:
  std::size_t SkipTurbofish(std::size_t j, std::size_t end) const {
    // j at `<` following `::`.
    int depth = 0;
    while (j < end) {
      if (ts_.Is(j, "<")) ++depth;
      if (ts_.Is(j, ">") && --depth == 0) return j + 1;
      if (ts_[j].kind == TokenKind::kOpen) {
        j = ts_[j].match + 1;
        continue;
      }
      ++j;
    }
    return j;
  }

  // Consumes one postfix chain starting at i and returns the index where it
  // stopped (a separating punctuation token or `end`).
  std::size_t Chain(std::size_t i, std::size_t end, std::vector<CallSite>& calls,
                    std::vector<std::size_t>& groups) {
    while (i < end) {
      const Token& tok = ts_[i];
      if (tok.kind == TokenKind::kIdent && ts_.Is(i + 1, "!") &&
          i + 2 < end && ts_[i + 2].kind == TokenKind::kOpen) {
        groups.push_back(i + 2);
        i = ts_[i + 2].match + 1;
        continue;
      }
      if (tok.kind == TokenKind::kIdent) {
        std::vector<std::string> segs{std::string(ts_.Text(i))};
        std::size_t j = i + 1;
        while (j < end && ts_.Is(j, "::")) {
          if (ts_.Is(j + 1, "<")) {
            j = SkipTurbofish(j + 1, end);
            continue;
          }
          if (j + 1 < end && ts_.IsIdent(j + 1)) {
            segs.emplace_back(ts_.Text(j + 1));
            j += 2;
            continue;
          }
          break;
        }
        if (j < end && ts_.IsOpen(j, '(') && !IsKeyword(segs.back())) {
          CallSite call;
          call.name = segs.back();
          segs.pop_back();
          call.path = std::move(segs);
          call.name_token = j - 1;
          call.args_open = j;
          calls.push_back(std::move(call));
          groups.push_back(j);
          i = ts_[j].match + 1;
          continue;
        }
        i = j;
        continue;
      }
      if (ts_.Is(i, ".") && i + 1 < end && ts_.IsIdent(i + 1)) {
        std::size_t j = i + 2;
        if (ts_.Is(j, "::") && ts_.Is(j + 1, "<")) j = SkipTurbofish(j + 1, end);
        if (j < end && ts_.IsOpen(j, '(')) {
          CallSite call;
          call.name = std::string(ts_.Text(i + 1));
          call.is_method = true;
          call.name_token = i + 1;
          call.args_open = j;
          calls.push_back(std::move(call));
          groups.push_back(j);
          i = ts_[j].match + 1;
          continue;
        }
        i = j;
        continue;
      }
      if (ts_.Is(i, ".") || ts_.Is(i, "?") || tok.kind == TokenKind::kLiteral ||
          tok.kind == TokenKind::kLifetime) {
        ++i;
        continue;
      }
      if (tok.kind == TokenKind::kOpen) {
        groups.push_back(i);
        i = tok.match + 1;
        continue;
      }
      return i;
    }
    return i;
  }

  const TokenStream& ts_;
  std::vector<CallSite>& out_;
};

}  // namespace

TokenStream TokenStream::Parse(std::string source) {
  std::string error;
  auto ts = TryParse(std::move(source), &error);
  if (!ts) throw Error(ErrorCode::kParseError, error);
  return std::move(*ts);
}

std::optional<TokenStream> TokenStream::TryParse(std::string source,
                                                 std::string* error) {
  TokenStream ts;
  ts.source_ = std::move(source);
  std::string err = Lexer(ts.source_).Run(ts.tokens_);
  if (!err.empty()) {
    if (error != nullptr) *error = std::move(err);
    return std::nullopt;
  }
  return ts;
}

std::string_view TokenStream::Text(std::size_t i) const {
  if (i >= tokens_.size()) return {};
  return std::string_view(source_).substr(tokens_[i].offset, tokens_[i].length);
}

bool TokenStream::Is(std::size_t i, std::string_view text) const {
  if (i >= tokens_.size()) return false;
  const TokenKind k = tokens_[i].kind;
  if (k == TokenKind::kLiteral || k == TokenKind::kLifetime) return false;
  return Text(i) == text;
}

bool TokenStream::IsIdent(std::size_t i) const {
  return i < tokens_.size() && tokens_[i].kind == TokenKind::kIdent;
}

bool TokenStream::IsOpen(std::size_t i, char delim) const {
  return i < tokens_.size() && tokens_[i].kind == TokenKind::kOpen &&
         source_[tokens_[i].offset] == delim;
}

std::string_view TokenStream::Slice(std::size_t first, std::size_t last) const {
  const std::size_t b = tokens_[first].offset;
  const std::size_t e = tokens_[last].end();
  return std::string_view(source_).substr(b, e - b);
}

bool IsKeyword(std::string_view ident) {
  return std::find(kKeywords.begin(), kKeywords.end(), ident) !=
         kKeywords.end();
}

ItemIndex ScanItems(const TokenStream& ts) {
  ItemIndex index;
  ItemScanner(ts, index).Scan(0, ts.size(), ScanContext{});
  return index;
}

std::vector<Statement> SplitStatements(const TokenStream& ts, std::size_t open,
                                       std::size_t close) {
  return SplitRange(ts, open + 1, close);
}

std::vector<Statement> SplitItems(const TokenStream& ts) {
  return SplitRange(ts, 0, ts.size());
}

std::vector<CallSite> CollectCalls(const TokenStream& ts, std::size_t first,
                                   std::size_t last) {
  std::vector<CallSite> out;
  if (first > last || last >= ts.size()) return out;
  CallCollector(ts, out).Collect(first, last + 1);
  return out;
}

std::vector<MacroCall> FindMacroCalls(const TokenStream& ts, std::size_t first,
                                      std::size_t last,
                                      std::span<const std::string_view> names) {
  std::vector<MacroCall> out;
  std::size_t i = first;
  while (i <= last && i < ts.size()) {
    if (ts.IsIdent(i) && ts.Is(i + 1, "!") && i + 2 <= last &&
        ts[i + 2].kind == TokenKind::kOpen &&
        std::find(names.begin(), names.end(), ts.Text(i)) != names.end()) {
      MacroCall call;
      call.name = std::string(ts.Text(i));
      call.name_token = i;
      call.args_open = i + 2;
      call.last_token = ts[i + 2].match;
      if (call.last_token + 1 <= last && ts.Is(call.last_token + 1, ";")) {
        ++call.last_token;
      }
      i = call.last_token + 1;
      out.push_back(std::move(call));
      continue;
    }
    ++i;
  }
  return out;
}

}  // namespace testaug::rust
