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

// Syntactic view of Rust source: a lexer producing delimiter-matched token
// trees (the same shape a proc-macro sees), an item scanner that finds
// functions, modules, impl blocks and imports, and a statement splitter for
// block bodies. No name resolution or type checking happens here.

#ifndef TESTAUG_RUST_SYNTAX_H_
#define TESTAUG_RUST_SYNTAX_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace testaug::rust {

inline constexpr std::size_t kNoToken = static_cast<std::size_t>(-1);

enum class TokenKind {
  kIdent,     // identifiers and keywords, including raw identifiers
  kLifetime,  // 'a
  kLiteral,   // numbers, strings, chars, byte strings
  kPunct,     // operators; `::`, `->` and `=>` are single tokens
  kOpen,      // ( [ {
  kClose,     // ) ] }
};

struct Token {
  TokenKind kind;
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t line = 0;  // 1-based
  // Index of the partner delimiter for kOpen/kClose tokens.
  std::size_t match = kNoToken;

  std::size_t end() const { return offset + length; }
};

// Owns the source text and its token stream. Comments are dropped.
class TokenStream {
 public:
  // Throws Error(kParseError) on lexical errors or unbalanced delimiters.
  static TokenStream Parse(std::string source);

  // Non-throwing variant; returns nullopt and fills `error` on failure.
  static std::optional<TokenStream> TryParse(std::string source,
                                             std::string* error = nullptr);

  const std::string& source() const { return source_; }
  std::size_t size() const { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  std::span<const Token> tokens() const { return tokens_; }

  std::string_view Text(std::size_t i) const;
  bool Is(std::size_t i, std::string_view text) const;
  bool IsIdent(std::size_t i) const;
  bool IsOpen(std::size_t i, char delim) const;

  // Source text spanning tokens [first, last] inclusive, verbatim.
  std::string_view Slice(std::size_t first, std::size_t last) const;

 private:
  std::string source_;
  std::vector<Token> tokens_;
};

bool IsKeyword(std::string_view ident);

struct FnItem {
  std::string name;
  // Inline `mod` nesting inside the file, outermost first.
  std::vector<std::string> module_path;
  // Self type (or trait name) when declared inside an impl or trait block.
  std::optional<std::string> impl_type;
  bool in_cfg_test = false;
  bool has_test_attr = false;
  std::vector<std::string> attributes;
  std::size_t first_token = 0;  // first outer attribute or qualifier
  std::size_t name_token = 0;
  std::size_t body_open = kNoToken;
  std::size_t body_close = kNoToken;
  std::size_t begin_offset = 0;
  std::size_t end_offset = 0;
  std::size_t begin_line = 0;
  std::size_t end_line = 0;
};

struct UseItem {
  std::string text;
  std::vector<std::string> module_path;
  std::size_t first_token = 0;
  std::size_t last_token = 0;
};

struct ItemIndex {
  std::vector<FnItem> functions;
  std::vector<UseItem> uses;
  // Out-of-line module declarations (`mod name;`).
  std::vector<std::string> module_decls;
};

ItemIndex ScanItems(const TokenStream& ts);

struct Statement {
  std::size_t first_token = 0;
  std::size_t last_token = 0;
  std::string text;
};

// Splits the contents of the block delimited by tokens `open`/`close` into
// statements. Expression statements ending in a block (if, match, loop, ...)
// terminate at their closing brace; a trailing tail expression becomes the
// final statement.
std::vector<Statement> SplitStatements(const TokenStream& ts, std::size_t open,
                                       std::size_t close);

// Top-level items of a whole file, same rules. Inner attributes (`#![..]`)
// are items of their own.
std::vector<Statement> SplitItems(const TokenStream& ts);

struct CallSite {
  std::string name;               // callee name (last path segment)
  std::vector<std::string> path;  // preceding path segments, if any
  bool is_method = false;         // receiver.name(...)
  std::size_t name_token = 0;
  std::size_t args_open = 0;
};

// Call expressions in tokens [first, last] in pre-order of the expression
// tree: an outer call precedes the calls in its receiver and arguments.
// Macro invocations are not calls, but their arguments are searched.
std::vector<CallSite> CollectCalls(const TokenStream& ts, std::size_t first,
                                   std::size_t last);

struct MacroCall {
  std::string name;
  std::size_t name_token = 0;
  std::size_t args_open = 0;
  std::size_t last_token = 0;  // closing delimiter, or `;` when present
};

// Invocations of the named macros within tokens [first, last], including
// nested ones, in source order.
std::vector<MacroCall> FindMacroCalls(const TokenStream& ts, std::size_t first,
                                      std::size_t last,
                                      std::span<const std::string_view> names);

}  // namespace testaug::rust

#endif  // TESTAUG_RUST_SYNTAX_H_
