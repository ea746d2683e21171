// Copyright 2026 The evoracer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Partial parser for C-family sources: comment/literal masking, brace
// matching, and just enough head classification to tell function bodies from
// namespaces, classes and initializers.

#include <algorithm>
#include <cctype>
#include <set>

#include "evoracer/error.hpp"
#include "evoracer/plugins.hpp"
#include "evoracer/util.hpp"

namespace evoracer {
namespace {

constexpr std::size_t npos = std::string::npos;

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

void blank(std::string& s, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to && i < s.size(); ++i) {
    if (s[i] != '\n') s[i] = ' ';
  }
}

struct Masks {
  std::string text;  // comments and literals blanked
  std::string code;  // additionally preprocessor directives blanked
};

bool is_digit_separator(std::string_view src, std::size_t i) {
  if (i == 0 || i + 1 >= src.size()) return false;
  if (!std::isxdigit(static_cast<unsigned char>(src[i - 1])) ||
      !std::isxdigit(static_cast<unsigned char>(src[i + 1]))) {
    return false;
  }
  std::size_t k = i;
  while (k > 0 && (ident_char(src[k - 1]) || src[k - 1] == '\'')) --k;
  return std::isdigit(static_cast<unsigned char>(src[k])) != 0;
}

std::size_t raw_string_prefix(std::string_view src, std::size_t i) {
  // Returns the length of the prefix ending with R (R, u8R, uR, UR, LR) when a
  // raw string literal starts at i; 0 otherwise.
  for (const std::string_view prefix : {"u8R", "uR", "UR", "LR", "R"}) {
    if (src.substr(i, prefix.size()) == prefix && i + prefix.size() < src.size() &&
        src[i + prefix.size()] == '"' && (i == 0 || !ident_char(src[i - 1]))) {
      return prefix.size();
    }
  }
  return 0;
}

Masks mask_source(std::string_view src) {
  Masks m{std::string(src), {}};
  std::string& t = m.text;
  const std::size_t n = src.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = src[i];
    const char next = i + 1 < n ? src[i + 1] : '\0';
    if (c == '/' && next == '/') {
      std::size_t j = i;
      while (j < n && src[j] != '\n') {
        j += (src[j] == '\\' && j + 1 < n && src[j + 1] == '\n') ? 2 : 1;
      }
      blank(t, i, j);
      i = j;
    } else if (c == '/' && next == '*') {
      const std::size_t close = src.find("*/", i + 2);
      const std::size_t j = close == npos ? n : close + 2;
      blank(t, i, j);
      i = j;
    } else if (const std::size_t plen = raw_string_prefix(src, i); plen > 0) {
      const std::size_t open = src.find('(', i + plen + 1);
      if (open == npos) {
        blank(t, i, n);
        break;
      }
      const std::string delim =
          ")" + std::string(src.substr(i + plen + 1, open - (i + plen + 1))) + "\"";
      const std::size_t close = src.find(delim, open + 1);
      const std::size_t j = close == npos ? n : close + delim.size();
      blank(t, i, j);
      i = j;
    } else if (c == '"' || (c == '\'' && !is_digit_separator(src, i))) {
      std::size_t j = i + 1;
      while (j < n && src[j] != c && src[j] != '\n') j += src[j] == '\\' ? 2 : 1;
      j = std::min(n, j + 1);
      blank(t, i, j);
      i = j;
    } else {
      ++i;
    }
  }

  m.code = t;
  std::size_t line_start = 0;
  while (line_start < n) {
    std::size_t k = line_start;
    while (k < n && m.code[k] != '\n' && is_space(m.code[k])) ++k;
    std::size_t line_end = src.find('\n', line_start);
    if (line_end == npos) line_end = n;
    if (k < n && m.code[k] == '#') {
      std::size_t end = line_end;
      // Continuation lines belong to the directive.
      while (end < n && end > 0 && src[end - 1] == '\\') {
        const std::size_t more = src.find('\n', end + 1);
        end = more == npos ? n : more;
      }
      blank(m.code, k, end);
      line_end = end;
    }
    line_start = line_end + 1;
  }
  return m;
}

std::size_t match_close(const std::string& code, std::size_t open, char open_ch, char close_ch) {
  int depth = 0;
  for (std::size_t i = open; i < code.size(); ++i) {
    if (code[i] == open_ch) {
      ++depth;
    } else if (code[i] == close_ch) {
      if (--depth == 0) return i;
    }
  }
  return npos;
}

std::size_t skip_space(const std::string& code, std::size_t i, std::size_t end) {
  while (i < end && is_space(code[i])) ++i;
  return i;
}

bool has_word(std::string_view text, std::string_view word) {
  std::size_t pos = 0;
  while ((pos = text.find(word, pos)) != npos) {
    const bool left = pos == 0 || !ident_char(text[pos - 1]);
    const bool right = pos + word.size() >= text.size() || !ident_char(text[pos + word.size()]);
    if (left && right) return true;
    pos += word.size();
  }
  return false;
}

const std::set<std::string_view>& non_function_words() {
  static const std::set<std::string_view> words = {
      "if",       "while",    "for",      "switch",  "return",   "sizeof",  "alignof",
      "decltype", "alignas",  "noexcept", "throw",   "requires", "catch",   "static_assert",
      "__attribute__", "__declspec", "void", "int", "char", "bool", "double", "float",
      "long",     "short",    "unsigned", "signed",  "auto",     "const",   "new",
      "delete",   "typeid",   "co_await", "co_return", "template", "typename", "class",
      "struct",   "union",    "enum",     "namespace"};
  return words;
}

// Tokens that may follow a parameter list before the body: qualifiers,
// attributes, noexcept(...), a trailing return type, or a constructor
// initializer list.
bool tail_allows_body(const std::string& code, std::size_t from, std::size_t to,
                      bool* init_list) {
  std::size_t i = skip_space(code, from, to);
  if (i >= to) return true;
  if (code[i] == ':' && (i + 1 >= to || code[i + 1] != ':')) {
    *init_list = true;
    return true;
  }
  while (i < to) {
    i = skip_space(code, i, to);
    if (i >= to) break;
    const char c = code[i];
    if (c == '-' && i + 1 < to && code[i + 1] == '>') return true;
    if (ident_char(c)) {
      while (i < to && ident_char(code[i])) ++i;
      const std::size_t j = skip_space(code, i, to);
      if (j < to && code[j] == '(') {
        const std::size_t close = match_close(code, j, '(', ')');
        if (close == npos || close >= to) return false;
        i = close + 1;
      }
    } else if (c == '&' || c == '*') {
      ++i;
    } else if (c == '[' && i + 1 < to && code[i + 1] == '[') {
      const std::size_t close = code.find("]]", i);
      if (close == npos || close >= to) return false;
      i = close + 2;
    } else {
      return false;
    }
  }
  return true;
}

struct HeadInfo {
  std::string name;       // unqualified
  std::string qualified;  // as written, e.g. ns::Class::name
  bool init_list = false; // constructor initializer list follows the parameters
};

std::optional<HeadInfo> parse_function_head(const std::string& code, std::size_t hs,
                                            std::size_t be) {
  std::size_t k = skip_space(code, hs, be);
  if (code.compare(k, 8, "template") == 0 && (k + 8 >= be || !ident_char(code[k + 8]))) {
    const std::size_t lt = code.find('<', k);
    if (lt == npos || lt >= be) return std::nullopt;
    int depth = 0;
    std::size_t j = lt;
    for (; j < be; ++j) {
      if (code[j] == '<') ++depth;
      if (code[j] == '>' && --depth == 0) break;
      if (code[j] == '(') {
        const std::size_t close = match_close(code, j, '(', ')');
        if (close == npos || close >= be) return std::nullopt;
        j = close;
      }
    }
    if (j >= be) return std::nullopt;
    k = j + 1;
  }

  int depth = 0;
  for (std::size_t i = k; i < be; ++i) {
    const char c = code[i];
    if (c == ')') {
      --depth;
      continue;
    }
    if (c != '(') continue;
    if (depth > 0) {
      ++depth;
      continue;
    }
    std::size_t p = i;
    while (p > k && is_space(code[p - 1])) --p;
    std::size_t q = p;
    while (q > k && ident_char(code[q - 1])) --q;
    std::string ident = code.substr(q, p - q);
    std::size_t param_open = i;

    // operator<symbols>(...)
    std::size_t op = code.rfind("operator", i);
    if (op != npos && op >= k && (op == k || !ident_char(code[op - 1]))) {
      const std::size_t after = op + 8;
      bool symbols_only = true;
      for (std::size_t s = after; s < i; ++s) {
        if (ident_char(code[s])) symbols_only = false;
      }
      if (symbols_only) {
        std::size_t open = i;
        if (code.compare(skip_space(code, after, be), 2, "()") == 0) {
          open = code.find('(', skip_space(code, after, be) + 2);
          if (open == npos || open >= be) return std::nullopt;
        }
        std::string symbol;
        for (std::size_t s = after; s < open; ++s) {
          if (!is_space(code[s])) symbol.push_back(code[s]);
        }
        ident = "operator" + symbol;
        q = op;
        param_open = open;
      }
    }

    if (ident.empty() || std::isdigit(static_cast<unsigned char>(ident[0])) ||
        non_function_words().contains(ident)) {
      const std::size_t close = match_close(code, i, '(', ')');
      if (close == npos || close >= be) return std::nullopt;
      i = close;
      continue;
    }
    std::size_t qs = q;
    while (qs >= k + 2 && code[qs - 1] == ':' && code[qs - 2] == ':') {
      std::size_t r = qs - 2;
      while (r > k && is_space(code[r - 1])) --r;
      std::size_t s = r;
      while (s > k && (ident_char(code[s - 1]) || code[s - 1] == '>' || code[s - 1] == '<' ||
                       code[s - 1] == ',')) {
        --s;
      }
      if (s == r) break;
      qs = s;
    }
    if (qs > k && code[qs - 1] == '~') --qs;
    const std::size_t close = match_close(code, param_open, '(', ')');
    if (close == npos || close >= be) return std::nullopt;
    bool init_list = false;
    if (!tail_allows_body(code, close + 1, be, &init_list)) return std::nullopt;
    std::string qualified;
    for (std::size_t s = qs; s < param_open; ++s) {
      if (!is_space(code[s])) qualified.push_back(code[s]);
    }
    return HeadInfo{ident, qualified, init_list};
  }
  return std::nullopt;
}

struct ScannedDef {
  HeadInfo head;
  std::size_t start = 0;
  std::size_t brace = 0;
  std::size_t end = 0;  // one past '}'
  bool namespace_scope = false;
};

struct ScanResult {
  std::vector<ScannedDef> defs;
  std::vector<TextSpan> globals;
};

bool is_access_specifier(std::string_view head) {
  head = trim(head);
  return head == "public" || head == "private" || head == "protected";
}

ScanResult scan(const std::string& code) {
  enum class Kind { kNamespace, kClass };
  struct Frame {
    Kind kind;
    std::size_t head_start;
  };
  ScanResult result;
  std::vector<Frame> stack;
  const std::size_t n = code.size();
  std::size_t stmt = 0;
  auto at_namespace_scope = [&] {
    return std::all_of(stack.begin(), stack.end(),
                       [](const Frame& f) { return f.kind == Kind::kNamespace; });
  };

  for (std::size_t i = 0; i < n; ++i) {
    const char c = code[i];
    if (c == ';') {
      const std::size_t hs = skip_space(code, stmt, i);
      if (at_namespace_scope() && hs < i) result.globals.push_back({hs, i + 1});
      stmt = i + 1;
    } else if (c == '{') {
      const std::size_t hs = skip_space(code, stmt, i);
      const std::string_view head(code.data() + hs, i - hs);
      if (has_word(head, "namespace") || trim(head) == "extern") {
        stack.push_back({Kind::kNamespace, hs});
        stmt = i + 1;
        continue;
      }
      if (has_word(head, "enum")) {
        const std::size_t close = match_close(code, i, '{', '}');
        if (close == npos) break;
        i = close;
        continue;
      }
      if (auto info = parse_function_head(code, hs, i)) {
        const std::size_t close = match_close(code, i, '{', '}');
        if (close == npos) break;  // unbalanced: nothing after this is trusted
        // `member{value}` inside an initializer list: keep looking for the body.
        std::size_t prev = i;
        while (prev > hs && is_space(code[prev - 1])) --prev;
        if (info->init_list && prev > hs &&
            (ident_char(code[prev - 1]) || code[prev - 1] == '>')) {
          i = close;
          continue;
        }
        result.defs.push_back({std::move(*info), hs, i, close + 1, at_namespace_scope()});
        i = close;
        stmt = close + 1;
        continue;
      }
      if (has_word(head, "class") || has_word(head, "struct") || has_word(head, "union")) {
        stack.push_back({Kind::kClass, hs});
        stmt = i + 1;
        continue;
      }
      // Initializer lists, lambdas and the like.
      const std::size_t close = match_close(code, i, '{', '}');
      if (close == npos) break;
      i = close;
    } else if (c == '}') {
      if (stack.empty()) break;
      const Frame frame = stack.back();
      stack.pop_back();
      stmt = frame.kind == Kind::kClass ? frame.head_start : i + 1;
    } else if (c == ':' && !stack.empty() && stack.back().kind == Kind::kClass &&
               (i + 1 >= n || code[i + 1] != ':') && (i == 0 || code[i - 1] != ':') &&
               is_access_specifier(std::string_view(code.data() + stmt, i - stmt))) {
      stmt = i + 1;
    }
  }
  return result;
}

// Whitespace only where it separates two identifier characters.
std::string canonical_signature(std::string_view text) {
  std::string out;
  bool pending = false;
  for (const char c : text) {
    if (is_space(c)) {
      pending = true;
      continue;
    }
    if (pending && !out.empty() && ident_char(out.back()) && ident_char(c)) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

bool name_matches(const HeadInfo& head, std::string_view requested) {
  if (requested.find("::") != npos) return head.qualified == requested;
  return head.name == requested;
}

std::size_t line_start_of(std::string_view text, std::size_t pos) {
  const std::size_t nl = pos == 0 ? npos : text.rfind('\n', pos - 1);
  return nl == npos ? 0 : nl + 1;
}

class CFamilyPlugin final : public LanguagePlugin {
 public:
  LanguageTag tag() const override { return LanguageTag::kCFamily; }

  FunctionLocator find_function(std::string_view source, std::string_view name,
                                std::optional<std::string> signature) const override {
    const Masks masks = mask_source(source);
    const ScanResult scanned = scan(masks.code);

    std::vector<const ScannedDef*> candidates;
    for (const auto& def : scanned.defs) {
      if (name_matches(def.head, name)) candidates.push_back(&def);
    }
    if (candidates.size() > 1 && signature) {
      const std::string wanted = canonical_signature(*signature);
      std::vector<const ScannedDef*> exact;
      for (const ScannedDef* def : candidates) {
        const std::string_view head(masks.text.data() + def->start, def->brace - def->start);
        if (canonical_signature(head) == wanted) exact.push_back(def);
      }
      candidates = std::move(exact);
    }
    if (candidates.empty()) {
      throw Error(ErrorCode::kNotFound, "no definition of '" + std::string(name) + "'");
    }
    if (candidates.size() > 1) {
      throw Error(ErrorCode::kAmbiguous, std::to_string(candidates.size()) +
                                             " definitions of '" + std::string(name) +
                                             "'; supply the full signature");
    }
    const ScannedDef& def = *candidates.front();

    FunctionLocator loc;
    loc.language_tag = LanguageTag::kCFamily;
    loc.function_name = std::string(name);
    loc.start_offset = def.start;
    loc.end_offset = def.end;
    loc.signature_text = std::string(trim(source.substr(def.start, def.brace - def.start)));
    loc.body_text = std::string(source.substr(def.brace, def.end - def.brace));
    loc.preamble_span = {0, preamble_end(source, scanned)};
    loc.globals_spans = scanned.globals;
    loc.source_hash = sha256_hex(source);
    return loc;
  }

  std::string extract_preamble(std::string_view source) const override {
    const Masks masks = mask_source(source);
    const ScanResult scanned = scan(masks.code);
    const std::size_t end = preamble_end(source, scanned);
    std::string out;
    std::size_t pos = 0;
    while (pos < end) {
      std::size_t nl = source.find('\n', pos);
      if (nl == npos || nl > end) nl = end;
      const std::string_view masked_line(masks.text.data() + pos, nl - pos);
      if (!trim(masked_line).empty()) {
        out.append(source.substr(pos, nl - pos));
        out.push_back('\n');
      }
      pos = nl + 1;
    }
    return out;
  }

  std::vector<TextSpan> call_site_spans(std::string_view source, const FunctionLocator& locator,
                                        std::size_t radius) const override {
    const Masks masks = mask_source(source);
    const std::string& code = masks.code;
    const std::string& name = locator.function_name;
    std::vector<std::size_t> lines;
    std::size_t pos = 0;
    while ((pos = code.find(name, pos)) != npos) {
      const std::size_t end = pos + name.size();
      const bool left = pos == 0 || !ident_char(code[pos - 1]);
      const bool right = end >= code.size() || !ident_char(code[end]);
      const std::size_t after = skip_space(code, end, code.size());
      if (left && right && after < code.size() && code[after] == '(' &&
          (pos < locator.start_offset || pos >= locator.end_offset)) {
        lines.push_back(pos);
      }
      pos = end;
    }
    std::vector<TextSpan> spans;
    for (const std::size_t hit : lines) {
      std::size_t begin = line_start_of(source, hit);
      for (std::size_t r = 0; r < radius && begin > 0; ++r) begin = line_start_of(source, begin - 1);
      std::size_t end = source.find('\n', hit);
      for (std::size_t r = 0; r < radius && end != npos; ++r) end = source.find('\n', end + 1);
      end = end == npos ? source.size() : end + 1;
      if (!spans.empty() && begin <= spans.back().end) {
        spans.back().end = std::max(spans.back().end, end);
      } else {
        spans.push_back({begin, end});
      }
    }
    return spans;
  }

 private:
  static std::size_t preamble_end(std::string_view source, const ScanResult& scanned) {
    for (const auto& def : scanned.defs) {
      if (def.namespace_scope) return line_start_of(source, def.start);
    }
    return source.size();
  }
};

}  // namespace

std::unique_ptr<LanguagePlugin> make_cfamily_plugin() {
  return std::make_unique<CFamilyPlugin>();
}

}  // namespace evoracer
