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

// Partial parser for indentation-structured scripts (Python). Blocks are
// delimited by indentation; bracket and string continuations never end one.

#include <algorithm>
#include <cctype>

#include "evoracer/error.hpp"
#include "evoracer/plugins.hpp"
#include "evoracer/util.hpp"

namespace evoracer {
namespace {

constexpr std::size_t npos = std::string::npos;

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Line {
  std::size_t begin = 0;
  std::size_t end = 0;  // excluding '\n'
  std::size_t indent = 0;
  bool blank = true;         // whitespace or comment only
  bool continuation = false; // starts inside a string or open bracket
};

struct Scan {
  std::string masked;
  std::vector<Line> lines;
};

Scan scan(std::string_view src) {
  Scan s{std::string(src), {}};
  std::string& m = s.masked;
  const std::size_t n = src.size();

  int depth = 0;
  std::size_t i = 0;
  auto blank_range = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to && k < n; ++k) {
      if (m[k] != '\n') m[k] = ' ';
    }
  };
  std::vector<std::size_t> string_line_starts;  // line starts inside literals

  while (i < n) {
    const char c = src[i];
    if (c == '#') {
      std::size_t j = src.find('\n', i);
      if (j == npos) j = n;
      blank_range(i, j);
      i = j;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::size_t start = i;
      while (start > 0 && std::isalpha(static_cast<unsigned char>(src[start - 1])) &&
             i - start < 2) {
        --start;
      }
      const bool triple = src.substr(i, 3) == std::string(3, c);
      const std::string close = triple ? std::string(3, c) : std::string(1, c);
      std::size_t j = i + close.size();
      while (j < n) {
        if (src[j] == '\\') {
          j += 2;
          continue;
        }
        if (src.substr(j, close.size()) == close) break;
        if (!triple && src[j] == '\n') break;
        if (src[j] == '\n') string_line_starts.push_back(j + 1);
        ++j;
      }
      j = std::min(n, j + close.size());
      blank_range(start, j);
      i = j;
      continue;
    }
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') depth = std::max(0, depth - 1);
    if (c == '\n' && depth > 0) string_line_starts.push_back(i + 1);
    if (c == '\\' && i + 1 < n && src[i + 1] == '\n') string_line_starts.push_back(i + 2);
    ++i;
  }
  std::sort(string_line_starts.begin(), string_line_starts.end());

  std::size_t pos = 0;
  while (pos <= n) {
    std::size_t nl = src.find('\n', pos);
    if (nl == npos) nl = n;
    Line line{pos, nl, 0, true, false};
    while (line.indent < nl - pos && (src[pos + line.indent] == ' ' || src[pos + line.indent] == '\t')) {
      ++line.indent;
    }
    line.continuation =
        std::binary_search(string_line_starts.begin(), string_line_starts.end(), pos);
    const std::string_view masked_line(m.data() + pos, nl - pos);
    const std::string_view raw_line(src.data() + pos, nl - pos);
    // A line inside a string literal carries content even though it is masked.
    line.blank = trim(masked_line).empty() && !(line.continuation && !trim(raw_line).empty());
    s.lines.push_back(line);
    if (nl == n) break;
    pos = nl + 1;
  }
  return s;
}

struct Block {
  std::string name;
  std::size_t first_line = 0;  // first decorator, or the def line
  std::size_t def_line = 0;
  std::size_t last_line = 0;   // last content line
  std::size_t indent = 0;
  std::size_t colon = 0;       // offset of the ':' ending the header
  bool is_class = false;
};

// Matches `def name(`, `async def name(` or `class name` at the start of a
// masked line.
std::optional<std::pair<std::string, bool>> header_name(std::string_view text) {
  text = trim(text);
  bool is_class = false;
  if (text.starts_with("async ")) text = trim(text.substr(6));
  if (text.starts_with("def ")) {
    text = trim(text.substr(4));
  } else if (text.starts_with("class ")) {
    text = trim(text.substr(6));
    is_class = true;
  } else {
    return std::nullopt;
  }
  std::size_t k = 0;
  while (k < text.size() && ident_char(text[k])) ++k;
  if (k == 0) return std::nullopt;
  return std::make_pair(std::string(text.substr(0, k)), is_class);
}

std::vector<Block> find_blocks(const Scan& s) {
  std::vector<Block> blocks;
  const auto& lines = s.lines;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const Line& line = lines[li];
    if (line.blank || line.continuation) continue;
    const std::string_view text(s.masked.data() + line.begin, line.end - line.begin);
    const auto header = header_name(text);
    if (!header) continue;

    Block b;
    b.name = header->first;
    b.is_class = header->second;
    b.def_line = li;
    b.indent = line.indent;
    b.first_line = li;
    while (b.first_line > 0) {
      const Line& prev = lines[b.first_line - 1];
      const std::string_view prev_text =
          trim(std::string_view(s.masked.data() + prev.begin, prev.end - prev.begin));
      if (prev.blank || prev.indent != b.indent || !prev_text.starts_with("@")) break;
      --b.first_line;
    }

    // Header may span lines through open brackets; find its ':' at depth 0.
    int depth = 0;
    std::size_t k = line.begin;
    for (; k < s.masked.size(); ++k) {
      const char c = s.masked[k];
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') --depth;
      if (c == ':' && depth == 0) break;
    }
    if (k >= s.masked.size()) continue;
    b.colon = k;

    std::size_t last = li;
    while (last + 1 < lines.size() && lines[last + 1].begin <= b.colon) ++last;
    for (std::size_t lj = last + 1; lj < lines.size(); ++lj) {
      const Line& next = lines[lj];
      if (next.blank) continue;
      if (!next.continuation && next.indent <= b.indent) break;
      last = lj;
    }
    b.last_line = last;
    blocks.push_back(std::move(b));
  }
  return blocks;
}

class ScriptPlugin final : public LanguagePlugin {
 public:
  LanguageTag tag() const override { return LanguageTag::kScript; }

  FunctionLocator find_function(std::string_view source, std::string_view name,
                                std::optional<std::string> signature) const override {
    const Scan s = scan(source);
    const std::vector<Block> blocks = find_blocks(s);
    std::vector<const Block*> candidates;
    for (const auto& b : blocks) {
      if (!b.is_class && b.name == name) candidates.push_back(&b);
    }
    if (candidates.size() > 1 && signature) {
      const std::string wanted = normalize_whitespace(*signature);
      std::vector<const Block*> exact;
      for (const Block* b : candidates) {
        const std::size_t hs = s.lines[b->def_line].begin;
        std::string head(trim(source.substr(hs, b->colon + 1 - hs)));
        if (normalize_whitespace(head) == wanted ||
            normalize_whitespace(head.substr(0, head.size() - 1)) == wanted) {
          exact.push_back(b);
        }
      }
      candidates = std::move(exact);
    }
    if (candidates.empty()) {
      throw Error(ErrorCode::kNotFound, "no definition of '" + std::string(name) + "'");
    }
    if (candidates.size() > 1) {
      throw Error(ErrorCode::kAmbiguous, std::to_string(candidates.size()) +
                                             " definitions of '" + std::string(name) + "'");
    }
    const Block& b = *candidates.front();
    const std::size_t def_begin = s.lines[b.def_line].begin;

    FunctionLocator loc;
    loc.language_tag = LanguageTag::kScript;
    loc.function_name = std::string(name);
    loc.start_offset = s.lines[b.first_line].begin;
    loc.end_offset = s.lines[b.last_line].end;
    loc.signature_text = std::string(trim(source.substr(def_begin, b.colon + 1 - def_begin)));
    loc.body_text = std::string(source.substr(b.colon + 1, loc.end_offset - b.colon - 1));
    loc.preamble_span = {0, preamble_end(s, blocks)};
    loc.globals_spans = globals(s, blocks);
    loc.source_hash = sha256_hex(source);
    return loc;
  }

  std::string extract_preamble(std::string_view source) const override {
    const Scan s = scan(source);
    const std::size_t end = preamble_end(s, find_blocks(s));
    std::string out;
    for (const Line& line : s.lines) {
      if (line.begin >= end) break;
      if (line.blank) continue;
      out.append(source.substr(line.begin, line.end - line.begin));
      out.push_back('\n');
    }
    return out;
  }

  std::vector<TextSpan> call_site_spans(std::string_view source, const FunctionLocator& locator,
                                        std::size_t radius) const override {
    const Scan s = scan(source);
    const std::string& name = locator.function_name;
    std::vector<TextSpan> spans;
    for (std::size_t li = 0; li < s.lines.size(); ++li) {
      const Line& line = s.lines[li];
      if (line.begin >= locator.start_offset && line.begin < locator.end_offset) continue;
      const std::string_view text(s.masked.data() + line.begin, line.end - line.begin);
      bool hit = false;
      for (std::size_t pos = text.find(name); pos != npos; pos = text.find(name, pos + 1)) {
        const std::size_t end = pos + name.size();
        const bool left = pos == 0 || !ident_char(text[pos - 1]);
        std::size_t after = end;
        while (after < text.size() && text[after] == ' ') ++after;
        if (left && after < text.size() && text[after] == '(' &&
            (end >= text.size() || !ident_char(text[end]))) {
          hit = true;
          break;
        }
      }
      if (!hit) continue;
      const std::size_t lo = li >= radius ? li - radius : 0;
      const std::size_t hi = std::min(s.lines.size() - 1, li + radius);
      const std::size_t begin = s.lines[lo].begin;
      const std::size_t end = std::min(source.size(), s.lines[hi].end + 1);
      if (!spans.empty() && begin <= spans.back().end) {
        spans.back().end = std::max(spans.back().end, end);
      } else {
        spans.push_back({begin, end});
      }
    }
    return spans;
  }

 protected:
  // Re-indents the replacement to the original definition's column when the
  // response was written at a different indentation.
  std::string prepare_replacement(std::string_view source, const FunctionLocator& locator,
                                  std::string_view new_definition) const override {
    std::size_t orig_indent = 0;
    while (locator.start_offset + orig_indent < source.size() &&
           (source[locator.start_offset + orig_indent] == ' ' ||
            source[locator.start_offset + orig_indent] == '\t')) {
      ++orig_indent;
    }
    const std::string prefix(source.substr(locator.start_offset, orig_indent));

    std::vector<std::string> lines = split_lines(new_definition);
    while (!lines.empty() && trim(lines.front()).empty()) lines.erase(lines.begin());
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) return {};
    std::size_t new_indent = 0;
    while (new_indent < lines.front().size() &&
           (lines.front()[new_indent] == ' ' || lines.front()[new_indent] == '\t')) {
      ++new_indent;
    }
    std::string out;
    const std::string new_prefix = lines.front().substr(0, new_indent);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string line = lines[i];
      while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
        line.pop_back();
      }
      if (new_prefix != prefix && line.starts_with(new_prefix)) {
        line = prefix + line.substr(new_indent);
      }
      if (i > 0) out.push_back('\n');
      out += line;
    }
    return out;
  }

 private:
  static std::size_t preamble_end(const Scan& s, const std::vector<Block>& blocks) {
    for (const Block& b : blocks) {
      if (b.indent == 0) return s.lines[b.first_line].begin;
    }
    return s.masked.size();
  }

  // Top-level statements outside any def/class block.
  static std::vector<TextSpan> globals(const Scan& s, const std::vector<Block>& blocks) {
    std::vector<bool> covered(s.lines.size(), false);
    for (const Block& b : blocks) {
      if (b.indent != 0) continue;
      for (std::size_t li = b.first_line; li <= b.last_line; ++li) covered[li] = true;
    }
    std::vector<TextSpan> spans;
    for (std::size_t li = 0; li < s.lines.size(); ++li) {
      const Line& line = s.lines[li];
      if (covered[li] || line.blank) continue;
      if (line.continuation && !spans.empty()) {
        spans.back().end = line.end;
        continue;
      }
      if (line.indent != 0) continue;
      spans.push_back({line.begin, line.end});
    }
    return spans;
  }
};

}  // namespace

std::unique_ptr<LanguagePlugin> make_script_plugin() {
  return std::make_unique<ScriptPlugin>();
}

}  // namespace evoracer
