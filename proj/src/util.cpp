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

#include "evoracer/util.hpp"

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "evoracer/error.hpp"

namespace evoracer {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMissingKey: return "MissingKey";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kRangeViolation: return "RangeViolation";
    case ErrorCode::kUnreadableFile: return "UnreadableFile";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kAmbiguous: return "Ambiguous";
    case ErrorCode::kStaleLocator: return "StaleLocator";
    case ErrorCode::kSignatureMismatch: return "SignatureMismatch";
    case ErrorCode::kNoCodeBlock: return "NoCodeBlock";
    case ErrorCode::kSignatureAbsent: return "SignatureAbsent";
    case ErrorCode::kProviderFailure: return "ProviderFailure";
    case ErrorCode::kAuthFailure: return "AuthFailure";
    case ErrorCode::kToolMissing: return "ToolMissing";
    case ErrorCode::kInfeasiblePool: return "InfeasiblePool";
    case ErrorCode::kFatalEnvironment: return "FatalEnvironment";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kMalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kUnreadableFile, "cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kUnreadableFile, "cannot write " + path.string());
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string_view trim(std::string_view text) {
  std::size_t begin = 0;
  while (begin < text.size() &&
         std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  std::size_t end = text.size();
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return text.substr(begin, end - begin);
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.emplace_back(text.substr(pos));
      break;
    }
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    pos = nl + 1;
  }
  return lines;
}

bool starts_with_word(std::string_view text, std::string_view word) {
  if (text.substr(0, word.size()) != word) return false;
  if (text.size() == word.size()) return true;
  const char next = text[word.size()];
  return !(std::isalnum(static_cast<unsigned char>(next)) || next == '_');
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(),
             nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (const char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::filesystem::path resolve_path(const std::filesystem::path& base,
                                   const std::filesystem::path& path) {
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return (base / path).lexically_normal();
}

}  // namespace evoracer
