// Copyright 2026 The crisiscnn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crisiscnn/textprep.hpp"

#include <cstdint>

namespace crisiscnn::textprep {
namespace {

// Invalid UTF-8 bytes are carried through as code points above the Unicode
// range and re-emitted verbatim.
constexpr char32_t kRawByteBase = 0x110000;

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (int k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!ok) {
      out.push_back(kRawByteBase + b0);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void encode_one(char32_t cp, std::string& out) {
  if (cp >= kRawByteBase) {
    out.push_back(static_cast<char>(cp - kRawByteBase));
  } else if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(const std::u32string& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) encode_one(c, out);
  return out;
}

bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_word(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
         (c >= U'0' && c <= U'9') || c == U'_';
}

bool is_ascii_alpha(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

// Simple case folding for Latin, Greek and Cyrillic capitals.
char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 0x20;
  if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177)) {
    return (c % 2 == 0) ? c + 1 : c;
  }
  if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) {
    return (c % 2 == 1) ? c + 1 : c;
  }
  if (c == 0x178) return 0xFF;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

bool matches_at(const std::u32string& s, std::size_t i, std::string_view lit) {
  if (i + lit.size() > s.size()) return false;
  for (std::size_t k = 0; k < lit.size(); ++k) {
    if (s[i + k] != static_cast<char32_t>(lit[k])) return false;
  }
  return true;
}

void append(std::u32string& out, std::string_view lit) {
  for (char c : lit) out.push_back(static_cast<char32_t>(c));
}

std::u32string lowercase(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (matches_at(s, i, kUrlToken)) {
      append(out, kUrlToken);
      i += kUrlToken.size();
    } else if (matches_at(s, i, kUserToken)) {
      append(out, kUserToken);
      i += kUserToken.size();
    } else if (s[i] == static_cast<char32_t>(kDigitChar)) {
      out.push_back(s[i++]);
    } else {
      out.push_back(to_lower(s[i++]));
    }
  }
  return out;
}

// Length of a URL starting at i, or 0.
std::size_t url_length(const std::u32string& s, std::size_t i) {
  if (i > 0 && is_word(s[i - 1])) return 0;
  std::size_t body = 0;
  if (matches_at(s, i, "www.")) {
    body = i + 4;
  } else if (is_ascii_alpha(s[i])) {
    std::size_t j = i + 1;
    while (j < s.size() && (is_word(s[j]) || s[j] == U'+' || s[j] == U'.' || s[j] == U'-') &&
           s[j] != U'_') {
      ++j;
    }
    if (!matches_at(s, j, "://")) return 0;
    body = j + 3;
  } else {
    return 0;
  }
  std::size_t end = body;
  while (end < s.size() && !is_space(s[end])) ++end;
  return end > body ? end - i : 0;
}

std::u32string replace_urls(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (const std::size_t n = url_length(s, i); n > 0) {
      append(out, kUrlToken);
      i += n;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

std::u32string replace_mentions(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == U'@' && i + 1 < s.size() && is_word(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < s.size() && is_word(s[j])) ++j;
      append(out, kUserToken);
      i = j;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

std::u32string collapse_runs(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    run = (i > 0 && s[i] == s[i - 1]) ? run + 1 : 1;
    if (run <= 2 || s[i] == static_cast<char32_t>(kDigitChar)) out.push_back(s[i]);
  }
  return out;
}

}  // namespace

bool is_removed_punct(char32_t c) {
  if (c < 0x80) {
    const bool ascii_punct = (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
                             (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
    return ascii_punct && !is_kept_punct(c);
  }
  return (c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7 ||
         (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x2190 && c <= 0x2BFF) || (c >= 0x3001 && c <= 0x303F) ||
         (c >= 0xFE00 && c <= 0xFE0F) || (c >= 0x1F000 && c <= 0x1FAFF);
}

std::string normalize(std::string_view text) {
  std::u32string s = lowercase(decode(text));
  s = replace_urls(s);
  s = replace_mentions(s);
  s = collapse_runs(s);
  for (char32_t& c : s) {
    if (c >= U'0' && c <= U'9') c = static_cast<char32_t>(kDigitChar);
  }
  for (char32_t& c : s) {
    if (is_removed_punct(c)) c = U' ';
  }
  return encode(collapse_runs(s));
}

TokenSeq tokenize(std::string_view normalized) {
  const std::u32string s = decode(normalized);
  TokenSeq tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char32_t c : s) {
    if (is_space(c)) {
      flush();
    } else if (is_kept_punct(c)) {
      flush();
      tokens.emplace_back(1, static_cast<char>(c));
    } else {
      encode_one(c, current);
    }
  }
  flush();
  return tokens;
}

}  // namespace crisiscnn::textprep
