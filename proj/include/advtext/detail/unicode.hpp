// Copyright 2026 The advtext Authors.
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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace advtext::detail {

// Minimal UTF-8 codepoint walker. Malformed bytes are passed through as
// single opaque "codepoints" so tokenization never loses input bytes.
struct Utf8Char {
  char32_t cp = 0;
  std::size_t length = 1;  // bytes consumed
};

inline Utf8Char decode_utf8(std::string_view s, std::size_t pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) return {b0, 1};

  auto cont = [&](std::size_t i) {
    return i < s.size() && (byte(i) & 0xC0) == 0x80;
  };

  if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
    char32_t cp = (char32_t(b0 & 0x1F) << 6) | (byte(pos + 1) & 0x3F);
    return Utf8Char{cp, 2};
  }
  if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
    char32_t cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(byte(pos + 1) & 0x3F) << 6) |
                  (byte(pos + 2) & 0x3F);
    return Utf8Char{cp, 3};
  }
  if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
    char32_t cp = (char32_t(b0 & 0x07) << 18) | (char32_t(byte(pos + 1) & 0x3F) << 12) |
                  (char32_t(byte(pos + 2) & 0x3F) << 6) | (byte(pos + 3) & 0x3F);
    return Utf8Char{cp, 4};
  }
  // Invalid lead or truncated sequence: treat one byte as an opaque char.
  return {b0, 1};
}

// Unicode White_Space.
inline bool is_whitespace(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
    case 0x20: case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Unicode general category P over the ranges that occur in practical text
// corpora (ASCII, Latin-1 supplement, general punctuation, Devanagari
// danda/double danda as used by Bangla, Arabic marks, CJK and fullwidth
// forms). Symbols (category S: $ + < = > ^ ` | ~) are deliberately not
// punctuation.
inline bool is_punctuation(char32_t cp) {
  if (cp < 0x80) {
    switch (cp) {
      case '!': case '"': case '#': case '%': case '&': case '\'':
      case '(': case ')': case '*': case ',': case '-': case '.':
      case '/': case ':': case ';': case '?': case '@': case '[':
      case '\\': case ']': case '_': case '{': case '}':
        return true;
      default:
        return false;
    }
  }
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x060C: case 0x061B: case 0x061F:
    case 0x0964: case 0x0965:  // danda, double danda
    case 0x3001: case 0x3002:
      return true;
    default:
      break;
  }
  if (cp >= 0x2010 && cp <= 0x2027) return true;   // dashes, quotes, daggers, ellipsis
  if (cp >= 0x2030 && cp <= 0x205E) {
    // Exclude the few category-S codepoints inside the block.
    return cp != 0x2044 && cp != 0x2052;
  }
  if (cp >= 0x3008 && cp <= 0x3011) return true;   // CJK brackets
  if (cp >= 0x3014 && cp <= 0x301F) return true;
  if (cp >= 0xFE50 && cp <= 0xFE61) return true;   // small form variants
  if (cp >= 0xFF01 && cp <= 0xFF03) return true;   // fullwidth forms (P subset)
  if (cp >= 0xFF05 && cp <= 0xFF0A) return true;
  if (cp >= 0xFF0C && cp <= 0xFF0F) return true;
  if (cp == 0xFF1A || cp == 0xFF1B || cp == 0xFF1F || cp == 0xFF20) return true;
  if (cp == 0xFF3B || cp == 0xFF3C || cp == 0xFF3D || cp == 0xFF3F) return true;
  if (cp == 0xFF5B || cp == 0xFF5D) return true;
  return false;
}

}  // namespace advtext::detail
