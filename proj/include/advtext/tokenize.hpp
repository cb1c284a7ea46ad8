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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "advtext/detail/unicode.hpp"
#include "advtext/errors.hpp"

namespace advtext {

using TokenList = std::vector<std::string>;

/// Splits on unicode whitespace, then isolates each punctuation codepoint
/// (category P, including the Bangla danda) as a standalone token. No case
/// folding, no accent stripping; every non-whitespace byte of the input is
/// preserved in some token.
inline TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto [cp, len] = detail::decode_utf8(text, pos);
    if (detail::is_whitespace(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
    } else if (detail::is_punctuation(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
      tokens.emplace_back(text.substr(pos, len));
    } else {
      current.append(text.substr(pos, len));
    }
    pos += len;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  if (tokens.empty()) {
    throw TokenizeError("tokenize: input is empty or all whitespace");
  }
  return tokens;
}

/// Single-space join; the detokenization used throughout the attack loops.
inline std::string join_tokens(const TokenList& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i != 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

/// Leave-one-out join. Requires at least two tokens, otherwise the result
/// would be an empty sentence no classifier accepts.
inline std::string join_tokens_except(const TokenList& tokens, std::size_t index) {
  if (tokens.size() < 2) {
    throw ContractViolation("join_tokens_except: need at least 2 tokens, got " +
                            std::to_string(tokens.size()));
  }
  if (index >= tokens.size()) {
    throw ContractViolation("join_tokens_except: index out of range");
  }
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i == index) continue;
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

/// Joins with single spaces, replacing position `index` by `mask_token`.
/// The output always contains exactly one mask occurrence, matching the
/// fill-mask client precondition.
inline std::string replace_with_mask(const TokenList& tokens, std::size_t index,
                                     const std::string& mask_token) {
  if (index >= tokens.size()) {
    throw ContractViolation("replace_with_mask: index out of range");
  }
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i != 0) out += ' ';
    out += (i == index) ? mask_token : tokens[i];
  }
  return out;
}

}  // namespace advtext
