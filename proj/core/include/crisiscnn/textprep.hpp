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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crisiscnn::textprep {

using TokenSeq = std::vector<std::string>;

struct RawTweet {
  std::string id;
  std::string text;
};

/// Canonical placeholders inserted by normalize().
inline constexpr std::string_view kUrlToken = "HTTP";
inline constexpr std::string_view kUserToken = "userID";
inline constexpr char kDigitChar = 'D';

/// Tweet normalization, applied in this order:
///   1. lowercase (existing placeholders HTTP, userID and D are left alone),
///   2. URLs (scheme://... or www....) -> HTTP,
///   3. @mentions -> userID,
///   4. runs of >= 3 identical characters -> 2,
///   5. digits -> D (one per digit),
///   6. punctuation other than . ; ? ! -> one space,
/// followed by a final run collapse so that the whitespace created in step 6
/// obeys the same two-character limit. Runs of D are never collapsed.
///
/// The result is a fixed point: normalize(normalize(x)) == normalize(x).
std::string normalize(std::string_view text);

/// Whitespace split; each of . ; ? ! becomes its own token.
TokenSeq tokenize(std::string_view normalized);

/// normalize() followed by tokenize().
inline TokenSeq preprocess(std::string_view text) { return tokenize(normalize(text)); }

/// True for the punctuation characters that survive normalization.
constexpr bool is_kept_punct(char32_t c) {
  return c == U'.' || c == U';' || c == U'?' || c == U'!';
}

/// True for code points that step 6 replaces with a space.
bool is_removed_punct(char32_t c);

}  // namespace crisiscnn::textprep
