/*
 * Copyright 2026 The cdistill Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cdistill::emolex {

inline constexpr std::size_t kNumCategories = 8;
inline constexpr std::array<std::string_view, kNumCategories> kCategories{
    "anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"};

// Fixed layout of the 25-dimensional social-emotion vector.
namespace layout {
inline constexpr std::size_t kEmotionLexicon = 0;     // 8, per-category word frequency
inline constexpr std::size_t kEmotionIntensity = 8;   // 8, mean intensity of matched words
inline constexpr std::size_t kSentimentScore = 16;    // 1, (pos-neg)/(pos+neg+1)
inline constexpr std::size_t kEmoticons = 17;         // 1, per non-space character
inline constexpr std::size_t kExclamation = 18;       // 1, per non-space character
inline constexpr std::size_t kQuestion = 19;          // 1, per non-space character
inline constexpr std::size_t kPositiveWords = 20;     // 1, per word
inline constexpr std::size_t kNegativeWords = 21;     // 1, per word
inline constexpr std::size_t kFirstPerson = 22;       // 1, per word
inline constexpr std::size_t kSecondPerson = 23;      // 1, per word
inline constexpr std::size_t kUpperCase = 24;         // 1, fraction of all-caps words
inline constexpr std::size_t kSize = 25;
}  // namespace layout

inline constexpr std::size_t kEmotionDim = layout::kSize;

struct EmotionVector {
  std::array<double, kEmotionDim> values{};

  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const EmotionVector&) const = default;
};

struct EmotionResources {
  std::unordered_map<std::string, std::size_t> category;   // word -> category index
  std::unordered_map<std::string, double> intensity;       // word -> [0, 1]
  std::unordered_map<std::string, int> sentiment;          // word -> +1 / -1
  std::unordered_set<std::string> emoticons;
  std::unordered_set<std::string> first_person;
  std::unordered_set<std::string> second_person;
  // Non-fatal issues found while loading, e.g. duplicate entries.
  std::vector<std::string> warnings;

  // Words of the emotion lexicon in `category_index`, sorted.
  std::vector<std::string> words_in(std::size_t category_index) const;
};

// Small built-in English resource set.
const EmotionResources& builtin_resources();

// Reads emotion_lexicon.tsv, intensity.tsv, sentiment.tsv and emoticons.txt.
// Duplicate words keep the later entry and record a warning.
EmotionResources load_resources(const std::filesystem::path& dir);

// Writes `resources` in the on-disk format read by load_resources.
void save_resources(const std::filesystem::path& dir, const EmotionResources& resources);

// A word is a maximal run of letters, digits, apostrophes and non-ASCII
// bytes. Everything else separates words.
std::vector<std::string_view> split_words(std::string_view text);

// Social-emotion features of the concatenation of `texts` (joined by a
// space). An empty list yields the zero vector.
EmotionVector extract_emotion(std::span<const std::string> texts, const EmotionResources& resources);

std::string_view segment_name(std::size_t index);

}  // namespace cdistill::emolex
