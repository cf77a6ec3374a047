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

#include "cdistill/emolex.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cdistill/error.hpp"

namespace cdistill::emolex {
namespace {

struct LexiconEntry {
  const char* word;
  const char* category;
  double intensity;
};

// Hand-picked English entries, intensity on a 0..1 scale.
constexpr LexiconEntry kBuiltinLexicon[] = {
    {"angry", "anger", 0.80},       {"furious", "anger", 0.95},     {"outrage", "anger", 0.90},
    {"outrageous", "anger", 0.85},  {"rage", "anger", 0.92},        {"hate", "anger", 0.83},
    {"mad", "anger", 0.70},         {"annoyed", "anger", 0.50},     {"liar", "anger", 0.75},
    {"nonsense", "anger", 0.60},    {"ridiculous", "anger", 0.65},  {"shame", "anger", 0.62},
    {"hope", "anticipation", 0.55}, {"expect", "anticipation", 0.30},
    {"soon", "anticipation", 0.25}, {"waiting", "anticipation", 0.35},
    {"plan", "anticipation", 0.20}, {"upcoming", "anticipation", 0.30},
    {"eager", "anticipation", 0.60}, {"looking", "anticipation", 0.15},
    {"disgusting", "disgust", 0.90}, {"gross", "disgust", 0.75},    {"sick", "disgust", 0.60},
    {"nasty", "disgust", 0.75},     {"vile", "disgust", 0.88},      {"awful", "disgust", 0.70},
    {"filthy", "disgust", 0.72},    {"creepy", "disgust", 0.60},
    {"afraid", "fear", 0.70},       {"scared", "fear", 0.75},       {"terrified", "fear", 0.95},
    {"panic", "fear", 0.88},        {"danger", "fear", 0.70},       {"dangerous", "fear", 0.72},
    {"horror", "fear", 0.90},       {"threat", "fear", 0.65},       {"deadly", "fear", 0.85},
    {"worried", "fear", 0.55},      {"alarming", "fear", 0.70},
    {"happy", "joy", 0.70},         {"glad", "joy", 0.55},          {"love", "joy", 0.80},
    {"wonderful", "joy", 0.80},     {"great", "joy", 0.60},         {"delighted", "joy", 0.85},
    {"congrats", "joy", 0.65},      {"celebrate", "joy", 0.70},     {"nice", "joy", 0.45},
    {"sad", "sadness", 0.65},       {"tragic", "sadness", 0.85},    {"heartbroken", "sadness", 0.92},
    {"cry", "sadness", 0.70},       {"grief", "sadness", 0.88},     {"sorry", "sadness", 0.40},
    {"loss", "sadness", 0.60},      {"miss", "sadness", 0.45},
    {"shocking", "surprise", 0.90}, {"shocked", "surprise", 0.88},  {"unbelievable", "surprise", 0.85},
    {"impossible", "surprise", 0.80}, {"wow", "surprise", 0.60},    {"incredible", "surprise", 0.75},
    {"crazy", "surprise", 0.70},    {"insane", "surprise", 0.80},   {"sudden", "surprise", 0.50},
    {"what", "surprise", 0.30},
    {"trust", "trust", 0.60},       {"official", "trust", 0.45},    {"confirmed", "trust", 0.55},
    {"reliable", "trust", 0.60},    {"true", "trust", 0.40},        {"honest", "trust", 0.65},
    {"verified", "trust", 0.60},    {"agree", "trust", 0.35},       {"source", "trust", 0.25},
};

constexpr std::pair<const char*, int> kBuiltinSentiment[] = {
    {"good", 1},       {"great", 1},     {"happy", 1},      {"love", 1},      {"wonderful", 1},
    {"nice", 1},       {"best", 1},      {"excellent", 1},  {"glad", 1},      {"thanks", 1},
    {"agree", 1},      {"true", 1},      {"honest", 1},     {"hope", 1},      {"beautiful", 1},
    {"awesome", 1},    {"delighted", 1}, {"congrats", 1},   {"reliable", 1},  {"fine", 1},
    {"bad", -1},       {"terrible", -1}, {"awful", -1},     {"hate", -1},     {"angry", -1},
    {"sad", -1},       {"fake", -1},     {"wrong", -1},     {"liar", -1},     {"disgusting", -1},
    {"nonsense", -1},  {"ridiculous", -1}, {"scared", -1},  {"horror", -1},   {"tragic", -1},
    {"worst", -1},     {"stupid", -1},   {"nasty", -1},     {"vile", -1},     {"shame", -1},
    {"deadly", -1},    {"panic", -1},    {"furious", -1},   {"outrage", -1},  {"lies", -1},
};

constexpr const char* kBuiltinEmoticons[] = {
    ":)", ":-)", ":(", ":-(", ":D", ":-D", ";)", ";-)", ":P", ":o", ":O", "xD", "XD", "<3", ":'(", ":|", "-_-",
};

constexpr const char* kFirstPerson[] = {"i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves"};
constexpr const char* kSecondPerson[] = {"you", "your", "yours", "yourself", "yourselves", "u", "ur"};

constexpr std::array<std::string_view, kEmotionDim> kSegmentNames{
    "lexicon.anger",     "lexicon.anticipation", "lexicon.disgust",   "lexicon.fear",
    "lexicon.joy",       "lexicon.sadness",      "lexicon.surprise",  "lexicon.trust",
    "intensity.anger",   "intensity.anticipation", "intensity.disgust", "intensity.fear",
    "intensity.joy",     "intensity.sadness",    "intensity.surprise", "intensity.trust",
    "sentiment_score",   "emoticons",            "punct.exclamation", "punct.question",
    "sentiment_words.positive", "sentiment_words.negative", "pronoun.first", "pronoun.second",
    "upper_case",
};

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c == '\'' || c >= 0x80; }

std::size_t category_index(std::string_view name) {
  const auto it = std::find(kCategories.begin(), kCategories.end(), name);
  return it == kCategories.end() ? kCategories.size()
                                 : static_cast<std::size_t>(it - kCategories.begin());
}

void fill_pronouns(EmotionResources& r) {
  for (const char* w : kFirstPerson) r.first_person.insert(w);
  for (const char* w : kSecondPerson) r.second_person.insert(w);
}

// Splits a "key<TAB>value" line; returns false on blank lines and comments.
bool split_tsv(std::string_view line, std::string_view& key, std::string_view& value,
               const std::filesystem::path& file, std::size_t line_no) {
  line = trim(line);
  if (line.empty() || line.front() == '#') return false;
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) {
    throw DataError(file.string() + ":" + std::to_string(line_no) + ": expected two tab-separated fields");
  }
  key = trim(line.substr(0, tab));
  value = trim(line.substr(tab + 1));
  if (key.empty() || value.empty()) {
    throw DataError(file.string() + ":" + std::to_string(line_no) + ": empty field");
  }
  return true;
}

std::ifstream open_resource(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing emotion resource file: " + path.string());
  return in;
}

template <typename Map, typename Value>
void insert_entry(Map& map, std::string word, Value value, const std::filesystem::path& file,
                  std::size_t line_no, std::vector<std::string>& warnings) {
  auto [it, inserted] = map.try_emplace(word, value);
  if (!inserted) {
    warnings.push_back(file.filename().string() + ":" + std::to_string(line_no) +
                       ": duplicate entry for '" + word + "', later entry wins");
    it->second = value;
  }
}

std::size_t count_non_space_chars(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if (std::isspace(c)) continue;
    if ((c & 0xC0) == 0x80) continue;  // UTF-8 continuation byte
    ++n;
  }
  return n;
}

bool is_all_caps(std::string_view word) {
  std::size_t letters = 0;
  for (unsigned char c : word) {
    if (std::islower(c)) return false;
    if (std::isupper(c)) ++letters;
  }
  // Single capitals ("I", "A") are ordinary words.
  return letters >= 2;
}

}  // namespace

std::vector<std::string> EmotionResources::words_in(std::size_t category_index) const {
  std::vector<std::string> out;
  for (const auto& [word, cat] : category) {
    if (cat == category_index) out.push_back(word);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const EmotionResources& builtin_resources() {
  static const EmotionResources resources = [] {
    EmotionResources r;
    for (const auto& e : kBuiltinLexicon) {
      r.category[e.word] = category_index(e.category);
      r.intensity[e.word] = e.intensity;
    }
    for (const auto& [w, s] : kBuiltinSentiment) r.sentiment[w] = s;
    for (const char* e : kBuiltinEmoticons) r.emoticons.insert(e);
    fill_pronouns(r);
    return r;
  }();
  return resources;
}

EmotionResources load_resources(const std::filesystem::path& dir) {
  EmotionResources r;
  fill_pronouns(r);
  std::string line;

  {
    const auto path = dir / "emotion_lexicon.tsv";
    auto in = open_resource(path);
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      std::string_view word, cat;
      if (!split_tsv(line, word, cat, path, n)) continue;
      const auto idx = category_index(to_lower(cat));
      if (idx == kNumCategories) {
        throw DataError(path.string() + ":" + std::to_string(n) + ": unknown emotion category '" +
                        std::string(cat) + "'");
      }
      insert_entry(r.category, to_lower(word), idx, path, n, r.warnings);
    }
  }
  {
    const auto path = dir / "intensity.tsv";
    auto in = open_resource(path);
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      std::string_view word, value;
      if (!split_tsv(line, word, value, path, n)) continue;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || ptr != value.data() + value.size() || !(v >= 0.0 && v <= 1.0)) {
        throw DataError(path.string() + ":" + std::to_string(n) + ": intensity must be a number in [0,1], got '" +
                        std::string(value) + "'");
      }
      insert_entry(r.intensity, to_lower(word), v, path, n, r.warnings);
    }
  }
  {
    const auto path = dir / "sentiment.tsv";
    auto in = open_resource(path);
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      std::string_view word, value;
      if (!split_tsv(line, word, value, path, n)) continue;
      int polarity = 0;
      if (value == "+1" || value == "1") {
        polarity = 1;
      } else if (value == "-1") {
        polarity = -1;
      } else {
        throw DataError(path.string() + ":" + std::to_string(n) + ": sentiment must be +1 or -1");
      }
      insert_entry(r.sentiment, to_lower(word), polarity, path, n, r.warnings);
    }
  }
  {
    const auto path = dir / "emoticons.txt";
    auto in = open_resource(path);
    while (std::getline(in, line)) {
      const auto e = trim(line);
      if (!e.empty()) r.emoticons.emplace(e);
    }
  }
  return r;
}

void save_resources(const std::filesystem::path& dir, const EmotionResources& r) {
  std::filesystem::create_directories(dir);
  const auto sorted = [](const auto& map) {
    std::vector<std::pair<std::string, typename std::decay_t<decltype(map)>::mapped_type>> v(map.begin(),
                                                                                            map.end());
    std::sort(v.begin(), v.end());
    return v;
  };
  {
    std::ofstream out(dir / "emotion_lexicon.tsv");
    for (const auto& [w, c] : sorted(r.category)) out << w << '\t' << kCategories[c] << '\n';
  }
  {
    std::ofstream out(dir / "intensity.tsv");
    out.precision(17);
    for (const auto& [w, v] : sorted(r.intensity)) out << w << '\t' << v << '\n';
  }
  {
    std::ofstream out(dir / "sentiment.tsv");
    for (const auto& [w, s] : sorted(r.sentiment)) out << w << '\t' << (s > 0 ? "+1" : "-1") << '\n';
  }
  {
    std::vector<std::string> e(r.emoticons.begin(), r.emoticons.end());
    std::sort(e.begin(), e.end());
    std::ofstream out(dir / "emoticons.txt");
    for (const auto& x : e) out << x << '\n';
  }
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

EmotionVector extract_emotion(std::span<const std::string> texts, const EmotionResources& resources) {
  EmotionVector out;
  if (texts.empty()) return out;

  std::string joined;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (i) joined.push_back(' ');
    joined += texts[i];
  }

  std::array<std::size_t, kNumCategories> cat_count{};
  std::array<double, kNumCategories> intensity_sum{};
  std::array<std::size_t, kNumCategories> intensity_n{};
  std::size_t pos = 0, neg = 0, first = 0, second = 0, caps = 0;

  const auto words = split_words(joined);
  for (const auto raw : words) {
    const std::string w = to_lower(raw);
    if (const auto it = resources.category.find(w); it != resources.category.end()) {
      ++cat_count[it->second];
      if (const auto in = resources.intensity.find(w); in != resources.intensity.end()) {
        intensity_sum[it->second] += in->second;
        ++intensity_n[it->second];
      }
    }
    if (const auto it = resources.sentiment.find(w); it != resources.sentiment.end()) {
      (it->second > 0 ? pos : neg) += 1;
    }
    if (resources.first_person.contains(w)) ++first;
    if (resources.second_person.contains(w)) ++second;
    if (is_all_caps(raw)) ++caps;
  }

  std::size_t emoticons = 0, exclaim = 0, question = 0;
  for (char c : joined) {
    exclaim += c == '!';
    question += c == '?';
  }
  {
    std::istringstream chunks(joined);
    std::string chunk;
    while (chunks >> chunk) emoticons += resources.emoticons.contains(chunk);
  }

  auto& v = out.values;
  const double n_words = static_cast<double>(words.size());
  const double n_chars = static_cast<double>(count_non_space_chars(joined));
  const auto per_word = [&](std::size_t c) { return n_words > 0 ? static_cast<double>(c) / n_words : 0.0; };
  const auto per_char = [&](std::size_t c) { return n_chars > 0 ? static_cast<double>(c) / n_chars : 0.0; };

  for (std::size_t c = 0; c < kNumCategories; ++c) {
    v[layout::kEmotionLexicon + c] = per_word(cat_count[c]);
    v[layout::kEmotionIntensity + c] =
        intensity_n[c] ? intensity_sum[c] / static_cast<double>(intensity_n[c]) : 0.0;
  }
  v[layout::kSentimentScore] =
      (static_cast<double>(pos) - static_cast<double>(neg)) / (static_cast<double>(pos + neg) + 1.0);
  v[layout::kEmoticons] = per_char(emoticons);
  v[layout::kExclamation] = per_char(exclaim);
  v[layout::kQuestion] = per_char(question);
  v[layout::kPositiveWords] = per_word(pos);
  v[layout::kNegativeWords] = per_word(neg);
  v[layout::kFirstPerson] = per_word(first);
  v[layout::kSecondPerson] = per_word(second);
  v[layout::kUpperCase] = per_word(caps);
  return out;
}

std::string_view segment_name(std::size_t index) { return kSegmentNames.at(index); }

}  // namespace cdistill::emolex
