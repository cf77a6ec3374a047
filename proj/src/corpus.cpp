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

#include "cdistill/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "cdistill/emolex.hpp"
#include "cdistill/error.hpp"
#include "cdistill/rng.hpp"

namespace cdistill::corpus {
namespace {

using Json = nlohmann::ordered_json;

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no); }

const Json& require(const Json& obj, const char* field, std::size_t line_no) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw DataError(where(line_no) + ": missing field \"" + field + "\"");
  return *it;
}

std::int64_t require_int(const Json& obj, const char* field, std::size_t line_no) {
  const Json& v = require(obj, field, line_no);
  if (!v.is_number_integer()) throw DataError(where(line_no) + ": field \"" + field + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::string require_string(const Json& obj, const char* field, std::size_t line_no) {
  const Json& v = require(obj, field, line_no);
  if (!v.is_string()) throw DataError(where(line_no) + ": field \"" + field + "\" must be a string");
  return v.get<std::string>();
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

bool chronological_less(const NewsRecord& a, const NewsRecord& b) {
  if (a.publish_time != b.publish_time) return a.publish_time < b.publish_time;
  return a.id < b.id;
}

}  // namespace

NewsRecord parse_record(const std::string& line, std::size_t line_no, const CorpusConfig& config) {
  Json obj;
  try {
    obj = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(where(line_no) + ": malformed JSON (" + e.what() + ")");
  }
  if (!obj.is_object()) throw DataError(where(line_no) + ": record must be a JSON object");

  NewsRecord r;
  r.id = require_string(obj, "id", line_no);
  r.content = require_string(obj, "content", line_no);
  r.publish_time = require_int(obj, "publish_time", line_no);
  const std::int64_t label = require_int(obj, "label", line_no);
  if (label != 0 && label != 1) throw DataError(where(line_no) + ": field \"label\" must be 0 or 1");
  r.label = static_cast<int>(label);
  if (is_blank(r.content)) throw DataError(where(line_no) + ": field \"content\" is empty");

  const Json& comments = require(obj, "comments", line_no);
  if (!comments.is_array()) throw DataError(where(line_no) + ": field \"comments\" must be an array");
  for (const Json& c : comments) {
    if (!c.is_object()) throw DataError(where(line_no) + ": comments must be objects");
    Comment cm{require_string(c, "text", line_no), require_int(c, "time", line_no)};
    if (!config.keep_empty_comments && is_blank(cm.text)) continue;
    r.comments.push_back(std::move(cm));
  }
  std::stable_sort(r.comments.begin(), r.comments.end(),
                   [](const Comment& a, const Comment& b) { return a.time < b.time; });
  return r;
}

std::vector<NewsRecord> read_corpus(std::istream& in, const CorpusConfig& config) {
  std::vector<NewsRecord> out;
  std::unordered_set<std::string> ids;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (is_blank(line)) continue;
    NewsRecord r = parse_record(line, n, config);
    if (!ids.insert(r.id).second) throw DataError(where(n) + ": duplicate id \"" + r.id + "\"");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<NewsRecord> load_corpus(const std::filesystem::path& path, const CorpusConfig& config) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path.string());
  try {
    return read_corpus(in, config);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string serialize_record(const NewsRecord& r) {
  Json obj;
  obj["id"] = r.id;
  obj["content"] = r.content;
  obj["publish_time"] = r.publish_time;
  obj["label"] = r.label;
  Json comments = Json::array();
  for (const auto& c : r.comments) {
    Json cj;
    cj["text"] = c.text;
    cj["time"] = c.time;
    comments.push_back(std::move(cj));
  }
  obj["comments"] = std::move(comments);
  return obj.dump();
}

void write_corpus(std::ostream& out, const std::vector<NewsRecord>& records) {
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

void save_corpus(const std::filesystem::path& path, const std::vector<NewsRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write corpus " + path.string());
  write_corpus(out, records);
}

CorpusSplit chronological_split(std::vector<NewsRecord> records, std::array<int, 3> ratio) {
  if (std::any_of(ratio.begin(), ratio.end(), [](int x) { return x <= 0; })) {
    throw UsageError("split ratio entries must be positive");
  }
  const std::size_t total = static_cast<std::size_t>(ratio[0] + ratio[1] + ratio[2]);
  const std::size_t n = records.size();
  if (n < total) {
    throw DataError("chronological split needs at least " + std::to_string(total) + " records, got " +
                    std::to_string(n));
  }
  std::sort(records.begin(), records.end(), chronological_less);
  const std::size_t n_train = n * static_cast<std::size_t>(ratio[0]) / total;
  const std::size_t n_val = n * static_cast<std::size_t>(ratio[1]) / total;

  CorpusSplit s;
  s.ratio = ratio;
  const auto begin = std::make_move_iterator(records.begin());
  s.train.assign(begin, begin + static_cast<std::ptrdiff_t>(n_train));
  s.val.assign(begin + static_cast<std::ptrdiff_t>(n_train), begin + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(begin + static_cast<std::ptrdiff_t>(n_train + n_val), std::make_move_iterator(records.end()));
  return s;
}

void save_split(const std::filesystem::path& dir, const CorpusSplit& split) {
  std::filesystem::create_directories(dir);
  save_corpus(dir / "train.jsonl", split.train);
  save_corpus(dir / "val.jsonl", split.val);
  save_corpus(dir / "test.jsonl", split.test);
}

CorpusSplit load_split(const std::filesystem::path& dir, const CorpusConfig& config) {
  CorpusSplit s;
  s.train = load_corpus(dir / "train.jsonl", config);
  s.val = load_corpus(dir / "val.jsonl", config);
  s.test = load_corpus(dir / "test.jsonl", config);
  return s;
}

std::size_t comments_kept(std::size_t n, double proportion) {
  if (!(proportion >= 0.0 && proportion <= 1.0)) throw UsageError("comment proportion must be in [0, 1]");
  // Guard against 0.75 * 4 landing a hair above 3 before the ceiling.
  const double scaled = proportion * static_cast<double>(n);
  const double rounded = std::round(scaled);
  const double k = std::abs(scaled - rounded) < 1e-9 ? rounded : std::ceil(scaled);
  return std::min(n, static_cast<std::size_t>(k));
}

NewsRecord sample_comments(const NewsRecord& record, double proportion) {
  NewsRecord out = record;
  out.comments.resize(comments_kept(record.comments.size(), proportion));
  return out;
}

std::vector<NewsRecord> sample_comments(const std::vector<NewsRecord>& records, double proportion) {
  std::vector<NewsRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(sample_comments(r, proportion));
  return out;
}

std::vector<NewsRecord> strip_comments(std::vector<NewsRecord> records) {
  for (auto& r : records) r.comments.clear();
  return records;
}

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[rng.below(items.size())];
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

void check_range(const IntRange& r, const char* what, int min_allowed) {
  if (r.min < min_allowed || r.max < r.min) {
    throw UsageError(std::string("synthetic spec: invalid range for ") + what);
  }
}

}  // namespace

std::vector<NewsRecord> generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.num_records < 1) throw UsageError("synthetic spec: num_records must be positive");
  if (spec.markers_per_class < 1 || spec.marker_periods < 1 || spec.cues_per_class < 1) {
    throw UsageError("synthetic spec: marker and cue counts must be positive");
  }
  check_range(spec.content_len, "content_len", 1);
  check_range(spec.num_comments, "num_comments", 0);
  check_range(spec.comment_len, "comment_len", 1);
  const int reserved = 2 * spec.markers_per_class * spec.marker_periods + 2 * spec.cues_per_class;
  if (spec.vocab_size < reserved + 1) {
    throw UsageError("synthetic spec: vocab_size " + std::to_string(spec.vocab_size) +
                     " cannot hold " + std::to_string(reserved) + " marker/cue words plus fillers");
  }

  // Word inventory: w0..w{V-1}; markers first, then cues, then fillers.
  std::vector<std::string> words;
  for (int i = 0; i < spec.vocab_size; ++i) words.push_back("w" + std::to_string(i));
  std::size_t next = 0;
  std::vector<std::vector<std::string>> fake_markers(spec.marker_periods), real_markers(spec.marker_periods);
  for (int p = 0; p < spec.marker_periods; ++p) {
    for (int i = 0; i < spec.markers_per_class; ++i) fake_markers[p].push_back(words[next++]);
    for (int i = 0; i < spec.markers_per_class; ++i) real_markers[p].push_back(words[next++]);
  }
  std::vector<std::string> fake_cues, real_cues, fillers;
  for (int i = 0; i < spec.cues_per_class; ++i) fake_cues.push_back(words[next++]);
  for (int i = 0; i < spec.cues_per_class; ++i) real_cues.push_back(words[next++]);
  while (next < words.size()) fillers.push_back(words[next++]);

  // Fake comments lean on high-arousal categories, real ones on calm ones.
  const auto& res = emolex::builtin_resources();
  const auto collect = [&](std::initializer_list<std::string_view> cats) {
    std::vector<std::string> out;
    for (const auto cat : cats) {
      const auto idx = static_cast<std::size_t>(
          std::find(emolex::kCategories.begin(), emolex::kCategories.end(), cat) - emolex::kCategories.begin());
      for (auto& w : res.words_in(idx)) out.push_back(std::move(w));
    }
    return out;
  };
  const auto arousal_words = collect({"anger", "fear", "surprise", "disgust"});
  const auto calm_words = collect({"trust", "anticipation", "joy"});

  std::vector<std::string> all_markers;
  for (int p = 0; p < spec.marker_periods; ++p) {
    all_markers.insert(all_markers.end(), fake_markers[p].begin(), fake_markers[p].end());
    all_markers.insert(all_markers.end(), real_markers[p].begin(), real_markers[p].end());
  }
  Rng rng(seed);
  const auto filler = [&]() -> const std::string& {
    return rng.bernoulli(spec.marker_leak) ? pick(rng, all_markers) : pick(rng, fillers);
  };
  std::vector<NewsRecord> out;
  out.reserve(static_cast<std::size_t>(spec.num_records));
  const double step = static_cast<double>(spec.time_span) / static_cast<double>(spec.num_records);
  for (int i = 0; i < spec.num_records; ++i) {
    NewsRecord r;
    r.id = "syn" + std::to_string(i);
    r.publish_time = spec.start_time + static_cast<std::int64_t>(step * i) + rng.between(0, static_cast<std::int64_t>(step / 2));
    r.label = rng.bernoulli(spec.fake_fraction) ? 1 : 0;
    const bool fake = r.label == 1;
    const auto period = static_cast<std::size_t>(
        std::min<std::int64_t>(spec.marker_periods - 1, static_cast<std::int64_t>(i) * spec.marker_periods / spec.num_records));

    std::vector<std::string> tokens;
    const auto len = static_cast<std::size_t>(rng.between(spec.content_len.min, spec.content_len.max));
    for (std::size_t t = 0; t < len; ++t) tokens.push_back(filler());
    if (rng.bernoulli(spec.p_marker)) {
      tokens[rng.below(tokens.size())] = pick(rng, fake ? fake_markers[period] : real_markers[period]);
    }
    std::string cue;
    if (rng.bernoulli(spec.p_cue)) {
      cue = pick(rng, fake ? fake_cues : real_cues);
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(rng.below(tokens.size() + 1)), cue);
    }
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (t) r.content.push_back(' ');
      r.content += tokens[t];
    }
    r.content.push_back('.');

    const double emotion_rate = fake ? spec.emotion_rate_fake : spec.emotion_rate_real;
    const auto& emotion_words = fake ? arousal_words : calm_words;
    const auto n_comments = rng.between(spec.num_comments.min, spec.num_comments.max);
    std::int64_t t_comment = r.publish_time;
    for (std::int64_t c = 0; c < n_comments; ++c) {
      t_comment += rng.between(1, 3600);
      std::string text;
      const auto clen = rng.between(spec.comment_len.min, spec.comment_len.max);
      for (std::int64_t w = 0; w < clen; ++w) {
        std::string word;
        if (rng.bernoulli(emotion_rate)) {
          word = pick(rng, emotion_words);
          if (fake && rng.bernoulli(0.3)) word = upper(word);
          const double u = rng.uniform();
          if (u < (fake ? 0.4 : 0.1)) {
            word += "!";
          } else if (u < (fake ? 0.6 : 0.15)) {
            word += "?!";
          }
        } else {
          word = filler();
        }
        if (!text.empty()) text.push_back(' ');
        text += word;
      }
      if (!cue.empty() && rng.bernoulli(spec.p_echo)) text += " " + cue;
      r.comments.push_back(Comment{std::move(text), t_comment});
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace cdistill::corpus
