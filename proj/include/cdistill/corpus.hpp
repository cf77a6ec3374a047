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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cdistill::corpus {

struct Comment {
  std::string text;
  std::int64_t time = 0;

  bool operator==(const Comment&) const = default;
};

// One "content + comments" pair. Label 1 is fake, 0 is real.
struct NewsRecord {
  std::string id;
  std::string content;
  std::int64_t publish_time = 0;
  std::vector<Comment> comments;  // ascending by time
  int label = 0;

  bool operator==(const NewsRecord&) const = default;
};

struct CorpusConfig {
  bool keep_empty_comments = false;
};

struct CorpusSplit {
  std::vector<NewsRecord> train;
  std::vector<NewsRecord> val;
  std::vector<NewsRecord> test;
  std::array<int, 3> ratio{4, 1, 1};
};

// Reference partition sizes of the Weibo21 benchmark (train/val/test).
inline constexpr std::array<int, 3> kWeibo21SplitSizes{5062, 1242, 1263};

// Parses one JSONL line. `line_no` is only used for error messages.
NewsRecord parse_record(const std::string& line, std::size_t line_no,
                        const CorpusConfig& config = {});

std::vector<NewsRecord> read_corpus(std::istream& in, const CorpusConfig& config = {});
std::vector<NewsRecord> load_corpus(const std::filesystem::path& path,
                                    const CorpusConfig& config = {});

std::string serialize_record(const NewsRecord& record);
void write_corpus(std::ostream& out, const std::vector<NewsRecord>& records);
void save_corpus(const std::filesystem::path& path, const std::vector<NewsRecord>& records);

// Sorts by (publish_time, id) and cuts contiguous partitions of sizes
// floor(n*a/S), floor(n*b/S) and the remainder, where S = a+b+c.
CorpusSplit chronological_split(std::vector<NewsRecord> records,
                                std::array<int, 3> ratio = {4, 1, 1});

void save_split(const std::filesystem::path& dir, const CorpusSplit& split);
CorpusSplit load_split(const std::filesystem::path& dir, const CorpusConfig& config = {});

// Number of comments kept for a proportion: ceil(p * n), clamped to [0, n].
std::size_t comments_kept(std::size_t n, double proportion);

// Copy of `record` keeping the earliest ceil(proportion * |C|) comments.
NewsRecord sample_comments(const NewsRecord& record, double proportion);
std::vector<NewsRecord> sample_comments(const std::vector<NewsRecord>& records, double proportion);

// Same records with every comment removed.
std::vector<NewsRecord> strip_comments(std::vector<NewsRecord> records);

struct IntRange {
  int min = 0;
  int max = 0;
};

// Parameters of the synthetic generator. Class signal is planted in
// three places: drifting topic markers and stable tone cues in the
// content, and emotional language in the comments. Comments may also
// quote the content cue, which links the two token sequences.
struct SyntheticSpec {
  int num_records = 900;
  double fake_fraction = 0.5;

  // Size of the synthetic word inventory; markers and cue words are
  // carved out of it and the rest are neutral filler words.
  int vocab_size = 400;
  int markers_per_class = 8;      // per period
  int marker_periods = 6;         // marker groups rotate along the timeline
  int cues_per_class = 6;

  double p_marker = 0.8;          // content carries a topic marker of its class
  double p_cue = 0.6;             // content carries a tone cue of its class
  // Per-filler probability of a class-neutral marker word from any
  // period, so later topics already occur before they turn informative.
  double marker_leak = 0.05;
  IntRange content_len{12, 24};

  IntRange num_comments{3, 8};
  IntRange comment_len{4, 10};
  // Per-word probability of an emotion-lexicon word in a comment.
  double emotion_rate_fake = 0.30;
  double emotion_rate_real = 0.05;
  // Per-comment probability that the comment quotes the content cue.
  double p_echo = 0.5;

  std::int64_t start_time = 1'500'000'000;
  std::int64_t time_span = 3 * 365 * 24 * 3600;
};

// Deterministic for a fixed (spec, seed).
std::vector<NewsRecord> generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace cdistill::corpus
