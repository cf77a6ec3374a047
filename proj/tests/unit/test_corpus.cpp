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

#include <algorithm>
#include <sstream>

#include "cdistill/corpus.hpp"
#include "cdistill/emolex.hpp"
#include "cdistill/error.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cdistill;
using namespace cdistill::corpus;

namespace {

std::vector<NewsRecord> numbered(int n) {
  std::vector<NewsRecord> out;
  // Insert in reverse so the split has to sort.
  for (int i = n - 1; i >= 0; --i) out.push_back(testutil::make_record("r" + std::to_string(i), "text", 100 + i, i % 2));
  return out;
}

}  // namespace

TEST_CASE("load_corpus reads valid lines") {
  testutil::TempDir dir;
  testutil::write_text(dir / "c.jsonl",
                       R"({"id":"a","content":"x y","publish_time":3,"label":1,"comments":[]})"
                       "\n"
                       R"({"id":"b","content":"z","publish_time":1,"label":0,"comments":[{"text":"hi","time":2}]})"
                       "\n\n"
                       R"({"id":"c","content":"w","publish_time":2,"label":0,"comments":[]})"
                       "\n");
  const auto records = load_corpus(dir / "c.jsonl");
  REQUIRE(records.size() == 3);
  CHECK(records[0].id == "a");
  CHECK(records[0].label == 1);
  CHECK(records[1].comments.size() == 1);
  CHECK(records[1].comments[0].text == "hi");
}

TEST_CASE("load_corpus errors") {
  std::istringstream missing(R"({"id":"a","content":"x","publish_time":3,"comments":[]})");
  try {
    read_corpus(missing);
    FAIL("expected an error");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("label") != std::string::npos);
    CHECK(msg.find("line 1") != std::string::npos);
  }

  std::istringstream dup(R"({"id":"a","content":"x","publish_time":3,"label":0,"comments":[]})"
                         "\n"
                         R"({"id":"a","content":"y","publish_time":4,"label":1,"comments":[]})");
  CHECK_THROWS_AS(read_corpus(dup), DataError);

  std::istringstream bad_label(R"({"id":"a","content":"x","publish_time":3,"label":2,"comments":[]})");
  CHECK_THROWS_AS(read_corpus(bad_label), DataError);

  std::istringstream malformed("{not json");
  CHECK_THROWS_AS(read_corpus(malformed), DataError);

  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), DataError);
}

TEST_CASE("comments are sorted ascending by time") {
  std::istringstream in(
      R"({"id":"a","content":"x","publish_time":0,"label":0,"comments":[)"
      R"({"text":"c5","time":5},{"text":"c1","time":1},{"text":"c3a","time":3},{"text":"c9","time":9},{"text":"c3b","time":3}]})");
  const auto records = read_corpus(in);
  std::vector<Comment> expected{{"c5", 5}, {"c1", 1}, {"c3a", 3}, {"c9", 9}, {"c3b", 3}};
  std::stable_sort(expected.begin(), expected.end(), [](const Comment& a, const Comment& b) { return a.time < b.time; });
  CHECK(records[0].comments == expected);
}

TEST_CASE("empty comments are dropped unless kept") {
  const std::string line =
      R"({"id":"a","content":"x","publish_time":0,"label":0,"comments":[{"text":"  ","time":1},{"text":"ok","time":2}]})";
  CHECK(parse_record(line, 1).comments.size() == 1);
  CHECK(parse_record(line, 1, CorpusConfig{true}).comments.size() == 2);
}

TEST_CASE("chronological_split sizes") {
  const auto s12 = chronological_split(numbered(12));
  CHECK(s12.train.size() == 8);
  CHECK(s12.val.size() == 2);
  CHECK(s12.test.size() == 2);

  const auto s7 = chronological_split(numbered(7));
  CHECK(s7.train.size() == 4);
  CHECK(s7.val.size() == 1);
  CHECK(s7.test.size() == 2);

  CHECK_THROWS_AS(chronological_split(numbered(5)), DataError);
}

TEST_CASE("chronological_split is ordered and disjoint") {
  const auto split = chronological_split(numbered(30));
  std::vector<NewsRecord> all = split.train;
  all.insert(all.end(), split.val.begin(), split.val.end());
  all.insert(all.end(), split.test.begin(), split.test.end());
  REQUIRE(all.size() == 30);
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].publish_time < all[i].publish_time);
  CHECK(split.train.back().publish_time < split.val.front().publish_time);
  CHECK(split.val.back().publish_time < split.test.front().publish_time);
}

TEST_CASE("split save and load round-trip") {
  testutil::TempDir dir;
  const auto split = chronological_split(generate_synthetic_corpus(SyntheticSpec{.num_records = 60}, 3));
  save_split(dir.path(), split);
  const auto loaded = load_split(dir.path());
  CHECK(loaded.train == split.train);
  CHECK(loaded.val == split.val);
  CHECK(loaded.test == split.test);
}

TEST_CASE("sample_comments keeps the earliest ceil(p n)") {
  const auto r = testutil::make_record("a", "x", 0, 1, {{"c1", 1}, {"c2", 2}, {"c3", 3}, {"c4", 4}});
  const auto quarter = sample_comments(r, 0.25);
  REQUIRE(quarter.comments.size() == 1);
  CHECK(quarter.comments[0].text == "c1");
  CHECK(sample_comments(r, 0.0).comments.empty());
  CHECK(sample_comments(r, 1.0).comments == r.comments);
  CHECK(sample_comments(r, 0.5).comments.size() == 2);
  CHECK(comments_kept(3, 0.25) == 1);
  CHECK(comments_kept(3, 0.5) == 2);
  CHECK(comments_kept(0, 0.75) == 0);
  CHECK_THROWS_AS(sample_comments(r, 1.5), UsageError);
}

TEST_CASE("serialize then parse round-trips") {
  const auto records = generate_synthetic_corpus(SyntheticSpec{.num_records = 40}, 8);
  std::ostringstream out;
  write_corpus(out, records);
  std::istringstream in(out.str());
  CHECK(read_corpus(in) == records);

  const auto unicode = testutil::make_record("u", "héllo \"quoted\" \\ tab\t", 5, 1, {{"naïve 😀", 6}});
  CHECK(parse_record(serialize_record(unicode), 1) == unicode);
}

TEST_CASE("synthetic corpus is deterministic") {
  const SyntheticSpec spec{.num_records = 120};
  std::ostringstream a, b, c;
  write_corpus(a, generate_synthetic_corpus(spec, 17));
  write_corpus(b, generate_synthetic_corpus(spec, 17));
  write_corpus(c, generate_synthetic_corpus(spec, 18));
  CHECK(a.str() == b.str());
  CHECK(a.str() != c.str());
}

TEST_CASE("p_marker 1 puts a marker in every fake record") {
  SyntheticSpec spec{.num_records = 200};
  spec.p_marker = 1.0;
  spec.marker_leak = 0.0;
  const int marker_words = 2 * spec.markers_per_class * spec.marker_periods;
  const auto records = generate_synthetic_corpus(spec, 4);
  int fakes = 0;
  for (const auto& r : records) {
    if (r.label != 1) continue;
    ++fakes;
    bool found = false;
    std::istringstream words(r.content);
    std::string w;
    while (words >> w) {
      if (w.back() == '.') w.pop_back();
      if (w.size() > 1 && w[0] == 'w' && std::stoi(w.substr(1)) < marker_words) found = true;
    }
    CHECK(found);
  }
  CHECK(fakes > 50);
}

TEST_CASE("zero emotion rates leave no class-wise emotion signal") {
  SyntheticSpec spec{.num_records = 200};
  spec.emotion_rate_fake = 0.0;
  spec.emotion_rate_real = 0.0;
  const auto records = generate_synthetic_corpus(spec, 6);
  std::array<std::array<double, emolex::kEmotionDim>, 2> mean{};
  std::array<int, 2> count{};
  for (const auto& r : records) {
    std::vector<std::string> texts;
    for (const auto& c : r.comments) texts.push_back(c.text);
    const auto e = emolex::extract_emotion(texts, emolex::builtin_resources());
    for (std::size_t i = 0; i < emolex::kEmotionDim; ++i) mean[r.label][i] += e[i];
    ++count[r.label];
  }
  REQUIRE(count[0] > 0);
  REQUIRE(count[1] > 0);
  for (std::size_t i = 0; i < emolex::kEmotionDim; ++i) {
    CHECK(std::abs(mean[0][i] / count[0] - mean[1][i] / count[1]) < 1e-12);
  }
}

TEST_CASE("synthetic spec validation") {
  SyntheticSpec tiny;
  tiny.vocab_size = 20;
  CHECK_THROWS_AS(generate_synthetic_corpus(tiny, 1), UsageError);
}
