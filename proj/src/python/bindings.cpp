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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "cdistill/bundle.hpp"
#include "cdistill/config.hpp"
#include "cdistill/corpus.hpp"
#include "cdistill/emolex.hpp"
#include "cdistill/error.hpp"
#include "cdistill/metrics.hpp"
#include "cdistill/trainer.hpp"

namespace py = pybind11;
using namespace cdistill;

namespace {

std::vector<corpus::NewsRecord> parse_lines(const std::vector<std::string>& lines) {
  std::vector<corpus::NewsRecord> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) out.push_back(corpus::parse_record(lines[i], i + 1));
  return out;
}

std::vector<std::string> serialize_all(const std::vector<corpus::NewsRecord>& records) {
  std::vector<std::string> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(corpus::serialize_record(r));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cdistill native core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());

  m.def("generate_corpus", [](const std::string& spec_json, std::uint64_t seed) {
    return serialize_all(corpus::generate_synthetic_corpus(synthetic_spec_from_json(spec_json), seed));
  }, py::arg("spec_json"), py::arg("seed"));
  m.def("load_corpus", [](const std::string& path) { return serialize_all(corpus::load_corpus(path)); });
  m.def("save_corpus", [](const std::string& path, const std::vector<std::string>& lines) {
    corpus::save_corpus(path, parse_lines(lines));
  });
  m.def("normalize_records", [](const std::vector<std::string>& lines) { return serialize_all(parse_lines(lines)); });
  m.def("chronological_split", [](const std::vector<std::string>& lines, std::array<int, 3> ratio) {
    auto split = corpus::chronological_split(parse_lines(lines), ratio);
    return py::make_tuple(serialize_all(split.train), serialize_all(split.val), serialize_all(split.test));
  }, py::arg("lines"), py::arg("ratio") = std::array<int, 3>{4, 1, 1});
  m.def("save_split", [](const std::string& dir, const std::vector<std::string>& train,
                         const std::vector<std::string>& val, const std::vector<std::string>& test) {
    corpus::CorpusSplit split{parse_lines(train), parse_lines(val), parse_lines(test)};
    corpus::save_split(dir, split);
  });

  m.def("extract_emotion", [](const std::vector<std::string>& texts) {
    auto v = emolex::extract_emotion(texts, emolex::builtin_resources());
    return std::vector<double>(v.values.begin(), v.values.end());
  });
  m.def("segment_names", [] {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < emolex::kEmotionDim; ++i) names.emplace_back(emolex::segment_name(i));
    return names;
  });

  m.def("evaluate", [](const std::vector<double>& scores, const std::vector<int>& labels, double threshold) {
    return metrics::evaluate(scores, labels, threshold).to_json();
  }, py::arg("scores"), py::arg("labels"), py::arg("threshold") = 0.5);
  m.def("auc", [](const std::vector<double>& scores, const std::vector<int>& labels) {
    return metrics::auc(scores, labels);
  });
  m.def("spauc", [](const std::vector<double>& scores, const std::vector<int>& labels, double fpr_max) {
    return metrics::spauc(scores, labels, fpr_max);
  }, py::arg("scores"), py::arg("labels"), py::arg("fpr_max") = 0.1);

  m.def("default_config", [] { return ExperimentConfig{}.to_json(); });
  m.def("config_hash", [](const std::string& json) { return ExperimentConfig::from_json(json).hash(); });

  m.def("train_teacher", [](const std::string& config_json, const std::string& split_dir, const std::string& out) {
    auto config = ExperimentConfig::from_json(config_json);
    config.validate();
    auto split = corpus::load_split(split_dir, config.corpus_config());
    py::gil_scoped_release release;
    auto run = trainer::train_teacher(split, config);
    run.bundle.save(out);
    return run.history.to_csv();
  }, py::arg("config_json"), py::arg("split_dir"), py::arg("out"));
  m.def("train_student", [](const std::string& config_json, const std::string& split_dir,
                            const std::string& teacher, const std::string& out) {
    auto config = ExperimentConfig::from_json(config_json);
    config.validate();
    auto split = corpus::load_split(split_dir, config.corpus_config());
    py::gil_scoped_release release;
    auto run = trainer::train_student(split, teacher, config);
    run.bundle.save(out);
    return run.history.to_csv();
  }, py::arg("config_json"), py::arg("split_dir"), py::arg("teacher"), py::arg("out"));

  m.def("predict_teacher", [](const std::string& path, const std::vector<std::string>& lines) {
    return TeacherBundle::load(path).predict(parse_lines(lines));
  });
  m.def("predict_student", [](const std::string& path, const std::vector<std::string>& lines) {
    return StudentBundle::load(path).predict(parse_lines(lines));
  });
}
