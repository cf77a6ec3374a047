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

#include "cdistill/evalkit.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "cdistill/corpus.hpp"
#include "cdistill/error.hpp"
#include "cdistill/trainer.hpp"
#include "json.hpp"

namespace cdistill::evalkit {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::vector<std::string> metric_cells(const metrics::EvalReport& r) {
  return {format_number(r.macro_f1), format_number(r.acc), format_number(r.f1_real), format_number(r.f1_fake),
          opt(r.auc), opt(r.spauc)};
}

const std::vector<std::string> kMetricColumns{"macF1", "acc", "f1_real", "f1_fake", "auc", "spauc"};

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
    out << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out.str();
}

std::string Table::to_text() const {
  std::vector<std::size_t> width(columns.size(), 0);
  for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << "  ";
      out << cells[i];
      if (i + 1 < cells.size()) out << std::string(width[i] - cells[i].size(), ' ');
    }
    out << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out.str();
}

std::string Table::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < columns.size() && i < r.size(); ++i) o[columns[i]] = r[i];
    arr.push_back(o);
  }
  return arr.dump(2);
}

metrics::EvalReport evaluate(TeacherBundle& teacher, const std::vector<corpus::NewsRecord>& records,
                             double threshold) {
  return metrics::evaluate(teacher.predict(records), labels_of(records), threshold);
}

metrics::EvalReport evaluate(StudentBundle& student, const std::vector<corpus::NewsRecord>& records,
                             double threshold) {
  return metrics::evaluate(student.predict(records), labels_of(records), threshold);
}

std::optional<metrics::EvalReport> ProportionSweep::find(const std::string& model, double proportion) const {
  for (const auto& c : cells) {
    if (c.model == model && c.proportion == proportion) return c.report;
  }
  return std::nullopt;
}

Table ProportionSweep::matrix() const {
  Table t;
  t.columns.push_back("model");
  for (double p : proportions) t.columns.push_back(format_number(100.0 * p) + "%");
  for (const char* model : {"student", "teacher"}) {
    std::vector<std::string> row{model};
    for (double p : proportions) {
      const auto r = find(model, p);
      row.push_back(r ? format_number(r->macro_f1) : std::string());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table ProportionSweep::long_form() const {
  Table t;
  t.columns = {"model", "proportion"};
  t.columns.insert(t.columns.end(), kMetricColumns.begin(), kMetricColumns.end());
  for (const auto& c : cells) {
    std::vector<std::string> row{c.model, format_number(c.proportion)};
    const auto m = metric_cells(c.report);
    row.insert(row.end(), m.begin(), m.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

ProportionSweep comment_proportion_sweep(TeacherBundle& teacher, StudentBundle* student,
                                         const std::vector<corpus::NewsRecord>& test,
                                         const std::vector<double>& proportions) {
  ProportionSweep s;
  s.proportions = proportions;
  for (double p : proportions) {
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("comment proportion " + format_number(p) + " is outside [0, 1]");
    if (p == 0.0) {
      if (student) s.cells.push_back({"student", p, evaluate(*student, test)});
    } else {
      s.cells.push_back({"teacher", p, evaluate(teacher, corpus::sample_comments(test, p))});
    }
  }
  return s;
}

double VariantResult::mean_macro_f1() const {
  double total = 0.0;
  for (const auto& r : reports) total += r.macro_f1;
  return reports.empty() ? 0.0 : total / static_cast<double>(reports.size());
}

Table AblationSweep::table() const {
  Table t;
  t.columns = {"variant", "seeds", "mean_macF1"};
  std::size_t n = 0;
  for (const auto& v : variants) n = std::max(n, v.reports.size());
  for (std::size_t i = 0; i < n; ++i) t.columns.push_back("macF1_seed" + std::to_string(i));
  for (const auto& v : variants) {
    std::vector<std::string> row{std::string(student::to_string(v.kind)), std::to_string(v.reports.size()),
                                 format_number(v.mean_macro_f1())};
    for (const auto& r : v.reports) row.push_back(format_number(r.macro_f1));
    t.rows.push_back(std::move(row));
  }
  return t;
}

AblationSweep ablation_sweep(const corpus::CorpusSplit& split, const ExperimentConfig& config,
                             const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw UsageError("ablation_sweep needs at least one seed");
  AblationSweep out;
  for (auto kind : {student::Ablation::kNone, student::Ablation::kWithoutSemantic,
                    student::Ablation::kWithoutEmotional, student::Ablation::kWithoutOverall}) {
    out.variants.push_back({kind, {}, {}});
  }
  for (std::uint64_t seed : seeds) {
    ExperimentConfig c = config;
    c.seed = seed;
    auto teacher = trainer::train_teacher(split, c);
    const std::uint64_t h = trainer::checkpoint_hash(teacher.bundle);
    for (auto& v : out.variants) {
      ExperimentConfig sc = c;
      sc.student.model.mode = student::DistillMode::kAdaptive;
      sc.student.model.ablation = v.kind;
      auto run = trainer::train_student(split, teacher.bundle, h, sc);
      v.seeds.push_back(seed);
      v.reports.push_back(evaluate(run.bundle, split.test));
    }
  }
  return out;
}

Table GridSweep::table() const {
  Table t;
  t.columns = {parameter};
  for (const auto& c : kMetricColumns) t.columns.push_back("student_" + c);
  for (const auto& c : kMetricColumns) t.columns.push_back("teacher_" + c);
  for (const auto& p : points) {
    std::vector<std::string> row{format_number(p.value)};
    const auto s = metric_cells(p.student);
    row.insert(row.end(), s.begin(), s.end());
    if (p.teacher) {
      const auto m = metric_cells(*p.teacher);
      row.insert(row.end(), m.begin(), m.end());
    } else {
      row.insert(row.end(), kMetricColumns.size(), std::string());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

GridSweep alpha_sweep(const corpus::CorpusSplit& split, const ExperimentConfig& config,
                      const std::vector<double>& alphas) {
  GridSweep out{"alpha", {}};
  auto teacher = trainer::train_teacher(split, config);
  const std::uint64_t h = trainer::checkpoint_hash(teacher.bundle);
  const auto teacher_report = evaluate(teacher.bundle, split.test);
  for (double a : alphas) {
    ExperimentConfig c = config;
    c.student.alpha = a;
    auto run = trainer::train_student(split, teacher.bundle, h, c);
    out.points.push_back({a, teacher_report, evaluate(run.bundle, split.test)});
  }
  return out;
}

GridSweep lr_sweep(const corpus::CorpusSplit& split, const ExperimentConfig& config,
                   const std::vector<double>& rates) {
  GridSweep out{"lr", {}};
  for (double lr : rates) {
    ExperimentConfig c = config;
    c.teacher.lr = lr;
    c.student.train.lr = lr;
    auto teacher = trainer::train_teacher(split, c);
    const std::uint64_t h = trainer::checkpoint_hash(teacher.bundle);
    auto run = trainer::train_student(split, teacher.bundle, h, c);
    out.points.push_back({lr, evaluate(teacher.bundle, split.test), evaluate(run.bundle, split.test)});
  }
  return out;
}

}  // namespace cdistill::evalkit
