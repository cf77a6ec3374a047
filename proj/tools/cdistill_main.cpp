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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdistill/bundle.hpp"
#include "cdistill/config.hpp"
#include "cdistill/corpus.hpp"
#include "cdistill/diagnostics.hpp"
#include "cdistill/error.hpp"
#include "cdistill/evalkit.hpp"
#include "cdistill/nn/checkpoint.hpp"
#include "cdistill/trainer.hpp"

namespace fs = std::filesystem;
using namespace cdistill;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text(path, text);
  }
}

std::array<int, 3> parse_ratio(const std::string& text) {
  std::array<int, 3> r{};
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> r[0] >> c1 >> r[1] >> c2 >> r[2]) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw UsageError("--ratio must look like 4:1:1, got '" + text + "'");
  }
  for (int v : r) {
    if (v <= 0) throw UsageError("--ratio parts must be positive");
  }
  return r;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("--seeds must be a comma separated list of integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("--seeds is empty");
  return out;
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string split_dir;

  void add(CLI::App* app, bool config_required = true) {
    auto* opt = app->add_option("--config", config, "JSON config file");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "Overrides the config seed");
    app->add_option("--split-dir", split_dir, "Overrides data.split_dir");
  }

  ExperimentConfig load() const {
    ExperimentConfig c = config.empty() ? ExperimentConfig{} : ExperimentConfig::load(config);
    if (seed) c.seed = *seed;
    if (!split_dir.empty()) c.split_dir = split_dir;
    return c;
  }
};

corpus::CorpusSplit load_split_of(const ExperimentConfig& c) {
  if (c.split_dir.empty()) throw UsageError("no split directory: set data.split_dir or pass --split-dir");
  return corpus::load_split(c.split_dir, c.corpus_config());
}

void log_epoch(const std::string& tag, const trainer::EpochStats& s) {
  std::cerr << tag << " epoch " << s.epoch << " train_loss " << evalkit::format_number(s.train_loss) << " val_macF1 "
            << evalkit::format_number(s.val_macro_f1) << '\n';
}

std::string history_path(const std::string& out, const std::string& given) {
  return given.empty() ? out + ".history.csv" : given;
}

int run(int argc, char** argv) {
  CLI::App app{"Comment-aware teacher and content-only student for fake news detection"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "No per-epoch progress on stderr");

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic corpus");
  std::string spec_path, gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("--spec", spec_path, "JSON generator spec (defaults when omitted)")->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--out", gen_out, "Output JSONL")->required();

  auto* spec_default = app.add_subcommand("spec-default", "Print the default generator spec");
  std::string spec_out;
  spec_default->add_option("--out", spec_out, "Output file (stdout when omitted)");

  // split
  auto* split = app.add_subcommand("split", "Chronological train/val/test split");
  std::string split_in, split_out, ratio = "4:1:1";
  bool keep_empty = false;
  split->add_option("--in", split_in, "Input JSONL")->required()->check(CLI::ExistingFile);
  split->add_option("--ratio", ratio, "Partition ratio a:b:c")->capture_default_str();
  split->add_option("--out-dir", split_out, "Output directory")->required();
  split->add_flag("--keep-empty-comments", keep_empty, "Keep comments with empty text");

  // config-default
  auto* cfg_default = app.add_subcommand("config-default", "Print the full default config");
  std::string cfg_out;
  cfg_default->add_option("--out", cfg_out, "Output file (stdout when omitted)");

  // train-teacher
  auto* tt = app.add_subcommand("train-teacher", "Train the comment-aware teacher");
  Common tt_common;
  std::string tt_out, tt_history;
  tt_common.add(tt);
  tt->add_option("--out", tt_out, "Output checkpoint")->required();
  tt->add_option("--history", tt_history, "History CSV (default <out>.history.csv)");

  // train-student
  auto* ts = app.add_subcommand("train-student", "Distill a content-only student from a teacher");
  Common ts_common;
  std::string ts_teacher, ts_out, ts_history, ts_mode, ts_ablation;
  std::optional<double> ts_alpha;
  ts_common.add(ts);
  ts->add_option("--teacher", ts_teacher, "Teacher checkpoint")->required()->check(CLI::ExistingFile);
  ts->add_option("--alpha", ts_alpha, "Distillation weight (default 0.4)");
  ts->add_option("--mode", ts_mode, "adaptive, feature or response");
  ts->add_option("--ablation", ts_ablation, "none, wo_semantic, wo_emotional or wo_overall");
  ts->add_option("--out", ts_out, "Output checkpoint")->required();
  ts->add_option("--history", ts_history, "History CSV (default <out>.history.csv)");

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a JSONL file");
  std::string ev_model, ev_data, ev_out, ev_teacher, ev_format = "json";
  double ev_prop = 1.0, ev_threshold = 0.5;
  ev->add_option("--model", ev_model, "Teacher or student checkpoint")->required()->check(CLI::ExistingFile);
  ev->add_option("--data", ev_data, "JSONL records")->required()->check(CLI::ExistingFile);
  ev->add_option("--comments-prop", ev_prop, "Proportion of earliest comments kept")->capture_default_str();
  ev->add_option("--threshold", ev_threshold, "Decision threshold")->capture_default_str();
  ev->add_option("--teacher", ev_teacher, "Verify that a student was distilled from this teacher")
      ->check(CLI::ExistingFile);
  ev->add_option("--format", ev_format, "json or text")->capture_default_str();
  ev->add_option("--out", ev_out, "Output file (stdout when omitted)");

  // sweep-comments
  auto* sc = app.add_subcommand("sweep-comments", "Teacher at 25-100% test comments, student at 0%");
  std::string sc_teacher, sc_student, sc_data, sc_out, sc_format = "csv";
  sc->add_option("--teacher", sc_teacher, "Teacher checkpoint")->required()->check(CLI::ExistingFile);
  sc->add_option("--student", sc_student, "Student checkpoint")->check(CLI::ExistingFile);
  sc->add_option("--data", sc_data, "Test JSONL")->required()->check(CLI::ExistingFile);
  sc->add_option("--format", sc_format, "csv, text, json or long (every metric, CSV)")->capture_default_str();
  sc->add_option("--out", sc_out, "Output file (stdout when omitted)");

  // sweep-alpha / sweep-lr / ablate
  auto* sa = app.add_subcommand("sweep-alpha", "Student macro F1 over the alpha grid");
  Common sa_common;
  std::string sa_out, sa_format = "csv";
  sa_common.add(sa);
  sa->add_option("--format", sa_format, "csv, text or json")->capture_default_str();
  sa->add_option("--out", sa_out, "Output file (stdout when omitted)");

  auto* sl = app.add_subcommand("sweep-lr", "Teacher and student over the learning-rate grid");
  Common sl_common;
  std::string sl_out, sl_format = "csv";
  sl_common.add(sl);
  sl->add_option("--format", sl_format, "csv, text or json")->capture_default_str();
  sl->add_option("--out", sl_out, "Output file (stdout when omitted)");

  auto* ab = app.add_subcommand("ablate", "Full student against the three knowledge ablations");
  Common ab_common;
  std::string ab_out, ab_seeds = "1,2,3,4,5", ab_format = "csv";
  ab_common.add(ab);
  ab->add_option("--seeds", ab_seeds, "Comma separated seeds")->capture_default_str();
  ab->add_option("--format", ab_format, "csv, text or json")->capture_default_str();
  ab->add_option("--out", ab_out, "Output file (stdout when omitted)");

  // grad-check
  auto* gc = app.add_subcommand("grad-check", "Finite-difference check of the teacher and student losses");
  Common gc_common;
  double gc_alpha = 0.4;
  gc_common.add(gc, false);
  gc->add_option("--alpha", gc_alpha, "Distillation weight")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::kUsage);
  }

  auto fmt_table = [](const evalkit::Table& t, const std::string& format) {
    if (format == "csv") return t.to_csv();
    if (format == "text") return t.to_text();
    if (format == "json") return t.to_json();
    throw UsageError("unknown --format '" + format + "'");
  };
  auto progress = [&](const std::string& tag) -> trainer::EpochCallback {
    if (quiet) return {};
    return [tag](const trainer::EpochStats& s) { log_epoch(tag, s); };
  };

  if (*gen) {
    const auto spec = spec_path.empty() ? corpus::SyntheticSpec{} : synthetic_spec_from_json(read_text(spec_path));
    corpus::save_corpus(gen_out, corpus::generate_synthetic_corpus(spec, gen_seed));
  } else if (*spec_default) {
    emit(spec_out, synthetic_spec_to_json(corpus::SyntheticSpec{}));
  } else if (*split) {
    const auto records = corpus::load_corpus(split_in, corpus::CorpusConfig{keep_empty});
    const auto s = corpus::chronological_split(records, parse_ratio(ratio));
    corpus::save_split(split_out, s);
    std::cerr << "train " << s.train.size() << " val " << s.val.size() << " test " << s.test.size() << '\n';
  } else if (*cfg_default) {
    emit(cfg_out, ExperimentConfig{}.to_json());
  } else if (*tt) {
    const auto c = tt_common.load();
    auto run = trainer::train_teacher(load_split_of(c), c, progress("teacher"));
    run.bundle.save(tt_out);
    run.history.save(history_path(tt_out, tt_history));
  } else if (*ts) {
    auto c = ts_common.load();
    if (ts_alpha) c.student.alpha = *ts_alpha;
    if (!ts_mode.empty()) c.student.model.mode = student::parse_distill_mode(ts_mode);
    if (!ts_ablation.empty()) c.student.model.ablation = student::parse_ablation(ts_ablation);
    c.validate();
    auto run = trainer::train_student(load_split_of(c), fs::path(ts_teacher), c, progress("student"));
    run.bundle.save(ts_out);
    run.history.save(history_path(ts_out, ts_history));
  } else if (*ev) {
    const auto records = corpus::load_corpus(ev_data);
    if (!(ev_prop >= 0.0 && ev_prop <= 1.0)) throw UsageError("--comments-prop must lie in [0, 1]");
    const auto ckpt = nn::load_checkpoint(ev_model);
    metrics::EvalReport report;
    if (checkpoint_kind(ckpt) == kKindTeacher) {
      auto t = TeacherBundle::from_checkpoint(ckpt);
      report = evalkit::evaluate(t, corpus::sample_comments(records, ev_prop), ev_threshold);
    } else {
      auto s = StudentBundle::load(ev_model, ev_teacher.empty() ? std::nullopt
                                                                : std::optional<fs::path>(ev_teacher));
      report = evalkit::evaluate(s, records, ev_threshold);
    }
    if (ev_format == "json") {
      emit(ev_out, report.to_json());
    } else if (ev_format == "text") {
      evalkit::Table t{{"metric", "value"}, {}};
      t.rows = {{"n", std::to_string(report.n)},
                {"macF1", evalkit::format_number(report.macro_f1)},
                {"acc", evalkit::format_number(report.acc)},
                {"f1_real", evalkit::format_number(report.f1_real)},
                {"f1_fake", evalkit::format_number(report.f1_fake)},
                {"auc", report.auc ? evalkit::format_number(*report.auc) : "undefined"},
                {"spauc", report.spauc ? evalkit::format_number(*report.spauc) : "undefined"}};
      emit(ev_out, t.to_text());
    } else {
      throw UsageError("unknown --format '" + ev_format + "'");
    }
  } else if (*sc) {
    auto teacher = TeacherBundle::load(sc_teacher);
    std::optional<StudentBundle> student;
    if (!sc_student.empty()) student = StudentBundle::load(sc_student, fs::path(sc_teacher));
    const auto sweep = evalkit::comment_proportion_sweep(teacher, student ? &*student : nullptr,
                                                         corpus::load_corpus(sc_data));
    emit(sc_out, sc_format == "long" ? sweep.long_form().to_csv() : fmt_table(sweep.matrix(), sc_format));
  } else if (*sa) {
    const auto c = sa_common.load();
    emit(sa_out, fmt_table(evalkit::alpha_sweep(load_split_of(c), c).table(), sa_format));
  } else if (*sl) {
    const auto c = sl_common.load();
    emit(sl_out, fmt_table(evalkit::lr_sweep(load_split_of(c), c).table(), sl_format));
  } else if (*ab) {
    const auto c = ab_common.load();
    emit(ab_out, fmt_table(evalkit::ablation_sweep(load_split_of(c), c, parse_seeds(ab_seeds)).table(), ab_format));
  } else if (*gc) {
    const auto c = gc_common.load();
    const auto records = c.split_dir.empty()
                             ? corpus::generate_synthetic_corpus(corpus::SyntheticSpec{}, c.seed)
                             : load_split_of(c).train;
    diagnostics::GradCheckOptions o;
    o.alpha = gc_alpha;
    o.seed = c.seed;
    o.student = c.student.model;
    const auto suite = diagnostics::run_grad_checks(records, o);
    std::cout << "teacher loss\n" << suite.teacher.to_string() << "student total loss\n" << suite.student.to_string();
    if (!suite.passed()) throw NumericError("gradient check failed");
    std::cout << "gradient check passed\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kData);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kData);
  }
}
