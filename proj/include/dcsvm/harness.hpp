#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dcsvm/dataset.hpp"
#include "dcsvm/model_io.hpp"

namespace dcsvm {

enum class Task { train, predict, eval, tune, bench };

struct RunConfig {
  Task task = Task::train;
  std::string train_file;
  std::string test_file;
  std::string model_path;
  std::string grid_file;
  std::string out_path;
  ModelConfig model;      // dimension is filled in from the training data
  std::uint64_t seed = 1;
  int epochs = 1;
  bool scale = true;      // min-max scaling fitted on the training set

  /// Throws std::invalid_argument on K < 1, n < 1, C <= 0, rate outside
  /// (0,1), epochs < 1 or a bad kernel.
  void validate() const;
};

/// Sets one hyperparameter by its flag name (with or without leading
/// dashes; '_' and '-' are interchangeable). Throws std::invalid_argument.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Grid file: one candidate per line, comma-separated key=value pairs.
/// Blank lines and '#' comments are ignored. Throws on an empty grid.
using GridCandidate = std::vector<std::pair<std::string, std::string>>;
std::vector<GridCandidate> parse_grid(std::string_view text);
std::string describe(const GridCandidate& candidate);

struct TrainStats {
  std::size_t samples = 0;           // fit_sample calls inside the timed window
  double seconds = 0.0;
  double samples_per_second = 0.0;
  std::uint64_t file_reads = 0;      // dataset reads inside the timed window
};

/// Streams the (shuffled, optionally scaled) training set through the model
/// for cfg.epochs passes; epoch e uses shuffle seed cfg.seed + e. Two labels
/// give a binary DCModel with the first-appearing label as +1, more give an
/// OvRModel. The first `warmup_fraction` of the stream is excluded from the
/// timing.
ModelBundle train_model(const Dataset& train, const RunConfig& cfg, TrainStats* stats = nullptr,
                        double warmup_fraction = 0.0);

struct EvalReport {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
  double train_seconds = 0.0;
  double train_samples_per_second = 0.0;
  double eval_seconds = 0.0;
  double eval_samples_per_second = 0.0;
  std::size_t clusters = 0;
  std::size_t total_support_vectors = 0;
  std::size_t max_kernel_evals = 0;  // per query
  std::size_t unknown_labels = 0;    // test samples whose label the model lacks
  std::uint64_t timed_file_reads = 0;
  std::vector<std::pair<std::string, std::string>> rows() const;
};

/// Predictions in dataset label strings (after the bundle's scaling).
std::vector<std::string> predict_labels(const ModelBundle& bundle, const Dataset& data,
                                        std::vector<std::size_t>* kernel_evals = nullptr);

/// Accuracy and evaluation throughput. Queries run in parallel; the first
/// `warmup_fraction` of them is excluded from the timing.
EvalReport evaluate(const ModelBundle& bundle, const Dataset& test, double warmup_fraction = 0.0);

struct TuneRow {
  GridCandidate candidate;
  RunConfig config;
  double validation_accuracy = 0.0;
  double train_samples_per_second = 0.0;
};

struct TuneResult {
  std::vector<TuneRow> rows;
  std::size_t best = 0;
  std::vector<ModelBundle> models;  // filled only when requested
  const RunConfig& best_config() const { return rows[best].config; }
};

/// Holds out a validation part of round(validation_fraction*N) samples
/// (split seeded by base.seed), trains every candidate on the rest, and
/// picks the highest validation accuracy (earliest candidate on ties).
TuneResult tune(const Dataset& train, const RunConfig& base, const std::vector<GridCandidate>& grid,
                double validation_fraction = 0.2, bool keep_models = false);

struct BenchResult {
  std::vector<EvalReport> repetitions;
  double train_sps_median = 0.0;
  double eval_sps_median = 0.0;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  std::size_t max_kernel_evals = 0;
  std::size_t kernel_eval_bound = 0;  // n for binary, classes * n for one-vs-rest
  std::vector<std::pair<std::string, std::string>> rows() const;
};

/// Trains and evaluates `repetitions` times (seed, seed+1, ...), timing
/// with a warm-up of `warmup_fraction` of each stream.
BenchResult bench(const Dataset& train, const Dataset& test, const RunConfig& cfg,
                  int repetitions = 3, double warmup_fraction = 0.1);

double median(std::vector<double> values);

/// Aligned two-column table.
void print_table(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows);
/// "key<TAB>value" lines.
void write_tsv(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows);

// File-level entry points used by the CLI. Each returns the rows it reported.
std::vector<std::pair<std::string, std::string>> run_train(const RunConfig& cfg, std::ostream& log);
std::vector<std::pair<std::string, std::string>> run_eval(const RunConfig& cfg, std::ostream& log);
std::vector<std::pair<std::string, std::string>> run_predict(const RunConfig& cfg, std::ostream& log);
std::vector<std::pair<std::string, std::string>> run_tune(const RunConfig& cfg, std::ostream& log);
std::vector<std::pair<std::string, std::string>> run_bench(const RunConfig& cfg, std::ostream& log);

}  // namespace dcsvm
