#include "dcsvm/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dcsvm {

namespace {

using Clock = std::chrono::steady_clock;
using Rows = std::vector<std::pair<std::string, std::string>>;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_value(std::string_view key, std::string_view text) {
  T v{};
  auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream ss;
  ss << std::setprecision(precision) << v;
  return ss.str();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void emit(const RunConfig& cfg, std::ostream& log, const Rows& rows) {
  print_table(log, rows);
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
    write_tsv(out, rows);
  }
}

Rows config_rows(const RunConfig& c) {
  return {
      {"kernel", std::string(to_string(c.model.kernel.family))},
      {"gamma", format_double(c.model.kernel.gamma)},
      {"degree", std::to_string(c.model.kernel.degree)},
      {"coef0", format_double(c.model.kernel.coef0)},
      {"c", format_double(c.model.c)},
      {"clusters", std::to_string(c.model.max_clusters)},
      {"budget", std::to_string(c.model.budget)},
      {"lvq-rate", format_double(c.model.lvq_rate)},
      {"seed", std::to_string(c.seed)},
      {"epochs", std::to_string(c.epochs)},
      {"scale", c.scale ? "minmax" : "none"},
  };
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
}

void apply_setting(RunConfig& cfg, std::string_view raw_key, std::string_view value) {
  while (!raw_key.empty() && raw_key.front() == '-') raw_key.remove_prefix(1);
  std::string key(raw_key);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "kernel") {
    cfg.model.kernel.family = parse_kernel_family(value);
  } else if (key == "gamma") {
    cfg.model.kernel.gamma = parse_value<double>(key, value);
  } else if (key == "degree") {
    cfg.model.kernel.degree = parse_value<int>(key, value);
  } else if (key == "coef0") {
    cfg.model.kernel.coef0 = parse_value<double>(key, value);
  } else if (key == "c") {
    cfg.model.c = parse_value<double>(key, value);
  } else if (key == "clusters") {
    cfg.model.max_clusters = parse_value<std::size_t>(key, value);
  } else if (key == "budget") {
    cfg.model.budget = parse_value<std::size_t>(key, value);
  } else if (key == "lvq-rate") {
    cfg.model.lvq_rate = parse_value<double>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "epochs") {
    cfg.epochs = parse_value<int>(key, value);
  } else if (key == "scale") {
    if (value == "minmax") cfg.scale = true;
    else if (value == "none") cfg.scale = false;
    else throw std::invalid_argument("scale must be none or minmax");
  } else {
    throw std::invalid_argument("unknown setting '" + std::string(raw_key) + "'");
  }
}

std::vector<GridCandidate> parse_grid(std::string_view text) {
  std::vector<GridCandidate> grid;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    GridCandidate cand;
    std::string_view rest(line);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ParseError(line_no, "grid entry '" + item + "' is not key=value");
      cand.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
    grid.push_back(std::move(cand));
  }
  if (grid.empty()) throw std::invalid_argument("hyperparameter grid is empty");
  return grid;
}

std::string describe(const GridCandidate& candidate) {
  std::string out;
  for (const auto& [k, v] : candidate) {
    if (!out.empty()) out += ',';
    out += k + '=' + v;
  }
  return out.empty() ? "(base)" : out;
}

// ---------------------------------------------------------------------------

ModelBundle train_model(const Dataset& train, const RunConfig& cfg, TrainStats* stats,
                        double warmup_fraction) {
  cfg.validate();
  if (train.label_set.size() < 2) throw std::invalid_argument("training data needs at least two labels");

  std::optional<ScalingRecord> scaling;
  const Dataset* data = &train;
  Dataset scaled;
  if (cfg.scale) {
    auto [ds, rec] = scale_features(train);
    scaled = std::move(ds);
    scaling = std::move(rec);
    data = &scaled;
  }

  ModelConfig mc = cfg.model;
  mc.dimension = data->dimension;
  mc.seed = cfg.seed;
  const bool binary = data->label_set.size() == 2;
  ModelBundle bundle{DCModel(mc), data->label_set, std::move(scaling)};
  if (!binary) bundle.model = OvRModel(mc, data->label_set);

  const std::size_t n = data->size();
  const std::size_t total = n * static_cast<std::size_t>(cfg.epochs);
  const auto warmup = static_cast<std::size_t>(warmup_fraction * static_cast<double>(total));
  std::size_t processed = 0;
  Clock::time_point t0 = Clock::now();
  std::uint64_t reads0 = file_read_count();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = permutation(n, cfg.seed + static_cast<std::uint64_t>(epoch));
    for (std::size_t i : order) {
      if (processed == warmup) {
        t0 = Clock::now();
        reads0 = file_read_count();
      }
      const Sample& s = data->samples[i];
      if (binary) {
        std::get<DCModel>(bundle.model).fit_sample(s.x, s.label == 0 ? 1 : -1);
      } else {
        std::get<OvRModel>(bundle.model).fit_sample(s.x, s.label);
      }
      ++processed;
    }
  }
  if (stats != nullptr) {
    stats->seconds = seconds_since(t0);
    stats->samples = total - std::min(warmup, total);
    stats->samples_per_second = stats->seconds > 0.0 ? stats->samples / stats->seconds : 0.0;
    stats->file_reads = file_read_count() - reads0;
  }
  return bundle;
}

namespace {

// Model label index for every sample, or SIZE_MAX where unknown.
std::vector<std::size_t> map_labels(const ModelBundle& bundle, const Dataset& data) {
  std::vector<std::size_t> by_class(data.label_set.size(), SIZE_MAX);
  for (std::size_t c = 0; c < data.label_set.size(); ++c) {
    auto it = std::find(bundle.labels.begin(), bundle.labels.end(), data.label_set[c]);
    if (it != bundle.labels.end()) by_class[c] = static_cast<std::size_t>(it - bundle.labels.begin());
  }
  std::vector<std::size_t> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = by_class[data.samples[i].label];
  return out;
}

std::vector<VectorPtr> prepared_inputs(const ModelBundle& bundle, const Dataset& data) {
  std::vector<VectorPtr> xs(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    xs[i] = bundle.scaling ? std::make_shared<const SparseVector>(bundle.scaling->apply(*data.samples[i].x))
                           : data.samples[i].x;
  }
  return xs;
}

// Parallel over queries; each slot is written by one iteration only.
void predict_range(const ModelBundle& bundle, const std::vector<VectorPtr>& xs, std::size_t begin,
                   std::size_t end, std::vector<std::size_t>& pred, std::vector<std::size_t>& evals) {
  const auto b = static_cast<std::ptrdiff_t>(begin);
  const auto e = static_cast<std::ptrdiff_t>(end);
  if (const auto* m = std::get_if<DCModel>(&bundle.model)) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = b; i < e; ++i) {
      const Prediction p = m->predict_raw(*xs[i]);
      pred[i] = p.score >= 0.0 ? 0 : 1;
      evals[i] = p.kernel_evals;
    }
  } else {
    const auto& o = std::get<OvRModel>(bundle.model);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = b; i < e; ++i) {
      const OvRPrediction p = o.predict_raw(*xs[i]);
      pred[i] = p.class_index;
      evals[i] = p.kernel_evals;
    }
  }
}

std::size_t model_dimension(const ModelBundle& bundle) {
  return std::visit([](const auto& m) { return m.config().dimension; }, bundle.model);
}

}  // namespace

std::vector<std::string> predict_labels(const ModelBundle& bundle, const Dataset& data,
                                        std::vector<std::size_t>* kernel_evals) {
  const auto xs = prepared_inputs(bundle, data);
  std::vector<std::size_t> pred(xs.size()), evals(xs.size());
  predict_range(bundle, xs, 0, xs.size(), pred, evals);
  std::vector<std::string> out;
  out.reserve(pred.size());
  for (std::size_t p : pred) out.push_back(bundle.labels[p]);
  if (kernel_evals != nullptr) *kernel_evals = std::move(evals);
  return out;
}

EvalReport evaluate(const ModelBundle& bundle, const Dataset& test, double warmup_fraction) {
  const auto truth = map_labels(bundle, test);
  const auto xs = prepared_inputs(bundle, test);
  const std::size_t n = xs.size();
  std::vector<std::size_t> pred(n), evals(n);

  const auto warmup = static_cast<std::size_t>(warmup_fraction * static_cast<double>(n));
  predict_range(bundle, xs, 0, warmup, pred, evals);
  const std::uint64_t reads0 = file_read_count();
  const auto t0 = Clock::now();
  predict_range(bundle, xs, warmup, n, pred, evals);
  const double secs = seconds_since(t0);

  EvalReport r;
  r.timed_file_reads = file_read_count() - reads0;
  r.total = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (truth[i] == SIZE_MAX) ++r.unknown_labels;
    else if (truth[i] == pred[i]) ++r.correct;
    r.max_kernel_evals = std::max(r.max_kernel_evals, evals[i]);
  }
  r.accuracy = n > 0 ? static_cast<double>(r.correct) / static_cast<double>(n) : 0.0;
  r.eval_seconds = secs;
  r.eval_samples_per_second = secs > 0.0 ? static_cast<double>(n - warmup) / secs : 0.0;
  std::visit(
      [&](const auto& m) {
        r.clusters = m.cluster_count();
        r.total_support_vectors = m.total_support_vectors();
      },
      bundle.model);
  return r;
}

Rows EvalReport::rows() const {
  return {
      {"accuracy", fmt(accuracy, 8)},
      {"correct", std::to_string(correct)},
      {"total", std::to_string(total)},
      {"train_seconds", fmt(train_seconds)},
      {"train_samples_per_second", fmt(train_samples_per_second)},
      {"eval_seconds", fmt(eval_seconds)},
      {"eval_samples_per_second", fmt(eval_samples_per_second)},
      {"clusters", std::to_string(clusters)},
      {"total_support_vectors", std::to_string(total_support_vectors)},
      {"max_kernel_evals_per_query", std::to_string(max_kernel_evals)},
      {"unknown_labels", std::to_string(unknown_labels)},
      {"timed_file_reads", std::to_string(timed_file_reads)},
  };
}

TuneResult tune(const Dataset& train, const RunConfig& base, const std::vector<GridCandidate>& grid,
                double validation_fraction, bool keep_models) {
  if (grid.empty()) throw std::invalid_argument("hyperparameter grid is empty");
  auto [validation, fit_part] = split(train, validation_fraction, base.seed);

  TuneResult result;
  result.rows.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    RunConfig cfg = base;
    for (const auto& [k, v] : grid[i]) apply_setting(cfg, k, v);
    cfg.validate();
    result.rows[i] = {grid[i], cfg, 0.0, 0.0};
  }
  if (keep_models) result.models.resize(grid.size(), ModelBundle{DCModel(base.model), {}, {}});

  // Candidates share nothing; each writes only its own row.
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      TrainStats stats;
      ModelBundle bundle = train_model(fit_part, result.rows[i].config, &stats);
      result.rows[i].validation_accuracy = evaluate(bundle, validation).accuracy;
      result.rows[i].train_samples_per_second = stats.samples_per_second;
      if (keep_models) result.models[i] = std::move(bundle);
    } catch (...) {
#pragma omp critical(dcsvm_tune_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].validation_accuracy > result.rows[result.best].validation_accuracy) result.best = i;
  }
  return result;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

BenchResult bench(const Dataset& train, const Dataset& test, const RunConfig& cfg, int repetitions,
                  double warmup_fraction) {
  BenchResult out;
  std::vector<double> train_sps, eval_sps, acc;
  for (int rep = 0; rep < repetitions; ++rep) {
    RunConfig run = cfg;
    run.seed = cfg.seed + static_cast<std::uint64_t>(rep);
    TrainStats stats;
    ModelBundle bundle = train_model(train, run, &stats, warmup_fraction);
    EvalReport r = evaluate(bundle, test, warmup_fraction);
    r.train_seconds = stats.seconds;
    r.train_samples_per_second = stats.samples_per_second;
    r.timed_file_reads += stats.file_reads;
    train_sps.push_back(r.train_samples_per_second);
    eval_sps.push_back(r.eval_samples_per_second);
    acc.push_back(r.accuracy);
    out.max_kernel_evals = std::max(out.max_kernel_evals, r.max_kernel_evals);
    const std::size_t classes = std::holds_alternative<DCModel>(bundle.model) ? 1 : bundle.labels.size();
    out.kernel_eval_bound = classes * run.model.budget;
    out.repetitions.push_back(std::move(r));
  }
  out.train_sps_median = median(train_sps);
  out.eval_sps_median = median(eval_sps);
  double sum = 0.0;
  for (double a : acc) sum += a;
  out.accuracy_mean = acc.empty() ? 0.0 : sum / static_cast<double>(acc.size());
  double var = 0.0;
  for (double a : acc) var += (a - out.accuracy_mean) * (a - out.accuracy_mean);
  out.accuracy_std = acc.size() > 1 ? std::sqrt(var / static_cast<double>(acc.size() - 1)) : 0.0;
  return out;
}

Rows BenchResult::rows() const {
  Rows rows{
      {"repetitions", std::to_string(repetitions.size())},
      {"accuracy_mean", fmt(accuracy_mean, 8)},
      {"accuracy_std", fmt(accuracy_std, 8)},
      {"train_samples_per_second_median", fmt(train_sps_median)},
      {"eval_samples_per_second_median", fmt(eval_sps_median)},
      {"max_kernel_evals_per_query", std::to_string(max_kernel_evals)},
      {"kernel_eval_bound", std::to_string(kernel_eval_bound)},
  };
  for (std::size_t i = 0; i < repetitions.size(); ++i) {
    const auto& r = repetitions[i];
    const std::string p = "rep" + std::to_string(i) + "_";
    rows.emplace_back(p + "accuracy", fmt(r.accuracy, 8));
    rows.emplace_back(p + "train_samples_per_second", fmt(r.train_samples_per_second));
    rows.emplace_back(p + "eval_samples_per_second", fmt(r.eval_samples_per_second));
  }
  return rows;
}

void print_table(std::ostream& out, const Rows& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
}

void write_tsv(std::ostream& out, const Rows& rows) {
  for (const auto& [k, v] : rows) out << k << '\t' << v << '\n';
}

// ---------------------------------------------------------------------------

Rows run_train(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.train_file.empty()) throw std::invalid_argument("train needs --train-file");
  const Dataset train = parse_sparse_file(cfg.train_file);
  TrainStats stats;
  const ModelBundle bundle = train_model(train, cfg, &stats);
  if (!cfg.model_path.empty()) save_model_file(bundle, cfg.model_path);

  EvalReport r;
  r.train_seconds = stats.seconds;
  r.train_samples_per_second = stats.samples_per_second;
  r.timed_file_reads = stats.file_reads;
  std::visit(
      [&](const auto& m) {
        r.clusters = m.cluster_count();
        r.total_support_vectors = m.total_support_vectors();
      },
      bundle.model);
  Rows rows = config_rows(cfg);
  rows.insert(rows.end(), {
      {"train_samples", std::to_string(stats.samples)},
      {"train_seconds", fmt(r.train_seconds)},
      {"train_samples_per_second", fmt(r.train_samples_per_second)},
      {"clusters", std::to_string(r.clusters)},
      {"total_support_vectors", std::to_string(r.total_support_vectors)},
      {"timed_file_reads", std::to_string(r.timed_file_reads)},
  });
  emit(cfg, log, rows);
  return rows;
}

Rows run_eval(const RunConfig& cfg, std::ostream& log) {
  if (cfg.model_path.empty() || cfg.test_file.empty()) throw std::invalid_argument("eval needs --model and --test-file");
  const ModelBundle bundle = load_model_file(cfg.model_path);
  const Dataset test = parse_sparse_file(cfg.test_file);
  if (test.dimension > model_dimension(bundle)) {
    log << "warning: test features beyond model dimension " << model_dimension(bundle)
        << " (data has " << test.dimension << "); they do not affect cluster routing\n";
  }
  const EvalReport r = evaluate(bundle, test);
  if (r.unknown_labels > 0) log << "warning: " << r.unknown_labels << " test samples carry labels unknown to the model\n";
  const Rows rows = r.rows();
  emit(cfg, log, rows);
  return rows;
}

Rows run_predict(const RunConfig& cfg, std::ostream& log) {
  if (cfg.model_path.empty() || cfg.test_file.empty()) throw std::invalid_argument("predict needs --model and --test-file");
  const ModelBundle bundle = load_model_file(cfg.model_path);
  const Dataset data = parse_sparse_file(cfg.test_file);
  const auto labels = predict_labels(bundle, data);
  if (cfg.out_path.empty()) {
    for (const auto& l : labels) log << l << '\n';
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
    for (const auto& l : labels) out << l << '\n';
  }
  return {{"predictions", std::to_string(labels.size())}};
}

Rows run_tune(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.train_file.empty() || cfg.grid_file.empty()) throw std::invalid_argument("tune needs --train-file and --grid");
  const auto grid = parse_grid(read_text(cfg.grid_file));
  const Dataset train = parse_sparse_file(cfg.train_file);
  const TuneResult result = tune(train, cfg, grid);

  Rows rows;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    rows.emplace_back("grid[" + std::to_string(i) + "] " + describe(result.rows[i].candidate),
                      fmt(result.rows[i].validation_accuracy, 8));
  }
  rows.emplace_back("best_index", std::to_string(result.best));
  rows.emplace_back("best_validation_accuracy", fmt(result.rows[result.best].validation_accuracy, 8));
  for (auto& kv : config_rows(result.best_config())) rows.emplace_back("best_" + kv.first, kv.second);
  emit(cfg, log, rows);
  return rows;
}

Rows run_bench(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.train_file.empty() || cfg.test_file.empty()) throw std::invalid_argument("bench needs --train-file and --test-file");
  const Dataset train = parse_sparse_file(cfg.train_file);
  const Dataset test = parse_sparse_file(cfg.test_file);
  Rows rows = config_rows(cfg);
  const auto result = bench(train, test, cfg);
  auto more = result.rows();
  rows.insert(rows.end(), more.begin(), more.end());
  emit(cfg, log, rows);
  return rows;
}

}  // namespace dcsvm
