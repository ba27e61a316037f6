// dcsvm: train, predict, evaluate, tune and benchmark the divide-and-conquer
// budgeted kernel SVM on sparse text datasets.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dcsvm/harness.hpp"

namespace {

void add_common_flags(CLI::App& app, dcsvm::RunConfig& cfg, std::string& kernel, std::string& scale) {
  app.add_option("--train-file", cfg.train_file, "Training set (sparse text, .gz accepted)");
  app.add_option("--test-file", cfg.test_file, "Test set (sparse text, .gz accepted)");
  app.add_option("--model", cfg.model_path, "Model file to write (train) or read (predict/eval)");
  app.add_option("--kernel", kernel, "Kernel family")->check(CLI::IsMember({"linear", "rbf", "poly"}));
  app.add_option("--gamma", cfg.model.kernel.gamma, "RBF width / polynomial scale");
  app.add_option("--degree", cfg.model.kernel.degree, "Polynomial degree");
  app.add_option("--coef0", cfg.model.kernel.coef0, "Polynomial offset");
  app.add_option("--c", cfg.model.c, "Box constraint C");
  app.add_option("--clusters", cfg.model.max_clusters, "Number of LVQ clusters K");
  app.add_option("--budget", cfg.model.budget, "Support vectors per set n");
  app.add_option("--lvq-rate", cfg.model.lvq_rate, "LVQ centroid update rate in (0,1)");
  app.add_option("--seed", cfg.seed, "Shuffle seed");
  app.add_option("--epochs", cfg.epochs, "Passes over the training stream");
  app.add_option("--scale", scale, "Feature scaling")->check(CLI::IsMember({"none", "minmax"}));
  app.add_option("--grid", cfg.grid_file, "Hyperparameter grid file (tune)");
  app.add_option("--out", cfg.out_path, "Report (key<TAB>value) or prediction output file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online divide-and-conquer kernel SVM under a support-vector budget"};
  app.require_subcommand(1);

  dcsvm::RunConfig cfg;
  cfg.model.kernel = dcsvm::KernelSpec::rbf(1.0);
  std::string kernel = "rbf";
  std::string scale = "minmax";

  struct Entry {
    const char* name;
    const char* help;
    dcsvm::Task task;
  };
  const Entry entries[] = {
      {"train", "Stream the training set through the model and save it", dcsvm::Task::train},
      {"predict", "Write one predicted label per test sample", dcsvm::Task::predict},
      {"eval", "Accuracy and evaluation throughput of a saved model", dcsvm::Task::eval},
      {"tune", "Grid search with a held-out 20% validation split", dcsvm::Task::tune},
      {"bench", "Train/eval throughput, median of 3 runs with warm-up", dcsvm::Task::bench},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common_flags(*sub, cfg, kernel, scale);
    sub->callback([&cfg, task = e.task] { cfg.task = task; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.model.kernel.family = dcsvm::parse_kernel_family(kernel);
    cfg.scale = scale == "minmax";
    switch (cfg.task) {
      case dcsvm::Task::train: dcsvm::run_train(cfg, std::cout); break;
      case dcsvm::Task::predict: dcsvm::run_predict(cfg, std::cout); break;
      case dcsvm::Task::eval: dcsvm::run_eval(cfg, std::cout); break;
      case dcsvm::Task::tune: dcsvm::run_tune(cfg, std::cout); break;
      case dcsvm::Task::bench: dcsvm::run_bench(cfg, std::cout); break;
    }
  } catch (const std::exception& e) {
    std::cerr << "dcsvm: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
