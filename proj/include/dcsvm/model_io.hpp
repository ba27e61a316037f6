#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dcsvm/dataset.hpp"
#include "dcsvm/dc_model.hpp"
#include "dcsvm/ovr_model.hpp"

namespace dcsvm {

/// A trained model plus what is needed to serve it: the dataset labels it
/// answers with and the feature scaling applied at training time. For a
/// binary model `labels` is {positive, negative}.
struct ModelBundle {
  std::variant<DCModel, OvRModel> model;
  std::vector<std::string> labels;
  std::optional<ScalingRecord> scaling;
};

// Text format, version 1:
//
//   dcsvm-model 1 <binary|ovr> kernel=<f> gamma=<g> degree=<d> coef0=<c>
//       K=<K> n=<n> C=<C> lvq_rate=<r> seed=<s> dim=<d>        (one line)
//   labels <count> <label>...
//   scaling none | scaling minmax <dim> <lo>:<hi>...
//   clusters <count>
//   cluster <k>
//   centroid <v_0> ... <v_{dim-1}>
//   set <class> <members>
//   <+1|-1> <alpha> <idx>:<val> ...                           (1-based idx)
//   end
//
// Reals use the shortest round-trip decimal form, so save -> load -> save
// reproduces the same bytes.

void save_model(const ModelBundle& bundle, std::ostream& out);
std::string save_model_string(const ModelBundle& bundle);
void save_model_file(const ModelBundle& bundle, const std::filesystem::path& path);

/// Throws ParseError (with line number) on malformed input.
ModelBundle load_model(std::istream& in);
ModelBundle load_model_string(const std::string& text);
ModelBundle load_model_file(const std::filesystem::path& path);

}  // namespace dcsvm
