#pragma once

// File formats:
//   model JSON    {"m", "n", "coeffs": [{"to": [i,t], "from": [j,s], "value"}], "noise_vars": [..] | scalar}
//   samples CSV   header p<i>_t<t>, one row per draw, time-major columns
//   weights CSV   square matrix with label row/column, footer "# units=nats; kind=<MI|DI|MIvar>"
//   tree JSON     {"directed", "root", "edges": [[parent, child]], "score_nats", "labels"}
//   DOT           digraph (directed) or graph (undirected)
//   ROC CSV       scorer,threshold,fpr,tpr with trailing "# auc_<scorer>=<value>" lines
// Comment lines start with '#'. Writers prepend an optional manifest comment.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "causaltree/hypothesis.hpp"
#include "causaltree/info.hpp"
#include "causaltree/model.hpp"
#include "causaltree/process_tree.hpp"

namespace causaltree::io {

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest representation that round-trips a double.
std::string format_double(double v);

model::GenerativeModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const model::GenerativeModel& model);
model::GenerativeModel read_model(const std::filesystem::path& path);

void write_samples_csv(std::ostream& os, const model::ProcessLayout& layout,
                       const linalg::Matrix& samples);

void write_weights_csv(std::ostream& os, const info::WeightMatrix& w);
info::WeightMatrix read_weights_csv(std::istream& is);
info::WeightMatrix read_weights(const std::filesystem::path& path);

nlohmann::json tree_to_json(const ProcessTree& tree, const std::vector<std::string>& labels);
ProcessTree tree_from_json(const nlohmann::json& j);
ProcessTree read_tree(const std::filesystem::path& path);

void write_dot(std::ostream& os, const ProcessTree& tree, const std::vector<std::string>& labels);

void write_roc_csv(std::ostream& os, const std::vector<hypothesis::RocCurve>& curves);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

struct ManifestInput {
  std::string name;
  std::filesystem::path path;
};

/// "causaltree <version> subcommand=<s> seed=<n> <name>=<file>@<digest> ..."
std::string manifest(const std::string& subcommand, std::uint64_t seed,
                     const std::vector<ManifestInput>& inputs);

/// Writes to a temporary sibling and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

}  // namespace causaltree::io
