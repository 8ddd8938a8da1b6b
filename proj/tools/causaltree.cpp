// Command-line front end: simulate, weights, learn, kl, count, roc.
//
// Exit codes: 0 success, 2 usage error, 3 data/validation error, 4 numerical error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>

#include "causaltree/error.hpp"
#include "causaltree/hypothesis.hpp"
#include "causaltree/info.hpp"
#include "causaltree/io.hpp"
#include "causaltree/model.hpp"
#include "causaltree/trees.hpp"

namespace ct = causaltree;

namespace {

constexpr int kUsageError = 2;
constexpr int kDataError = 3;
constexpr int kNumericalError = 4;

struct Options {
  std::string model, model0, model1, out, weights, tree, dot, kind = "di", mode = "causal";
  std::size_t count = 0;
  std::size_t trials = ct::hypothesis::kDefaultTrials;
  std::size_t m = 0, n = 0;
  std::uint64_t seed = 0;
};

int run_simulate(const Options& o) {
  const auto model = ct::io::read_model(o.model);
  const auto samples = ct::model::sample(model, o.seed, o.count);
  std::ostringstream os;
  os << "# " << ct::io::manifest("simulate", o.seed, {{"model", o.model}}) << '\n';
  ct::io::write_samples_csv(os, model.layout(), samples);
  ct::io::atomic_write(o.out, os.str());
  return 0;
}

int run_weights(const Options& o) {
  const auto model = ct::io::read_model(o.model);
  const auto k = ct::model::build_covariance(model);
  const auto w = ct::info::build_weights(k, ct::info::parse_kind(o.kind));
  std::ostringstream os;
  os << "# " << ct::io::manifest("weights", o.seed, {{"model", o.model}}) << '\n';
  ct::io::write_weights_csv(os, w);
  ct::io::atomic_write(o.out, os.str());
  return 0;
}

int run_learn(const Options& o) {
  const auto w = ct::io::read_weights(o.weights);
  const ct::ProcessTree tree = o.mode == "causal" ? ct::trees::best_causal_tree(w)
                                                  : ct::trees::kruskal_max_tree(w);
  const std::string manifest = ct::io::manifest("learn", o.seed, {{"weights", o.weights}});
  auto j = ct::io::tree_to_json(tree, w.labels());
  j["manifest"] = manifest;
  ct::io::atomic_write(o.out, j.dump(2) + "\n");
  if (!o.dot.empty()) {
    std::ostringstream os;
    os << "// " << manifest << '\n';
    ct::io::write_dot(os, tree, w.labels());
    ct::io::atomic_write(o.dot, os.str());
  }
  std::cout << "score_nats=" << ct::io::format_double(tree.score()) << '\n';
  return 0;
}

int run_kl(const Options& o) {
  const auto model = ct::io::read_model(o.model);
  const auto tree = ct::io::read_tree(o.tree);
  const auto k = ct::model::build_covariance(model);
  const auto approx = ct::info::tree_to_gaussian(k, tree);
  std::cout << "kl_nats=" << ct::io::format_double(ct::info::gaussian_kl(k, approx)) << '\n';
  return 0;
}

int run_count(const Options& o) {
  using ct::trees::DependencyKind;
  const auto full = ct::trees::count_dependencies(o.m, o.n, DependencyKind::kFull);
  const auto causal = ct::trees::count_dependencies(o.m, o.n, DependencyKind::kCausal);
  const auto chowliu = ct::trees::count_dependencies(o.m, o.n, DependencyKind::kChowLiuVar);
  // Cross edges restricted to the parent's strict past: n(n-1)/2 per conditioned process.
  const std::uint64_t strict = static_cast<std::uint64_t>(o.m) * o.n * (o.n - 1) / 2 +
                               static_cast<std::uint64_t>(o.m - 1) * o.n * (o.n - 1) / 2;
  std::cout << "full=" << full << '\n'
            << "causal=" << causal << '\n'
            << "chowliu=" << chowliu << '\n'
            << "causal_strict_past=" << strict << '\n'
            << "# note: causal links each conditioned variable to the parent's current and past\n"
            << "# variables, (m-1)n(n+1)/2 cross edges; causal_strict_past drops the current one,\n"
            << "# which is the variant that yields 495 (not 545) for m=6, n=10.\n";
  return 0;
}

int run_roc(const Options& o) {
  const auto m0 = ct::io::read_model(o.model0);
  const auto m1 = ct::io::read_model(o.model1);
  const auto result = ct::hypothesis::run_experiment(m0, m1, o.trials, o.seed);
  std::ostringstream os;
  os << "# " << ct::io::manifest("roc", o.seed, {{"model0", o.model0}, {"model1", o.model1}})
     << " trials=" << o.trials << '\n';
  ct::io::write_roc_csv(os, {result.full, result.causal, result.chowliu});
  ct::io::atomic_write(o.out, os.str());
  for (const auto* c : {&result.full, &result.causal, &result.chowliu})
    std::cout << "auc_" << c->scorer << '=' << ct::io::format_double(c->auc) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal dependence tree approximations of Gaussian process networks"};
  app.set_version_flag("--version", ct::io::kToolVersion);
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Draw samples from a model, write CSV");
  simulate->add_option("--model", o.model, "Model JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", o.out, "Samples CSV")->required();
  simulate->add_option("--count", o.count, "Number of draws")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "Random seed");

  auto* weights = app.add_subcommand("weights", "Pairwise information weights, write CSV");
  weights->add_option("--model", o.model, "Model JSON")->required()->check(CLI::ExistingFile);
  weights->add_option("--kind", o.kind, "di | mi | mivar")
      ->check(CLI::IsMember({"di", "mi", "mivar"}, CLI::ignore_case));
  weights->add_option("--out", o.out, "Weights CSV")->required();

  auto* learn = app.add_subcommand("learn", "Learn the optimal tree from a weights CSV");
  learn->add_option("--weights", o.weights, "Weights CSV")->required()->check(CLI::ExistingFile);
  learn->add_option("--mode", o.mode, "causal | chowliu")
      ->check(CLI::IsMember({"causal", "chowliu"}));
  learn->add_option("--out", o.out, "Tree JSON")->required();
  learn->add_option("--dot", o.dot, "Optional Graphviz output");

  auto* kl = app.add_subcommand("kl", "KL divergence from a model to its tree approximation");
  kl->add_option("--model", o.model, "Model JSON")->required()->check(CLI::ExistingFile);
  kl->add_option("--tree", o.tree, "Tree JSON")->required()->check(CLI::ExistingFile);

  auto* count = app.add_subcommand("count", "Variable dependency counts");
  count->add_option("--m", o.m, "Number of processes")->required()->check(CLI::PositiveNumber);
  count->add_option("--n", o.n, "Timesteps per process")->required()->check(CLI::PositiveNumber);

  auto* roc = app.add_subcommand("roc", "Hypothesis-testing ROC curves, write CSV");
  roc->add_option("--model0", o.model0, "Model JSON for H0")->required()->check(CLI::ExistingFile);
  roc->add_option("--model1", o.model1, "Model JSON for H1")->required()->check(CLI::ExistingFile);
  roc->add_option("--trials", o.trials, "Draws per hypothesis")->check(CLI::PositiveNumber);
  roc->add_option("--seed", o.seed, "Random seed");
  roc->add_option("--out", o.out, "ROC CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (simulate->parsed()) return run_simulate(o);
    if (weights->parsed()) return run_weights(o);
    if (learn->parsed()) return run_learn(o);
    if (kl->parsed()) return run_kl(o);
    if (count->parsed()) return run_count(o);
    if (roc->parsed()) return run_roc(o);
  } catch (const ct::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const ct::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
