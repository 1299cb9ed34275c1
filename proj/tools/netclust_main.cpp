// netclust: EM clustering of attributed networks.
//
//   netclust cluster --edges E --features F [--labels L] --k K --out DIR
//   netclust synth   --n N --k K --m M --seed S --out DIR
//   netclust eval    --pred P --truth T [--out FILE]
//   netclust trace-plot-data --trace CSV --out FILE
//
// Every run writes a manifest (flags, seed, input digests) into the output
// directory so results can be reproduced bitwise.

#include <array>
#include <cctype>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "netclust/checkpoint.hpp"
#include "netclust/em.hpp"
#include "netclust/evaluation.hpp"
#include "netclust/network.hpp"
#include "netclust/similarity.hpp"
#include "netclust/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing";
  std::uint64_t hash = 1469598103934665603ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
  }
  char out[32];
  std::snprintf(out, sizeof(out), "0x%016" PRIx64, hash);
  return out;
}

void write_manifest_file(const fs::path& manifest_path, const std::string& command,
                         const json& flags, const std::vector<std::string>& inputs,
                         const std::vector<std::string>& outputs) {
  json manifest;
  manifest["command"] = command;
  manifest["flags"] = flags;
  json digests = json::object();
  for (const auto& path : inputs) digests[path] = fnv1a64_file(path);
  manifest["input_digests"] = digests;
  manifest["outputs"] = outputs;
  std::ofstream out(manifest_path);
  out << manifest.dump(2) << "\n";
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& flags, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  write_manifest_file(out_dir / "manifest.json", command, flags, inputs, outputs);
}

struct ClusterArgs {
  std::string edges, features, labels, out = "netclust_out", trace;
  int k = 0;
  int max_iters = 300;
  double tol = 1e-6;
  bool absolute_tol = false;
  bool no_renormalize = false;
  bool exact_checkpoint = false;
  bool dump_similarities = false;
  std::uint64_t seed = 0;
  std::string nmi_variant = "mean";
};

int run_cluster(const ClusterArgs& args) {
  auto net = netclust::load_edge_list(args.edges);
  netclust::load_feature_table(args.features, net);
  if (!args.labels.empty()) netclust::load_labels(args.labels, net);

  int k = args.k;
  if (k <= 0 && net.has_labels) k = net.distinct_label_count();
  if (k <= 0)
    throw std::runtime_error("--k not given and no label file to infer it from");

  const auto report = netclust::validate_network(net);
  std::cout << "loaded N=" << net.n_vertices << " |E|=" << net.edge_count()
            << " M=" << net.n_features << " (" << report.note << ")\n";

  const fs::path out_dir = args.out;
  fs::create_directories(out_dir);

  netclust::EMConfig cfg;
  cfg.k_clusters = k;
  cfg.max_iters = args.max_iters;
  cfg.tol = args.tol;
  cfg.relative_tol = !args.absolute_tol;
  cfg.seed = args.seed;
  cfg.renormalize = !args.no_renormalize;
  cfg.trace_path = args.trace.empty() ? (out_dir / "trace.csv").string() : args.trace;

  const auto sims = netclust::compute_similarities(net);
  if (args.dump_similarities) {
    netclust::dump_similarity((out_dir / "z.txt").string(), net, sims.z);
    netclust::dump_similarity((out_dir / "g.txt").string(), net, sims.g);
  }
  const auto result = netclust::fit(net, sims, cfg);

  netclust::write_labels_file((out_dir / "labels.tsv").string(), result.labels);
  netclust::write_checkpoint((out_dir / "checkpoint.json").string(), result.state,
                             net, args.exact_checkpoint);

  double nmi_score = -1.0, acc_score = -1.0;
  std::vector<std::string> outputs{(out_dir / "labels.tsv").string(),
                                   cfg.trace_path,
                                   (out_dir / "checkpoint.json").string()};
  if (net.has_labels) {
    std::vector<int> pred, truth;
    for (int i = 0; i < net.n_vertices; ++i) {
      if (net.labels[i] < 0) continue;  // score only labeled vertices
      pred.push_back(result.labels[i]);
      truth.push_back(net.labels[i]);
    }
    const auto variant = args.nmi_variant == "sqrt"
                             ? netclust::NmiNormalization::kSqrt
                             : netclust::NmiNormalization::kArithmeticMean;
    const auto eval_report = netclust::evaluate(pred, truth, variant);
    nmi_score = eval_report.nmi;
    acc_score = eval_report.acc;
    std::ofstream eval_out(out_dir / "eval.json");
    eval_out << netclust::report_to_json(eval_report) << "\n";
    outputs.push_back((out_dir / "eval.json").string());
  }

  json flags{{"edges", args.edges},     {"features", args.features},
             {"labels", args.labels},   {"k", k},
             {"max_iters", cfg.max_iters}, {"tol", cfg.tol},
             {"relative_tol", cfg.relative_tol}, {"seed", cfg.seed},
             {"renormalize", cfg.renormalize},   {"trace", cfg.trace_path},
             {"exact_checkpoint", args.exact_checkpoint},
             {"nmi_variant", args.nmi_variant}};
  std::vector<std::string> inputs{args.edges, args.features};
  if (!args.labels.empty()) inputs.push_back(args.labels);
  write_manifest(out_dir, "cluster", flags, inputs, outputs);

  std::cout << "L_final=" << result.final_loglik
            << " iterations=" << result.iterations_run
            << " converged=" << (result.converged ? "yes" : "no");
  if (result.tolerance_violations > 0)
    std::cout << " likelihood_drops=" << result.tolerance_violations;
  if (nmi_score >= 0.0)
    std::cout << " NMI=" << nmi_score << " Acc=" << acc_score;
  std::cout << "\n";
  return 0;
}

struct SynthArgs {
  netclust::SyntheticSpec spec;
  std::string out = "synth_out";
};

int run_synth(const SynthArgs& args) {
  const auto data = netclust::generate_network(args.spec);
  netclust::write_synthetic_files(data, args.spec, args.out);

  json flags{{"n", args.spec.n_vertices},
             {"k", args.spec.k_clusters},
             {"m", args.spec.m_features},
             {"concentration", args.spec.membership_concentration},
             {"edge-scale", args.spec.edge_scale},
             {"purity", args.spec.theme_purity},
             {"noise", args.spec.noise},
             {"seed", args.spec.seed}};
  const fs::path dir = args.out;
  write_manifest(dir, "synth", flags, {},
                 {(dir / "edges.tsv").string(), (dir / "features.tsv").string(),
                  (dir / "labels.tsv").string(), (dir / "planted.json").string()});
  std::cout << "wrote N=" << data.net.n_vertices << " |E|=" << data.net.edge_count()
            << " M=" << data.net.n_features << " to " << args.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string pred, truth, out;
  std::string nmi_variant = "mean";
};

int run_eval(const EvalArgs& args) {
  const auto pred_all = netclust::read_labels_file(args.pred);
  const auto truth_all = netclust::read_labels_file(args.truth);
  if (pred_all.size() != truth_all.size())
    throw std::runtime_error("label files disagree on vertex count (" +
                             std::to_string(pred_all.size()) + " vs " +
                             std::to_string(truth_all.size()) + ")");
  std::vector<int> pred, truth;  // score only vertices labeled in both files
  for (std::size_t i = 0; i < pred_all.size(); ++i) {
    if (pred_all[i] < 0 || truth_all[i] < 0) continue;
    pred.push_back(pred_all[i]);
    truth.push_back(truth_all[i]);
  }
  const auto variant = args.nmi_variant == "sqrt"
                           ? netclust::NmiNormalization::kSqrt
                           : netclust::NmiNormalization::kArithmeticMean;
  const auto report = netclust::evaluate(pred, truth, variant);
  std::cout << "NMI=" << report.nmi << " Acc=" << report.acc << "\n";
  if (!args.out.empty()) {
    fs::path out_path = args.out;
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    std::ofstream out(out_path);
    out << netclust::report_to_json(report) << "\n";
    write_manifest_file(args.out + ".manifest.json", "eval",
                        json{{"pred", args.pred},
                             {"truth", args.truth},
                             {"out", args.out},
                             {"nmi_variant", args.nmi_variant}},
                        {args.pred, args.truth}, {args.out});
  }
  return 0;
}

struct TracePlotArgs {
  std::string trace, out;
};

// Re-emit a trace CSV as gnuplot-style columns, adding the gap to the final
// likelihood (useful on a log axis).
int run_trace_plot_data(const TracePlotArgs& args) {
  std::ifstream in(args.trace);
  if (!in) throw std::runtime_error("cannot open trace '" + args.trace + "'");
  std::string line;
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
    std::array<double, 3> row{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &row[0], &row[1], &row[2]) != 3)
      throw std::runtime_error("malformed trace line '" + line + "'");
    rows.push_back(row);
  }
  if (rows.empty()) throw std::runtime_error("trace has no data rows");

  std::ofstream out(args.out);
  if (!out) throw std::runtime_error("cannot open '" + args.out + "' for writing");
  const double final_loglik = rows.back()[1];
  out << "# iteration loglik delta gap_to_final\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d %.17g %.17g %.17g\n",
                  static_cast<int>(row[0]), row[1], row[2], final_loglik - row[1]);
    out << buf;
  }
  write_manifest_file(args.out + ".manifest.json", "trace-plot-data",
                      json{{"trace", args.trace}, {"out", args.out}},
                      {args.trace}, {args.out});
  std::cout << "wrote " << rows.size() << " rows to " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EM clustering of attributed networks"};
  app.require_subcommand(1);

  ClusterArgs cluster_args;
  auto* cluster = app.add_subcommand("cluster", "fit the model to a network");
  cluster->add_option("--edges", cluster_args.edges, "edge list file")
      ->required()->envname("NETCLUST_EDGES");
  cluster->add_option("--features", cluster_args.features, "feature table file")
      ->required()->envname("NETCLUST_FEATURES");
  cluster->add_option("--labels", cluster_args.labels, "ground-truth label file")
      ->envname("NETCLUST_LABELS");
  cluster->add_option("--k", cluster_args.k, "cluster count (default: from labels)");
  cluster->add_option("--max-iters", cluster_args.max_iters, "EM iteration cap");
  cluster->add_option("--tol", cluster_args.tol, "likelihood-change tolerance");
  cluster->add_flag("--absolute-tol", cluster_args.absolute_tol,
                    "treat --tol as absolute instead of relative");
  cluster->add_flag("--no-renormalize", cluster_args.no_renormalize,
                    "skip simplex renormalization after updates");
  cluster->add_flag("--exact-checkpoint", cluster_args.exact_checkpoint,
                    "write hex-float (bitwise) checkpoint values");
  cluster->add_flag("--dump-similarities", cluster_args.dump_similarities,
                    "write z/g triplet files next to the other outputs");
  cluster->add_option("--seed", cluster_args.seed, "RNG seed")
      ->envname("NETCLUST_SEED");
  cluster->add_option("--out", cluster_args.out, "output directory")
      ->envname("NETCLUST_OUT");
  cluster->add_option("--trace", cluster_args.trace, "trace CSV path (default OUT/trace.csv)");
  cluster->add_option("--nmi", cluster_args.nmi_variant, "NMI normalization: mean|sqrt")
      ->check(CLI::IsMember({"mean", "sqrt"}));

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "sample a planted-cluster network");
  synth->add_option("--n", synth_args.spec.n_vertices, "vertex count");
  synth->add_option("--k", synth_args.spec.k_clusters, "cluster count");
  synth->add_option("--m", synth_args.spec.m_features, "feature count");
  synth->add_option("--concentration", synth_args.spec.membership_concentration,
                    "Dirichlet weight on the home cluster");
  synth->add_option("--edge-scale", synth_args.spec.edge_scale, "Poisson rate multiplier");
  synth->add_option("--purity", synth_args.spec.theme_purity, "own-block theme mass");
  synth->add_option("--noise", synth_args.spec.noise, "flat feature-rate mix-in");
  synth->add_option("--seed", synth_args.spec.seed, "RNG seed")->envname("NETCLUST_SEED");
  synth->add_option("--out", synth_args.out, "output directory")->envname("NETCLUST_OUT");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "score predicted labels against truth");
  eval->add_option("--pred", eval_args.pred, "predicted label file")->required();
  eval->add_option("--truth", eval_args.truth, "ground-truth label file")->required();
  eval->add_option("--out", eval_args.out, "write the report JSON here");
  eval->add_option("--nmi", eval_args.nmi_variant, "NMI normalization: mean|sqrt")
      ->check(CLI::IsMember({"mean", "sqrt"}));

  TracePlotArgs trace_args;
  auto* trace = app.add_subcommand("trace-plot-data",
                                   "convert a trace CSV to plot-ready columns");
  trace->add_option("--trace", trace_args.trace, "trace CSV from a cluster run")->required();
  trace->add_option("--out", trace_args.out, "output data file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster->parsed()) return run_cluster(cluster_args);
    if (synth->parsed()) return run_synth(synth_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (trace->parsed()) return run_trace_plot_data(trace_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
