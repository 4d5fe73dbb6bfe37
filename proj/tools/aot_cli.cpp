#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aot/alignment.hpp"
#include "aot/analysis.hpp"
#include "aot/baselines.hpp"
#include "aot/entropic.hpp"
#include "aot/errors.hpp"
#include "aot/exact.hpp"
#include "aot/io.hpp"

namespace {

struct SolveArgs {
  aot::ProblemFile paths;
  std::string method = "aot-exact";
  double epsilon = 0.1;
  std::optional<double> mass;
  std::optional<double> tol;
  std::string out = "report.json";
  std::string plan_out;
};

struct DiagnoseArgs {
  aot::ProblemFile paths;
  std::string plan_path;
  double tol = aot::kDefaultTol;
};

struct SweepArgs {
  aot::ProblemFile paths;
  std::vector<double> shift_grid;
  std::vector<double> lambda_grid;
  std::string out = "sweep.csv";
};

struct AlignArgs {
  std::string config_path;
  std::string out_prefix = "align";
};

int run_solve(const SolveArgs& args) {
  auto [mu, nu, cost] = aot::load_problem(args.paths);
  const double report_tol = args.tol.value_or(aot::kDefaultTol);

  aot::SolveReport report;
  std::map<std::string, double> params{{"tol", report_tol}};
  double theorem_tol = report_tol;
  if (args.method == "aot-exact") {
    report = aot::solve_aot_exact(mu, nu, cost);
  } else if (args.method == "aot-sinkhorn") {
    aot::SinkhornConfig config;
    config.epsilon = args.epsilon;
    config.tol = args.tol.value_or(config.tol);
    report = aot::solve_aot_sinkhorn(mu, nu, cost, config);
    params["epsilon"] = config.epsilon;
    theorem_tol = std::max(report_tol, config.tol);
  } else if (args.method == "ot") {
    report = aot::solve_kantorovich(mu, nu, cost);
  } else {
    if (!args.mass)
      throw aot::ValidationError("method pot needs --mass");
    aot::PotSpec spec;
    spec.mass_budget = *args.mass;
    spec.cost = cost;
    report = aot::solve_pot(mu, nu, spec);
    params["mass"] = *args.mass;
  }

  const aot::TheoremOneReport theorem1 =
      aot::check_mass_allocation(report.plan, cost, mu, nu, theorem_tol);
  const aot::ActiveRegions regions = aot::active_regions(report.plan, report_tol);
  aot::write_report(aot::make_report_document(report, theorem1, regions, params),
                    args.out);
  if (!args.plan_out.empty())
    aot::write_matrix_csv(report.plan.mass_matrix(), args.plan_out);

  std::cout << "method " << report.method << "\nobjective "
            << aot::format_number(report.objective()) << "\nmass "
            << aot::format_number(report.mass()) << "\nduality_gap "
            << aot::format_number(report.duality_gap) << "\niterations "
            << report.iterations << "\nreport " << args.out << "\n";
  return 0;
}

void print_indices(const char* name, const std::vector<std::size_t>& idx) {
  std::cout << name << " [";
  for (std::size_t k = 0; k < idx.size(); ++k)
    std::cout << (k ? ", " : "") << idx[k] + 1;
  std::cout << "]\n";
}

int run_diagnose(const DiagnoseArgs& args) {
  auto [mu, nu, cost] = aot::load_problem(args.paths);
  const aot::TransportPlan plan =
      aot::TransportPlan::from_matrix(aot::load_matrix_csv(args.plan_path));
  const aot::MarginalReport marginals =
      aot::summarize_plan(plan, cost, mu, nu, args.tol);
  const aot::TheoremOneReport theorem1 =
      aot::check_mass_allocation(plan, cost, mu, nu, args.tol);
  const aot::ActiveRegions regions = aot::active_regions(plan, args.tol);

  std::cout << "mass " << aot::format_number(marginals.mass) << "\nobjective "
            << aot::format_number(marginals.objective) << "\ntheorem1 "
            << (theorem1.passed ? "pass" : "fail") << "\n";
  for (const aot::MassViolation& v : theorem1.positive_violations)
    std::cout << "positive_mass_at (" << v.row + 1 << ", " << v.col + 1 << ") "
              << aot::format_number(v.mass) << "\n";
  for (const aot::UnsaturatedPair& v : theorem1.negative_unsaturated)
    std::cout << "unsaturated_negative_at (" << v.row + 1 << ", " << v.col + 1
              << ")\n";
  print_indices("saturated_rows", marginals.saturated_rows);
  print_indices("saturated_cols", marginals.saturated_cols);
  print_indices("active_rows", regions.active_rows);
  print_indices("active_cols", regions.active_cols);
  print_indices("inactive_rows", regions.inactive_rows);
  print_indices("inactive_cols", regions.inactive_cols);
  return 0;
}

int run_sweep(const SweepArgs& args) {
  auto [mu, nu, cost] = aot::load_problem(args.paths);
  if (args.shift_grid.empty() == args.lambda_grid.empty())
    throw aot::ValidationError("give exactly one of --shift-grid or --lambda-grid");

  std::ofstream out(args.out);
  if (!out) throw aot::ValidationError("cannot write " + args.out);
  if (!args.shift_grid.empty()) {
    out << "t,mass,objective\n";
    for (const aot::ShiftPoint& p :
         aot::mass_shift_curve(mu, nu, cost, args.shift_grid))
      out << aot::format_number(p.t) << "," << aot::format_number(p.mass) << ","
          << aot::format_number(p.objective) << "\n";
  } else {
    out << "lambda,mass,objective\n";
    for (const aot::LambdaPoint& p :
         aot::pot_lambda_sweep(mu, nu, cost, args.lambda_grid))
      out << aot::format_number(p.lambda) << "," << aot::format_number(p.mass)
          << "," << aot::format_number(p.objective) << "\n";
  }
  std::cout << "sweep " << args.out << "\n";
  return 0;
}

int run_align(const AlignArgs& args) {
  aot::AlignJob job = aot::load_align_config(args.config_path);
  if (const char* env_seed = std::getenv("AOT_SEED")) {
    try {
      const unsigned long long seed = std::stoull(env_seed);
      job.shift.seed = seed;
      job.train.seed = seed;
    } catch (const std::exception&) {
      throw aot::ValidationError("AOT_SEED is not an unsigned integer");
    }
  }

  const auto [source, target] = aot::generate_synthetic_shift(job.shift);
  const aot::TrainResult aligned =
      aot::train_aot_classifier(source, target, job.train);
  const aot::TrainResult baseline = aot::train_source_only(source, target, job.train);

  aot::write_history_csv(aligned.history, args.out_prefix + "_history.csv");

  // One fresh batch under the trained model for the label-wise summary.
  std::mt19937_64 rng(job.train.seed);
  const int K = source.num_classes;
  const std::vector<std::size_t> src_idx =
      aot::stratified_batch(source.labels, K, job.train.batch_source / K, rng);
  std::vector<std::size_t> tgt_idx;
  {
    std::vector<std::size_t> pool(target.size());
    for (std::size_t r = 0; r < pool.size(); ++r) pool[r] = r;
    for (int t = 0; t < job.train.batch_target; ++t) {
      std::uniform_int_distribution<std::size_t> pick(t, pool.size() - 1);
      std::swap(pool[t], pool[pick(rng)]);
      tgt_idx.push_back(pool[t]);
    }
  }
  aot::DenseMatrix xs(src_idx.size(), source.features.cols(), 0.0);
  aot::DenseMatrix p(src_idx.size(), K, 0.0);
  std::vector<int> src_labels, tgt_labels;
  for (std::size_t r = 0; r < src_idx.size(); ++r) {
    for (std::size_t e = 0; e < source.features.cols(); ++e)
      xs(r, e) = source.features(src_idx[r], e);
    p(r, source.labels[src_idx[r]]) = 1.0;
    src_labels.push_back(source.labels[src_idx[r]]);
  }
  aot::DenseMatrix zs(tgt_idx.size(), target.features.cols(), 0.0);
  for (std::size_t r = 0; r < tgt_idx.size(); ++r) {
    for (std::size_t e = 0; e < target.features.cols(); ++e)
      zs(r, e) = target.features(tgt_idx[r], e);
    tgt_labels.push_back(target.labels[tgt_idx[r]]);
  }
  const aot::DenseMatrix q = aligned.model.probabilities(zs);
  const aot::CostMatrix cost =
      aot::build_alignment_cost(xs, zs, p, q, job.train.alpha, job.train.beta);
  const aot::DiscreteMeasure mu_b(
      std::vector<double>(xs.rows(), 1.0 / double(xs.rows())));
  const aot::DiscreteMeasure nu_b(
      std::vector<double>(zs.rows(), 1.0 / double(zs.rows())));
  aot::SolveReport solved;
  if (job.train.epsilon > 0.0) {
    aot::SinkhornConfig sconf;
    sconf.epsilon = job.train.epsilon;
    // Same relaxed stopping rule as the training batches; this plan only
    // feeds the labelwise heatmap.
    sconf.tol = 1e-4;
    sconf.max_iter = 20000;
    solved = aot::solve_aot_sinkhorn(mu_b, nu_b, cost, sconf);
  } else {
    solved = aot::solve_aot_exact(mu_b, nu_b, cost);
  }
  const aot::LabelwiseReport labelwise =
      aot::labelwise_aggregate(solved.plan, src_labels, tgt_labels, K);
  aot::export_heatmap(labelwise.matrix, args.out_prefix + "_labelwise.csv");

  const double acc_aot = aot::evaluate_accuracy(aligned.model, target);
  const double acc_base = aot::evaluate_accuracy(baseline.model, target);
  const double acc_aot_src = aot::evaluate_accuracy(aligned.model, source);
  const double acc_base_src = aot::evaluate_accuracy(baseline.model, source);
  double mean_mass = 0.0;
  const std::size_t window =
      std::min<std::size_t>(50, aligned.history.size());
  for (std::size_t it = aligned.history.size() - window;
       it < aligned.history.size(); ++it)
    mean_mass += aligned.history[it].mass / double(window);

  std::ofstream acc(args.out_prefix + "_accuracy.json");
  if (!acc)
    throw aot::ValidationError("cannot write " + args.out_prefix + "_accuracy.json");
  acc << "{\n"
      << "  \"target_accuracy_aot\": " << aot::format_number(acc_aot) << ",\n"
      << "  \"target_accuracy_source_only\": " << aot::format_number(acc_base)
      << ",\n"
      << "  \"source_accuracy_aot\": " << aot::format_number(acc_aot_src) << ",\n"
      << "  \"source_accuracy_source_only\": " << aot::format_number(acc_base_src)
      << ",\n"
      << "  \"mean_mass_last_" << window << "\": " << aot::format_number(mean_mass)
      << "\n}\n";

  std::cout << "target_accuracy_aot " << aot::format_number(acc_aot)
            << "\ntarget_accuracy_source_only " << aot::format_number(acc_base)
            << "\nmean_batch_mass " << aot::format_number(mean_mass) << "\nfiles "
            << args.out_prefix << "_history.csv " << args.out_prefix
            << "_labelwise.csv " << args.out_prefix << "_accuracy.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive optimal transport: solvers, diagnostics, alignment"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "solve one transport problem");
  solve->add_option("--mu", solve_args.paths.mu_path, "row measure file")->required();
  solve->add_option("--nu", solve_args.paths.nu_path, "column measure file")
      ->required();
  solve->add_option("--cost", solve_args.paths.cost_path, "cost matrix CSV")
      ->required();
  solve->add_option("--method", solve_args.method, "solver")
      ->check(CLI::IsMember({"aot-exact", "aot-sinkhorn", "ot", "pot"}));
  solve->add_option("--epsilon", solve_args.epsilon,
                    "entropic coefficient (aot-sinkhorn)");
  double mass_flag = 0.0, tol_flag = 0.0;
  CLI::Option* mass_opt =
      solve->add_option("--mass", mass_flag, "mass budget (pot)");
  CLI::Option* tol_opt = solve->add_option("--tol", tol_flag, "tolerance override");
  solve->add_option("--out", solve_args.out, "report JSON path");
  solve->add_option("--plan", solve_args.plan_out, "optional plan CSV path");

  DiagnoseArgs diag_args;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "audit a plan against a problem");
  diagnose->add_option("--plan", diag_args.plan_path, "plan CSV")->required();
  diagnose->add_option("--mu", diag_args.paths.mu_path, "row measure file")
      ->required();
  diagnose->add_option("--nu", diag_args.paths.nu_path, "column measure file")
      ->required();
  diagnose->add_option("--cost", diag_args.paths.cost_path, "cost matrix CSV")
      ->required();
  diagnose->add_option("--tol", diag_args.tol, "tolerance");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "mass curve over a cost grid");
  sweep->add_option("--mu", sweep_args.paths.mu_path, "row measure file")->required();
  sweep->add_option("--nu", sweep_args.paths.nu_path, "column measure file")
      ->required();
  sweep->add_option("--cost", sweep_args.paths.cost_path, "cost matrix CSV")
      ->required();
  sweep->add_option("--shift-grid", sweep_args.shift_grid,
                    "comma-separated shifts t, solves on C - t")
      ->delimiter(',');
  sweep->add_option("--lambda-grid", sweep_args.lambda_grid,
                    "comma-separated lambdas (nonnegative cost only)")
      ->delimiter(',');
  sweep->add_option("--out", sweep_args.out, "curve CSV path");

  AlignArgs align_args;
  CLI::App* align = app.add_subcommand(
      "align", "train the alignment classifier (AOT_SEED overrides config seeds)");
  align->add_option("--config", align_args.config_path, "JSON config")->required();
  align->add_option("--out-prefix", align_args.out_prefix, "output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*mass_opt) solve_args.mass = mass_flag;
  if (*tol_opt) solve_args.tol = tol_flag;

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (diagnose->parsed()) return run_diagnose(diag_args);
    if (sweep->parsed()) return run_sweep(sweep_args);
    if (align->parsed()) return run_align(align_args);
  } catch (const aot::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const aot::CertificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const aot::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const aot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
