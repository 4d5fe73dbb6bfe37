#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "aot/alignment.hpp"
#include "aot/analysis.hpp"
#include "aot/baselines.hpp"
#include "aot/entropic.hpp"
#include "aot/errors.hpp"
#include "aot/exact.hpp"
#include "aot/measures.hpp"

namespace py = pybind11;

namespace {

using Rows = std::vector<std::vector<double>>;

aot::DiscreteMeasure to_measure(const std::vector<double>& weights) {
  return aot::DiscreteMeasure(weights);
}

aot::CostMatrix to_cost(const Rows& rows) { return aot::make_cost(rows); }

aot::TransportPlan to_plan(const Rows& rows) {
  return aot::TransportPlan::from_matrix(aot::DenseMatrix::from_rows(rows));
}

py::dict report_to_dict(const aot::SolveReport& report) {
  py::dict out;
  out["method"] = report.method;
  out["objective"] = report.objective();
  out["mass"] = report.mass();
  out["plan"] = report.plan.mass_matrix().to_rows();
  out["saturated_rows"] = report.marginals.saturated_rows;
  out["saturated_cols"] = report.marginals.saturated_cols;
  out["max_violation"] = report.marginals.max_violation;
  out["phi"] = report.duals.phi;
  out["psi"] = report.duals.psi;
  out["dual_value"] = report.dual_value;
  out["duality_gap"] = report.duality_gap;
  out["iterations"] = report.iterations;
  out["epsilon"] = report.epsilon;
  out["entropic_value"] = report.entropic_value;
  out["residual_history"] = report.residual_history;
  return out;
}

py::dict theorem1_to_dict(const aot::TheoremOneReport& report) {
  py::list positives, negatives;
  for (const aot::MassViolation& v : report.positive_violations)
    positives.append(py::make_tuple(v.row, v.col, v.mass));
  for (const aot::UnsaturatedPair& v : report.negative_unsaturated)
    negatives.append(py::make_tuple(v.row, v.col));
  py::dict out;
  out["passed"] = report.passed;
  out["positive_violations"] = positives;
  out["negative_unsaturated"] = negatives;
  return out;
}

aot::TransformSide to_side(const std::string& side) {
  if (side == "row-to-col") return aot::TransformSide::kRowToCol;
  if (side == "col-to-row") return aot::TransformSide::kColToRow;
  throw aot::ValidationError("side must be 'row-to-col' or 'col-to-row'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "adaptive optimal transport: solvers with inequality marginals, "
            "mixed-sign costs and adaptive transported mass";

  // Input problems map to ValueError, solver failures to RuntimeError,
  // mirroring the CLI exit codes 1 and 2.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const aot::ConvergenceError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const aot::CertificationError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const aot::DivergenceError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const aot::Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "solve_aot_exact",
      [](const std::vector<double>& mu, const std::vector<double>& nu,
         const Rows& cost) {
        return report_to_dict(
            aot::solve_aot_exact(to_measure(mu), to_measure(nu), to_cost(cost)));
      },
      py::arg("mu"), py::arg("nu"), py::arg("cost"),
      "Exact solver via the balanced augmented problem.");

  m.def(
      "solve_aot_sinkhorn",
      [](const std::vector<double>& mu, const std::vector<double>& nu,
         const Rows& cost, double epsilon, double tol, long max_iter) {
        aot::SinkhornConfig config;
        config.epsilon = epsilon;
        config.tol = tol;
        config.max_iter = max_iter;
        return report_to_dict(aot::solve_aot_sinkhorn(to_measure(mu), to_measure(nu),
                                                      to_cost(cost), config));
      },
      py::arg("mu"), py::arg("nu"), py::arg("cost"), py::arg("epsilon") = 0.1,
      py::arg("tol") = 1e-7, py::arg("max_iter") = 10000,
      "Entropy-regularized solver with clipped log-domain updates.");

  m.def(
      "solve_kantorovich",
      [](const std::vector<double>& mu, const std::vector<double>& nu,
         const Rows& cost) {
        return report_to_dict(
            aot::solve_kantorovich(to_measure(mu), to_measure(nu), to_cost(cost)));
      },
      py::arg("mu"), py::arg("nu"), py::arg("cost"),
      "Full-mass transport with equality marginals.");

  m.def(
      "solve_pot",
      [](const std::vector<double>& mu, const std::vector<double>& nu,
         const Rows& cost, double mass) {
        aot::PotSpec spec;
        spec.mass_budget = mass;
        spec.cost = to_cost(cost);
        return report_to_dict(aot::solve_pot(to_measure(mu), to_measure(nu), spec));
      },
      py::arg("mu"), py::arg("nu"), py::arg("cost"), py::arg("mass"),
      "Partial transport at a fixed mass budget (nonnegative cost).");

  m.def(
      "lambda_c",
      [](const Rows& cost) { return to_cost(cost).lambda_c(); }, py::arg("cost"),
      "max(0, max(-c)): the shift that makes the cost nonnegative.");

  m.def(
      "pot_lambda_sweep",
      [](const std::vector<double>& mu, const std::vector<double>& nu,
         const Rows& cost, const std::vector<double>& lambdas) {
        py::list out;
        for (const aot::LambdaPoint& p : aot::pot_lambda_sweep(
                 to_measure(mu), to_measure(nu), to_cost(cost), lambdas))
          out.append(py::make_tuple(p.lambda, p.mass, p.objective));
        return out;
      },
      py::arg("mu"), py::arg("nu"), py::arg("cost"), py::arg("lambdas"),
      "Mass and objective per lambda on the shifted cost c - lambda.");

  m.def(
      "mass_shift_curve",
      [](const std::vector<double>& mu, const std::vector<double>& nu,
         const Rows& cost, const std::vector<double>& grid) {
        py::list out;
        for (const aot::ShiftPoint& p :
             aot::mass_shift_curve(to_measure(mu), to_measure(nu), to_cost(cost), grid))
          out.append(py::make_tuple(p.t, p.mass, p.objective));
        return out;
      },
      py::arg("mu"), py::arg("nu"), py::arg("cost"), py::arg("grid"),
      "Transported mass of the exact solver on C - t per grid point.");

  m.def(
      "check_mass_allocation",
      [](const Rows& plan, const Rows& cost, const std::vector<double>& mu,
         const std::vector<double>& nu, double tol) {
        return theorem1_to_dict(aot::check_mass_allocation(
            to_plan(plan), to_cost(cost), to_measure(mu), to_measure(nu), tol));
      },
      py::arg("plan"), py::arg("cost"), py::arg("mu"), py::arg("nu"),
      py::arg("tol") = aot::kDefaultTol,
      "Mass-allocation audit of a feasible plan.");

  m.def(
      "active_regions",
      [](const Rows& plan, double tol) {
        const aot::ActiveRegions regions = aot::active_regions(to_plan(plan), tol);
        py::dict out;
        out["active_rows"] = regions.active_rows;
        out["active_cols"] = regions.active_cols;
        out["inactive_rows"] = regions.inactive_rows;
        out["inactive_cols"] = regions.inactive_cols;
        out["active_mass"] = regions.active_mass;
        return out;
      },
      py::arg("plan"), py::arg("tol") = aot::kDefaultTol,
      "Support projections of a plan.");

  m.def(
      "transform",
      [](const std::vector<double>& potential, const Rows& cost,
         const std::string& side) {
        return aot::transform(potential, to_cost(cost), to_side(side));
      },
      py::arg("potential"), py::arg("cost"), py::arg("side") = "row-to-col",
      "Infimal transform of a potential against the cost.");

  m.def(
      "dual_report",
      [](const std::vector<double>& phi, const std::vector<double>& psi,
         const Rows& cost, const std::vector<double>& mu,
         const std::vector<double>& nu, double primal, double tol) {
        const aot::DualReport report = aot::dual_report(
            phi, psi, to_cost(cost), to_measure(mu), to_measure(nu), primal, tol);
        py::dict out;
        out["feasible"] = report.feasible;
        out["dual_value"] = report.dual_value;
        out["gap"] = report.gap;
        return out;
      },
      py::arg("phi"), py::arg("psi"), py::arg("cost"), py::arg("mu"), py::arg("nu"),
      py::arg("primal"), py::arg("tol") = aot::kDefaultTol,
      "Feasibility and value of a dual pair.");

  m.def(
      "semidual_value",
      [](const std::vector<double>& phi, const Rows& cost,
         const std::vector<double>& mu, const std::vector<double>& nu) {
        return aot::semidual_value(phi, to_cost(cost), to_measure(mu), to_measure(nu));
      },
      py::arg("phi"), py::arg("cost"), py::arg("mu"), py::arg("nu"),
      "Single-potential dual value with the projected transform.");

  m.def(
      "run_alignment",
      [](int K, int d, int per_class, const std::vector<double>& shift_vector,
         double rotation_angle, double outlier_fraction,
         const std::vector<int>& missing_target_classes, unsigned long long seed,
         double alpha, double beta, double epsilon, int batch_source,
         int batch_target, double lr, int iterations) {
        aot::ShiftConfig shift;
        shift.K = K;
        shift.d = d;
        shift.per_class = per_class;
        shift.shift_vector = shift_vector;
        shift.rotation_angle = rotation_angle;
        shift.outlier_fraction = outlier_fraction;
        shift.missing_target_classes = missing_target_classes;
        shift.seed = seed;
        aot::TrainConfig train;
        train.alpha = alpha;
        train.beta = beta;
        train.epsilon = epsilon;
        train.batch_source = batch_source;
        train.batch_target = batch_target;
        train.lr = lr;
        train.iterations = iterations;
        train.seed = seed;

        const auto [source, target] = aot::generate_synthetic_shift(shift);
        const aot::TrainResult aligned =
            aot::train_aot_classifier(source, target, train);
        const aot::TrainResult baseline =
            aot::train_source_only(source, target, train);

        std::vector<double> mass_history;
        mass_history.reserve(aligned.history.size());
        for (const aot::TrainRecord& r : aligned.history)
          mass_history.push_back(r.mass);

        py::dict out;
        out["target_accuracy_aot"] =
            aot::evaluate_accuracy(aligned.model, target);
        out["target_accuracy_source_only"] =
            aot::evaluate_accuracy(baseline.model, target);
        out["source_accuracy_aot"] = aot::evaluate_accuracy(aligned.model, source);
        out["mass_history"] = mass_history;
        return out;
      },
      py::arg("K") = 3, py::arg("d") = 2, py::arg("per_class") = 100,
      py::arg("shift_vector") = std::vector<double>{},
      py::arg("rotation_angle") = 0.0, py::arg("outlier_fraction") = 0.0,
      py::arg("missing_target_classes") = std::vector<int>{}, py::arg("seed") = 1,
      py::arg("alpha") = 0.01, py::arg("beta") = 1.8, py::arg("epsilon") = 0.1,
      py::arg("batch_source") = 24, py::arg("batch_target") = 24,
      py::arg("lr") = 0.1, py::arg("iterations") = 400,
      "Generate the synthetic shift, train aligned and source-only "
      "classifiers, report accuracies and the batch mass history.");
}
