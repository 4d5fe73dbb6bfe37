#ifndef AOT_IO_HPP
#define AOT_IO_HPP

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "aot/alignment.hpp"
#include "aot/analysis.hpp"
#include "aot/measures.hpp"

namespace aot {

/// Paths of a problem triple: measures as one-number-per-line text,
/// cost as comma-separated rows.
struct ProblemFile {
  std::string mu_path;
  std::string nu_path;
  std::string cost_path;
};

/// Serializable solve summary. Index sets are 0-based in memory and
/// 1-based in the file.
struct ReportDocument {
  std::string method;  ///< aot-exact | aot-sinkhorn | ot | pot
  double objective = 0.0;
  double mass = 0.0;
  std::vector<std::size_t> saturated_rows;
  std::vector<std::size_t> saturated_cols;
  double duality_gap = 0.0;
  long iterations = 0;
  bool theorem1_passed = false;
  std::vector<std::size_t> active_rows;
  std::vector<std::size_t> active_cols;
  std::map<std::string, double> params;  ///< solver parameter echo
};

/// Row/column ordering of an exported heatmap.
enum class HeatmapOrder { kInput, kLabelSorted };

/// Synthetic-shift plus training configuration for one alignment run.
struct AlignJob {
  ShiftConfig shift;
  TrainConfig train;
};

std::vector<double> load_measure_file(const std::string& path);

DenseMatrix load_matrix_csv(const std::string& path);

/// Loads and shape-checks a (mu, nu, cost) triple.
std::tuple<DiscreteMeasure, DiscreteMeasure, CostMatrix> load_problem(
    const ProblemFile& paths);

void write_measure_file(const std::vector<double>& weights, const std::string& path);

/// Comma-separated rows, 12 significant digits per entry.
void write_matrix_csv(const DenseMatrix& matrix, const std::string& path);

/// Fixed-field JSON document; numbers carry 12 significant digits and
/// index sets are printed 1-based.
void write_report(const ReportDocument& report, const std::string& path);

/// Inverse of write_report (indices converted back to 0-based).
ReportDocument read_report(const std::string& path);

/// Assembles the serializable summary of one solve.
ReportDocument make_report_document(const SolveReport& report,
                                    const TheoremOneReport& theorem1,
                                    const ActiveRegions& regions,
                                    const std::map<std::string, double>& params);

/// CSV heatmap with one header row of 1-based column ids. Label-sorted
/// ordering permutes rows and columns by (label, index) and requires
/// labels for both sides.
void export_heatmap(const DenseMatrix& matrix, const std::string& path,
                    HeatmapOrder order = HeatmapOrder::kInput,
                    const std::vector<int>& row_labels = {},
                    const std::vector<int>& col_labels = {});

/// Per-iteration training telemetry as CSV.
void write_history_csv(const std::vector<TrainRecord>& history,
                       const std::string& path);

/// Parses the alignment config: top-level "shift" and "train" objects
/// whose keys mirror the ShiftConfig and TrainConfig fields.
AlignJob load_align_config(const std::string& path);

/// Formats one number with 12 significant digits.
std::string format_number(double value);

}  // namespace aot

#endif  // AOT_IO_HPP
