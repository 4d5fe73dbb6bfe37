#include "aot/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "aot/errors.hpp"

namespace aot {
namespace {

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

double parse_number(const std::string& token, const std::string& path,
                    std::size_t line, std::size_t column) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || (end && *end != '\0'))
    throw ParseError(path + ": line " + std::to_string(line) + ", column " +
                     std::to_string(column) + ": cannot parse '" + token +
                     "' as a number");
  return value;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

std::string join_indices_one_based(const std::vector<std::size_t>& idx) {
  std::string out = "[";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) out += ", ";
    out += std::to_string(idx[k] + 1);
  }
  return out + "]";
}

std::vector<std::size_t> sort_by_label(const std::vector<int>& labels) {
  std::vector<std::size_t> perm(labels.size());
  std::iota(perm.begin(), perm.end(), std::size_t(0));
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return labels[a] < labels[b];
  });
  return perm;
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::vector<double> load_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    values.push_back(parse_number(line, path, line_no, 1));
  }
  if (values.empty())
    throw ParseError(path + ": line 1: no values in measure file");
  return values;
}

DenseMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string token;
    std::size_t column = 0;
    while (std::getline(fields, token, ',')) {
      ++column;
      row.push_back(parse_number(token, path, line_no, column));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": line 1: no rows in matrix file");
  return DenseMatrix::from_rows(rows);
}

std::tuple<DiscreteMeasure, DiscreteMeasure, CostMatrix> load_problem(
    const ProblemFile& paths) {
  std::vector<double> mu = load_measure_file(paths.mu_path);
  std::vector<double> nu = load_measure_file(paths.nu_path);
  DenseMatrix cost = load_matrix_csv(paths.cost_path);
  if (cost.rows() != mu.size() || cost.cols() != nu.size())
    throw ShapeError("cost is " + std::to_string(cost.rows()) + "x" +
                     std::to_string(cost.cols()) + " but measures have " +
                     std::to_string(mu.size()) + " and " + std::to_string(nu.size()) +
                     " atoms");
  return {DiscreteMeasure(std::move(mu)), DiscreteMeasure(std::move(nu)),
          CostMatrix(std::move(cost))};
}

void write_measure_file(const std::vector<double>& weights, const std::string& path) {
  std::ofstream out = open_output(path);
  for (double w : weights) out << format_number(w) << "\n";
}

void write_matrix_csv(const DenseMatrix& matrix, const std::string& path) {
  std::ofstream out = open_output(path);
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      if (j) out << ",";
      out << format_number(matrix(i, j));
    }
    out << "\n";
  }
}

void write_report(const ReportDocument& report, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "{\n";
  out << "  \"method\": \"" << report.method << "\",\n";
  out << "  \"objective\": " << format_number(report.objective) << ",\n";
  out << "  \"mass\": " << format_number(report.mass) << ",\n";
  out << "  \"saturated_rows\": " << join_indices_one_based(report.saturated_rows)
      << ",\n";
  out << "  \"saturated_cols\": " << join_indices_one_based(report.saturated_cols)
      << ",\n";
  out << "  \"duality_gap\": " << format_number(report.duality_gap) << ",\n";
  out << "  \"iterations\": " << report.iterations << ",\n";
  out << "  \"theorem1_passed\": " << (report.theorem1_passed ? "true" : "false")
      << ",\n";
  out << "  \"active_rows\": " << join_indices_one_based(report.active_rows) << ",\n";
  out << "  \"active_cols\": " << join_indices_one_based(report.active_cols) << ",\n";
  out << "  \"params\": {";
  bool first = true;
  for (const auto& [key, value] : report.params) {
    if (!first) out << ", ";
    first = false;
    out << "\"" << key << "\": " << format_number(value);
  }
  out << "}\n}\n";
}

ReportDocument read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  const auto indices = [&](const char* key) {
    std::vector<std::size_t> out;
    for (const auto& v : doc.at(key)) {
      const long long x = v.get<long long>();
      if (x < 1) throw ParseError(path + ": " + key + " holds non-positive index");
      out.push_back(static_cast<std::size_t>(x - 1));
    }
    return out;
  };
  ReportDocument report;
  try {
    report.method = doc.at("method").get<std::string>();
    report.objective = doc.at("objective").get<double>();
    report.mass = doc.at("mass").get<double>();
    report.saturated_rows = indices("saturated_rows");
    report.saturated_cols = indices("saturated_cols");
    report.duality_gap = doc.at("duality_gap").get<double>();
    report.iterations = doc.at("iterations").get<long>();
    report.theorem1_passed = doc.at("theorem1_passed").get<bool>();
    report.active_rows = indices("active_rows");
    report.active_cols = indices("active_cols");
    for (const auto& [key, value] : doc.at("params").items())
      report.params[key] = value.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return report;
}

ReportDocument make_report_document(const SolveReport& report,
                                    const TheoremOneReport& theorem1,
                                    const ActiveRegions& regions,
                                    const std::map<std::string, double>& params) {
  ReportDocument doc;
  doc.method = report.method;
  doc.objective = report.objective();
  doc.mass = report.mass();
  doc.saturated_rows = report.marginals.saturated_rows;
  doc.saturated_cols = report.marginals.saturated_cols;
  doc.duality_gap = report.duality_gap;
  doc.iterations = report.iterations;
  doc.theorem1_passed = theorem1.passed;
  doc.active_rows = regions.active_rows;
  doc.active_cols = regions.active_cols;
  doc.params = params;
  return doc;
}

void export_heatmap(const DenseMatrix& matrix, const std::string& path,
                    HeatmapOrder order, const std::vector<int>& row_labels,
                    const std::vector<int>& col_labels) {
  std::vector<std::size_t> row_perm(matrix.rows()), col_perm(matrix.cols());
  std::iota(row_perm.begin(), row_perm.end(), std::size_t(0));
  std::iota(col_perm.begin(), col_perm.end(), std::size_t(0));
  if (order == HeatmapOrder::kLabelSorted) {
    if (row_labels.size() != matrix.rows() || col_labels.size() != matrix.cols())
      throw ValidationError("label-sorted heatmap needs labels for every row and column");
    row_perm = sort_by_label(row_labels);
    col_perm = sort_by_label(col_labels);
  }

  std::ofstream out = open_output(path);
  for (std::size_t j = 0; j < col_perm.size(); ++j) {
    if (j) out << ",";
    out << col_perm[j] + 1;
  }
  out << "\n";
  for (std::size_t i : row_perm) {
    for (std::size_t j = 0; j < col_perm.size(); ++j) {
      if (j) out << ",";
      out << format_number(matrix(i, col_perm[j]));
    }
    out << "\n";
  }
}

void write_history_csv(const std::vector<TrainRecord>& history,
                       const std::string& path) {
  std::ofstream out = open_output(path);
  const std::size_t K = history.empty() ? 0 : history.front().source_class_mass.size();
  out << "iteration,mass,transport_cost,source_loss";
  for (std::size_t k = 1; k <= K; ++k) out << ",class_mass_" << k;
  out << "\n";
  for (std::size_t it = 0; it < history.size(); ++it) {
    const TrainRecord& r = history[it];
    out << it + 1 << "," << format_number(r.mass) << ","
        << format_number(r.transport_cost) << "," << format_number(r.source_loss);
    for (double m : r.source_class_mass) out << "," << format_number(m);
    out << "\n";
  }
}

AlignJob load_align_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  AlignJob job;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "shift") {
        for (const auto& [field, v] : value.items()) {
          if (field == "K")
            job.shift.K = v.get<int>();
          else if (field == "d")
            job.shift.d = v.get<int>();
          else if (field == "per_class")
            job.shift.per_class = v.get<int>();
          else if (field == "shift_vector")
            job.shift.shift_vector = v.get<std::vector<double>>();
          else if (field == "rotation_angle")
            job.shift.rotation_angle = v.get<double>();
          else if (field == "outlier_fraction")
            job.shift.outlier_fraction = v.get<double>();
          else if (field == "missing_target_classes")
            job.shift.missing_target_classes = v.get<std::vector<int>>();
          else if (field == "seed")
            job.shift.seed = v.get<unsigned long long>();
          else
            throw ParseError(path + ": unknown key '" + field + "' in shift config");
        }
      } else if (key == "train") {
        for (const auto& [field, v] : value.items()) {
          if (field == "alpha")
            job.train.alpha = v.get<double>();
          else if (field == "beta")
            job.train.beta = v.get<double>();
          else if (field == "epsilon")
            job.train.epsilon = v.get<double>();
          else if (field == "batch_source")
            job.train.batch_source = v.get<int>();
          else if (field == "batch_target")
            job.train.batch_target = v.get<int>();
          else if (field == "lr")
            job.train.lr = v.get<double>();
          else if (field == "iterations")
            job.train.iterations = v.get<int>();
          else if (field == "seed")
            job.train.seed = v.get<unsigned long long>();
          else
            throw ParseError(path + ": unknown key '" + field + "' in train config");
        }
      } else {
        throw ParseError(path + ": unknown top-level key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return job;
}

}  // namespace aot
