#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "aot/errors.hpp"
#include "aot/io.hpp"
#include "test_util.hpp"

using namespace aot;

namespace {

const std::string kDataDir = AOT_DATA_DIR;

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_text(const std::string& name, const std::string& body) {
  const std::string path = temp_path(name);
  std::ofstream out(path);
  out << body;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return body;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("measure files round-trip") {
  const std::vector<double> weights = {1.0 / 6.0, 0.0, 0.25, 1e-11};
  const std::string path = temp_path("io_measure.txt");
  write_measure_file(weights, path);
  const auto loaded = load_measure_file(path);
  REQUIRE(loaded.size() == 4);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(loaded[k] == doctest::Approx(weights[k]).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("measure parsing reports the offending line") {
  const std::string path = write_text("io_bad_measure.txt", "0.5\n\noops\n");
  CHECK_THROWS_WITH_AS(load_measure_file(path),
                       doctest::Contains("line 3, column 1"), ParseError);

  const std::string empty = write_text("io_empty_measure.txt", "\n  \n");
  CHECK_THROWS_WITH_AS(load_measure_file(empty),
                       doctest::Contains("line 1"), ParseError);

  CHECK_THROWS_AS(load_measure_file(temp_path("io_no_such_file.txt")), ParseError);
  std::remove(path.c_str());
  std::remove(empty.c_str());
}

TEST_CASE("matrix csv round-trip keeps 12 digits") {
  const auto matrix = DenseMatrix::from_rows(
      {{-1.0 / 3.0, 2.5, 1e-9}, {0.123456789012, -7.0, 11.0 / 15.0}});
  const std::string path = temp_path("io_matrix.csv");
  write_matrix_csv(matrix, path);
  const auto loaded = load_matrix_csv(path);
  REQUIRE(loaded.rows() == 2);
  REQUIRE(loaded.cols() == 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(loaded(i, j) == doctest::Approx(matrix(i, j)).epsilon(1e-11));
  CHECK(slurp(path).find("0.733333333333") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("matrix parsing rejects ragged and malformed input") {
  const std::string ragged = write_text("io_ragged.csv", "1,2,3\n4,5\n");
  CHECK_THROWS_WITH_AS(load_matrix_csv(ragged),
                       doctest::Contains("line 2 has 2 fields, expected 3"),
                       ParseError);

  const std::string bad = write_text("io_bad_token.csv", "1,2\n3,4x\n");
  CHECK_THROWS_WITH_AS(load_matrix_csv(bad),
                       doctest::Contains("line 2, column 2"), ParseError);

  const std::string empty = write_text("io_empty.csv", "");
  CHECK_THROWS_WITH_AS(load_matrix_csv(empty),
                       doctest::Contains("line 1"), ParseError);
  std::remove(ragged.c_str());
  std::remove(bad.c_str());
  std::remove(empty.c_str());
}

TEST_CASE("problem triples load and shape-check") {
  ProblemFile paths;
  paths.mu_path = kDataDir + "/toy_mu.txt";
  paths.nu_path = kDataDir + "/toy_nu.txt";
  paths.cost_path = kDataDir + "/toy_cost.csv";
  const auto [mu, nu, cost] = load_problem(paths);
  CHECK(mu.size() == 6);
  CHECK(nu.size() == 5);
  CHECK(mu.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nu.total() == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(cost.rows() == 6);
  REQUIRE(cost.cols() == 5);
  const auto expected = testutil::toy_cost_rows();
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(cost(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-12));

  ProblemFile wrong = paths;
  wrong.nu_path = paths.mu_path;  // 6 atoms against 5 cost columns
  CHECK_THROWS_AS(load_problem(wrong), ShapeError);
}

TEST_CASE("report documents round-trip") {
  ReportDocument doc;
  doc.method = "aot-exact";
  doc.objective = -11.0 / 15.0;
  doc.mass = 11.0 / 15.0;
  doc.saturated_rows = {3, 4};
  doc.saturated_cols = {0, 1};
  doc.duality_gap = 2.5e-16;
  doc.iterations = 6;
  doc.theorem1_passed = true;
  doc.active_rows = {0, 1, 2, 3, 4};
  doc.active_cols = {0, 1, 2, 3};
  doc.params = {{"tol", 1e-9}, {"lambda_c", 1.0}};

  const std::string path = temp_path("io_report.json");
  write_report(doc, path);

  const std::string body = slurp(path);
  CHECK(body.find("\"mass\": 0.733333333333") != std::string::npos);
  CHECK(body.find("\"saturated_rows\": [4, 5]") != std::string::npos);
  CHECK(body.find("\"saturated_cols\": [1, 2]") != std::string::npos);
  CHECK(body.find("\"theorem1_passed\": true") != std::string::npos);

  const ReportDocument loaded = read_report(path);
  CHECK(loaded.method == doc.method);
  CHECK(loaded.objective == doctest::Approx(doc.objective).epsilon(1e-12));
  CHECK(loaded.mass == doctest::Approx(doc.mass).epsilon(1e-12));
  CHECK(loaded.saturated_rows == doc.saturated_rows);
  CHECK(loaded.saturated_cols == doc.saturated_cols);
  CHECK(loaded.iterations == 6);
  CHECK(loaded.theorem1_passed);
  CHECK(loaded.active_rows == doc.active_rows);
  CHECK(loaded.active_cols == doc.active_cols);
  CHECK(loaded.params.at("lambda_c") == doctest::Approx(1.0));
  std::remove(path.c_str());
}

TEST_CASE("empty index sets survive the round trip") {
  ReportDocument doc;
  doc.method = "ot";
  const std::string path = temp_path("io_report_zero.json");
  write_report(doc, path);
  const ReportDocument loaded = read_report(path);
  CHECK(loaded.saturated_rows.empty());
  CHECK(loaded.active_cols.empty());
  CHECK(loaded.params.empty());
  CHECK_FALSE(loaded.theorem1_passed);
  std::remove(path.c_str());

  const std::string bad = write_text("io_report_bad.json", "{\"method\": 3}");
  CHECK_THROWS_AS(read_report(bad), ParseError);
  const std::string junk = write_text("io_report_junk.json", "not json");
  CHECK_THROWS_AS(read_report(junk), ParseError);
  std::remove(bad.c_str());
  std::remove(junk.c_str());
}

TEST_CASE("heatmap export") {
  SUBCASE("single cell") {
    const std::string path = temp_path("io_heat_1x1.csv");
    export_heatmap(DenseMatrix(1, 1, 0.25), path);
    CHECK(slurp(path) == "1\n0.25\n");
    std::remove(path.c_str());
  }

  SUBCASE("label sorting permutes rows and columns") {
    const auto matrix = DenseMatrix::from_rows({{1, 2}, {3, 4}});
    const std::string path = temp_path("io_heat_sorted.csv");
    export_heatmap(matrix, path, HeatmapOrder::kLabelSorted, {1, 0}, {1, 0});
    CHECK(slurp(path) == "2,1\n4,3\n2,1\n");
    std::remove(path.c_str());
  }

  SUBCASE("input order matches the plain matrix") {
    const auto matrix = DenseMatrix::from_rows({{1, 2}, {3, 4}});
    const std::string path = temp_path("io_heat_plain.csv");
    export_heatmap(matrix, path, HeatmapOrder::kInput);
    CHECK(slurp(path) == "1,2\n1,2\n3,4\n");
    std::remove(path.c_str());
  }

  SUBCASE("label sorting requires labels") {
    const auto matrix = DenseMatrix::from_rows({{1, 2}, {3, 4}});
    CHECK_THROWS_AS(export_heatmap(matrix, temp_path("io_heat_err.csv"),
                                   HeatmapOrder::kLabelSorted, {0}, {0, 1}),
                    ValidationError);
  }
}

TEST_CASE("history csv carries one row per iteration") {
  std::vector<TrainRecord> history(2);
  history[0].mass = 0.5;
  history[0].transport_cost = -0.25;
  history[0].source_loss = 1.0;
  history[0].source_class_mass = {0.2, 0.3};
  history[1].mass = 0.75;
  history[1].transport_cost = -0.5;
  history[1].source_loss = 0.5;
  history[1].source_class_mass = {0.4, 0.35};

  const std::string path = temp_path("io_history.csv");
  write_history_csv(history, path);
  const std::string body = slurp(path);
  CHECK(body.find("iteration,mass,transport_cost,source_loss,class_mass_1,class_mass_2\n") == 0);
  CHECK(body.find("1,0.5,-0.25,1,0.2,0.3\n") != std::string::npos);
  CHECK(body.find("2,0.75,-0.5,0.5,0.4,0.35\n") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("alignment configs parse field by field") {
  const AlignJob job = load_align_config(kDataDir + "/align_default.json");
  CHECK(job.shift.K == 3);
  CHECK(job.shift.d == 2);
  CHECK(job.shift.per_class == 200);
  REQUIRE(job.shift.shift_vector.size() == 2);
  CHECK(job.shift.shift_vector[0] == doctest::Approx(2.0));
  CHECK(job.shift.rotation_angle == doctest::Approx(0.5235987755982988));
  CHECK(job.shift.outlier_fraction == doctest::Approx(0.1));
  CHECK(job.shift.missing_target_classes.empty());
  CHECK(job.train.alpha == doctest::Approx(0.01));
  CHECK(job.train.beta == doctest::Approx(1.8));
  CHECK(job.train.epsilon == doctest::Approx(0.1));
  CHECK(job.train.batch_source == 24);
  CHECK(job.train.batch_target == 24);
  CHECK(job.train.lr == doctest::Approx(0.1));
  CHECK(job.train.iterations == 400);
  CHECK(job.train.seed == 7);

  const std::string bad = write_text("io_align_bad.json",
                                     "{\"shift\": {\"radius\": 2}}");
  CHECK_THROWS_WITH_AS(load_align_config(bad), doctest::Contains("unknown key"),
                       ParseError);
  const std::string top = write_text("io_align_top.json", "{\"extra\": {}}");
  CHECK_THROWS_WITH_AS(load_align_config(top),
                       doctest::Contains("unknown top-level key"), ParseError);
  std::remove(bad.c_str());
  std::remove(top.c_str());
}

}  // TEST_SUITE
