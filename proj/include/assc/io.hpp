#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "assc/certificates.hpp"
#include "assc/solvers.hpp"

namespace assc {

using Json = nlohmann::json;

/// Row-per-point CSV with a header line; a final column named "label"
/// carries cluster ids, normalized to 1..n.
DataMatrix read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const DataMatrix& X);

/// Plain numeric matrix, one row per line, no header.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);

/// Single column of integer labels with a "label" header.
std::vector<int> read_labels_csv(const std::string& path);
void write_labels_csv(const std::string& path, const std::vector<int>& labels);

struct ColumnStats {
  Index j = 0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double dual_nu = 0.0;

  bool operator==(const ColumnStats&) const = default;
};

ColumnStats column_stats(const ColumnSolution& s);

struct RunReport {
  Json config;
  std::vector<ColumnStats> columns;
  int failed_columns = 0;
  std::optional<std::vector<int>> predicted_labels;
  std::optional<double> clustering_error;
  std::optional<CertificateReport> certificate;
  std::map<std::string, double> wall_seconds;
};

void to_json(Json& j, const SolverConfig& c);
void from_json(const Json& j, SolverConfig& c);
void to_json(Json& j, const ColumnStats& s);
void from_json(const Json& j, ColumnStats& s);
void to_json(Json& j, const PointClass& c);
void from_json(const Json& j, PointClass& c);
void to_json(Json& j, const CertificateReport& r);
void from_json(const Json& j, CertificateReport& r);
void to_json(Json& j, const RunReport& r);
void from_json(const Json& j, RunReport& r);

/// Structural check of a serialized RunReport; throws InvalidInput with the
/// offending key.
void validate_report_json(const Json& j);

void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

}  // namespace assc
