#include "assc/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace assc {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw InvalidInput(where + ": cannot parse '" + s + "' as a number");
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  int v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw InvalidInput(where + ": cannot parse '" + s + "' as an integer label");
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool content(const std::string& line) {
  return line.find_first_not_of(" \t\r") != std::string::npos;
}

template <typename T>
void put(Json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? Json(*v) : Json(nullptr);
}

template <typename T>
void get(const Json& j, const char* key, std::optional<T>& v) {
  if (!j.contains(key) || j.at(key).is_null()) {
    v.reset();
  } else {
    v = j.at(key).get<T>();
  }
}

template <typename E>
E parse_enum(const std::string& s, std::initializer_list<E> values, const char* what) {
  for (E v : values)
    if (s == to_string(v)) return v;
  throw InvalidInput(std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

DataMatrix read_points_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || !content(line)) throw InvalidInput(path + ": missing header line");
  const std::vector<std::string> header = split(line);
  const bool has_label = !header.empty() && header.back() == "label";
  const std::size_t nfeat = header.size() - (has_label ? 1 : 0);
  if (nfeat == 0) throw InvalidInput(path + ": no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<int> raw_labels;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!content(line)) continue;
    const auto cells = split(line);
    const std::string where = path + ":" + std::to_string(lineno);
    if (cells.size() != header.size()) {
      throw InvalidInput(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                         std::to_string(cells.size()));
    }
    std::vector<double> row(nfeat);
    for (std::size_t f = 0; f < nfeat; ++f) row[f] = parse_double(cells[f], where);
    rows.push_back(std::move(row));
    if (has_label) {
      const int l = parse_int(cells.back(), where);
      if (l < 1) throw InvalidInput(where + ": labels must be positive integers");
      raw_labels.push_back(l);
    }
  }
  if (rows.empty()) throw InvalidInput(path + ": no data rows");

  DataMatrix X;
  X.points.resize(static_cast<Index>(nfeat), static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t f = 0; f < nfeat; ++f) X.points(f, i) = rows[i][f];
  if (has_label) X.labels = normalize_labels(raw_labels);
  X.validate();
  return X;
}

void write_points_csv(const std::string& path, const DataMatrix& X) {
  std::ofstream out = open_out(path);
  for (Index f = 0; f < X.dim(); ++f) out << (f ? "," : "") << "x" << f + 1;
  if (X.labels) out << ",label";
  out << "\n";
  for (Index i = 0; i < X.size(); ++i) {
    for (Index f = 0; f < X.dim(); ++f) out << (f ? "," : "") << fmt(X.points(f, i));
    if (X.labels) out << "," << (*X.labels)[i];
    out << "\n";
  }
  if (!out) throw InvalidInput("write to '" + path + "' failed");
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!content(line)) continue;
    const auto cells = split(line);
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c, path + ":" + std::to_string(lineno)));
    if (!rows.empty() && row.size() != rows.front().size())
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) out << (k ? "," : "") << fmt(m(i, k));
    out << "\n";
  }
  if (!out) throw InvalidInput("write to '" + path + "' failed");
}

std::vector<int> read_labels_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split(line) != std::vector<std::string>{"label"})
    throw InvalidInput(path + ": expected a 'label' header");
  std::vector<int> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!content(line)) continue;
    out.push_back(parse_int(split(line).front(), path + ":" + std::to_string(lineno)));
  }
  return out;
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out = open_out(path);
  out << "label\n";
  for (int l : labels) out << l << "\n";
  if (!out) throw InvalidInput("write to '" + path + "' failed");
}

ColumnStats column_stats(const ColumnSolution& s) {
  return {s.j, s.objective, s.iterations, s.converged, s.primal_residual, s.dual_residual, s.dual_nu};
}

void to_json(Json& j, const SolverConfig& c) {
  j = Json{{"mode", to_string(c.mode)},
           {"mu0", c.mu0},
           {"rho", c.rho},
           {"mu_max", c.mu_max},
           {"max_iters", c.max_iters},
           {"primal_tol", c.primal_tol},
           {"dual_tol", c.dual_tol},
           {"seed", c.seed}};
  if (const auto* n = std::get_if<Noisy>(&c.variant)) {
    j["variant"] = {{"kind", "noisy"}, {"lambda", n->lambda}};
  } else {
    j["variant"] = {{"kind", "exact"}};
  }
}

void from_json(const Json& j, SolverConfig& c) {
  const std::string mode = j.at("mode").get<std::string>();
  if (mode != "ssc" && mode != "assc") throw InvalidInput("unknown mode '" + mode + "'");
  c.mode = mode == "ssc" ? Mode::SSC : Mode::ASSC;
  j.at("mu0").get_to(c.mu0);
  j.at("rho").get_to(c.rho);
  j.at("mu_max").get_to(c.mu_max);
  j.at("max_iters").get_to(c.max_iters);
  j.at("primal_tol").get_to(c.primal_tol);
  j.at("dual_tol").get_to(c.dual_tol);
  j.at("seed").get_to(c.seed);
  const Json& v = j.at("variant");
  if (v.at("kind") == "noisy") {
    c.variant = Noisy{v.at("lambda").get<double>()};
  } else {
    c.variant = Exact{};
  }
}

void to_json(Json& j, const ColumnStats& s) {
  j = Json{{"j", s.j},
           {"objective", s.objective},
           {"iterations", s.iterations},
           {"converged", s.converged},
           {"primal_residual", s.primal_residual},
           {"dual_residual", s.dual_residual},
           {"dual_nu", s.dual_nu}};
}

void from_json(const Json& j, ColumnStats& s) {
  j.at("j").get_to(s.j);
  j.at("objective").get_to(s.objective);
  j.at("iterations").get_to(s.iterations);
  j.at("converged").get_to(s.converged);
  j.at("primal_residual").get_to(s.primal_residual);
  j.at("dual_residual").get_to(s.dual_residual);
  j.at("dual_nu").get_to(s.dual_nu);
}

void to_json(Json& j, const PointClass& c) {
  j = Json{{"kind", to_string(c.kind)},
           {"generators", c.generators},
           {"face_dim", c.face_dim},
           {"duplicate", c.duplicate}};
}

void from_json(const Json& j, PointClass& c) {
  c.kind = parse_enum(j.at("kind").get<std::string>(),
                      {PointKind::RelativeInterior, PointKind::BoundaryFace, PointKind::Extreme},
                      "point kind");
  j.at("generators").get_to(c.generators);
  j.at("face_dim").get_to(c.face_dim);
  j.at("duplicate").get_to(c.duplicate);
}

namespace {

Json incoherence_json(const std::optional<IncoherenceCheck>& t) {
  if (!t) return nullptr;
  return {{"mu_tilde", t->mu_tilde}, {"inv_dual_norm", t->inv_dual_norm}, {"holds", t->holds}};
}

std::optional<IncoherenceCheck> incoherence_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return IncoherenceCheck{j.at("mu_tilde").get<double>(), j.at("inv_dual_norm").get<double>(),
                       j.at("holds").get<bool>()};
}

}  // namespace

void to_json(Json& j, const CertificateReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    Json q{{"j", p.j}, {"objective", p.objective}, {"nonnegative", p.nonnegative}};
    put(q, "label", p.label);
    q["class"] = p.cls ? Json(*p.cls) : Json(nullptr);
    q["subspace_preserving"] = p.subspace_preserving;
    q["subspace_dense"] = p.subspace_dense;
    put(q, "face_preserving", p.face_preserving);
    q["incoherence"] = incoherence_json(p.incoherence);
    Json g = Json::array();
    for (Guarantee x : p.guarantees) g.push_back(to_string(x));
    q["guarantees"] = g;
    put(q, "oracle_preserving", p.oracle_preserving);
    put(q, "oracle_objective", p.oracle_objective);
    q["violation"] = p.violation;
    points.push_back(std::move(q));
  }
  j = Json{{"labeled", r.labeled},
           {"points", points},
           {"connectivity", r.connectivity},
           {"correct_clustering", r.correct_clustering},
           {"theory_violations", r.theory_violations}};
  if (r.arrangement) {
    j["arrangement"] = {{"affinely_independent", r.arrangement->affinely_independent},
                        {"embedded_independent", r.arrangement->embedded_independent},
                        {"meets_other_hull", r.arrangement->meets_other_hull}};
  } else {
    j["arrangement"] = nullptr;
  }
  put(j, "clustering_error", r.clustering_error);
}

void from_json(const Json& j, CertificateReport& r) {
  r = CertificateReport{};
  j.at("labeled").get_to(r.labeled);
  for (const Json& q : j.at("points")) {
    PointCertificate p;
    q.at("j").get_to(p.j);
    q.at("objective").get_to(p.objective);
    q.at("nonnegative").get_to(p.nonnegative);
    get(q, "label", p.label);
    if (!q.at("class").is_null()) p.cls = q.at("class").get<PointClass>();
    q.at("subspace_preserving").get_to(p.subspace_preserving);
    q.at("subspace_dense").get_to(p.subspace_dense);
    get(q, "face_preserving", p.face_preserving);
    p.incoherence = incoherence_from(q.at("incoherence"));
    for (const Json& g : q.at("guarantees")) {
      p.guarantees.push_back(parse_enum(g.get<std::string>(),
                                        {Guarantee::EmbeddedIndependent, Guarantee::AffineIndependent, Guarantee::InteriorSeparated, Guarantee::FaceSeparated,
                                         Guarantee::FaceHullDisjoint, Guarantee::ExtremeLeak, Guarantee::ExtremeNonnegativeLeak},
                                        "guarantee"));
    }
    get(q, "oracle_preserving", p.oracle_preserving);
    get(q, "oracle_objective", p.oracle_objective);
    q.at("violation").get_to(p.violation);
    r.points.push_back(std::move(p));
  }
  r.connectivity = j.at("connectivity").get<std::vector<bool>>();
  j.at("correct_clustering").get_to(r.correct_clustering);
  j.at("theory_violations").get_to(r.theory_violations);
  if (!j.at("arrangement").is_null()) {
    const Json& a = j.at("arrangement");
    ArrangementVerdicts v;
    a.at("affinely_independent").get_to(v.affinely_independent);
    a.at("embedded_independent").get_to(v.embedded_independent);
    v.meets_other_hull = a.at("meets_other_hull").get<std::vector<bool>>();
    r.arrangement = v;
  }
  get(j, "clustering_error", r.clustering_error);
}

void to_json(Json& j, const RunReport& r) {
  j = Json{{"config", r.config},
           {"columns", r.columns},
           {"failed_columns", r.failed_columns},
           {"wall_seconds", r.wall_seconds}};
  put(j, "predicted_labels", r.predicted_labels);
  put(j, "clustering_error", r.clustering_error);
  j["certificate"] = r.certificate ? Json(*r.certificate) : Json(nullptr);
}

void from_json(const Json& j, RunReport& r) {
  validate_report_json(j);
  r.config = j.at("config");
  r.columns = j.at("columns").get<std::vector<ColumnStats>>();
  j.at("failed_columns").get_to(r.failed_columns);
  r.wall_seconds = j.at("wall_seconds").get<std::map<std::string, double>>();
  get(j, "predicted_labels", r.predicted_labels);
  get(j, "clustering_error", r.clustering_error);
  if (j.at("certificate").is_null()) {
    r.certificate.reset();
  } else {
    r.certificate = j.at("certificate").get<CertificateReport>();
  }
}

void validate_report_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("report: top level must be an object");
  const std::pair<const char*, Json::value_t> required[] = {
      {"config", Json::value_t::object},        {"columns", Json::value_t::array},
      {"failed_columns", Json::value_t::number_integer}, {"wall_seconds", Json::value_t::object},
  };
  for (const auto& [key, type] : required) {
    if (!j.contains(key)) throw InvalidInput(std::string("report: missing key '") + key + "'");
    const auto t = j.at(key).type();
    const bool ok = t == type || (type == Json::value_t::number_integer && t == Json::value_t::number_unsigned);
    if (!ok) throw InvalidInput(std::string("report: key '") + key + "' has the wrong type");
  }
  for (const char* key : {"predicted_labels", "clustering_error", "certificate"})
    if (!j.contains(key)) throw InvalidInput(std::string("report: missing key '") + key + "'");
  for (const Json& c : j.at("columns")) {
    for (const char* key : {"j", "objective", "iterations", "converged", "primal_residual", "dual_residual", "dual_nu"})
      if (!c.contains(key)) throw InvalidInput(std::string("report: column entry lacks '") + key + "'");
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
  if (!out) throw InvalidInput("write to '" + path + "' failed");
}

Json read_json(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

}  // namespace assc
