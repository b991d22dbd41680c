#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assc/certificates.hpp"
#include "assc/clustering.hpp"
#include "assc/datagen.hpp"
#include "assc/io.hpp"
#include "assc/model.hpp"
#include "assc/solvers.hpp"

namespace {

using namespace assc;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kSolver = 3 };

struct ExitError : std::runtime_error {
  ExitError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

[[noreturn]] void config_error(const std::string& msg) { throw ExitError(kUsage, msg); }

// Runs `f`, reporting library input errors as data errors.
template <typename F>
auto data_step(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    throw ExitError(kData, e.what());
  } catch (const PreconditionViolation& e) {
    throw ExitError(kData, e.what());
  }
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct DatasetOptions {
  std::string toy;
  std::string csv;
  std::string preprocess = "none";
};

void add_dataset_options(CLI::App* cmd, DatasetOptions& o) {
  auto* toy = cmd->add_option("--toy", o.toy, "Built-in dataset (TwoLinesR3, TwoLinesR2, TriangleLineR3, TriangleR2, DualExampleR2)");
  auto* csv = cmd->add_option("--data", o.csv, "Points CSV, one row per point, optional final label column");
  toy->excludes(csv);
  cmd->add_option("--preprocess", o.preprocess, "Column transform applied before solving")
      ->check(CLI::IsMember({"none", "center", "zscore", "unit", "minmax"}))
      ->capture_default_str();
}

void preprocess(Matrix& P, const std::string& how) {
  if (how == "none" || P.size() == 0) return;
  if (how == "unit") {
    for (Index i = 0; i < P.cols(); ++i) {
      const double n = P.col(i).norm();
      if (n > 0) P.col(i) /= n;
    }
    return;
  }
  const Vector mean = P.rowwise().mean();
  if (how == "center") {
    P.colwise() -= mean;
  } else if (how == "zscore") {
    P.colwise() -= mean;
    const Vector sd = (P.array().square().rowwise().sum() / double(P.cols())).sqrt();
    for (Index f = 0; f < P.rows(); ++f)
      if (sd(f) > 0) P.row(f) /= sd(f);
  } else if (how == "minmax") {
    const Vector lo = P.rowwise().minCoeff(), hi = P.rowwise().maxCoeff();
    for (Index f = 0; f < P.rows(); ++f) {
      P.row(f).array() -= lo(f);
      if (hi(f) > lo(f)) P.row(f) /= hi(f) - lo(f);
    }
  }
}

// Labeled CSV data gets one affine subspace per cluster, fitted to its members.
Arrangement load_dataset(const DatasetOptions& o) {
  if (o.toy.empty() == o.csv.empty()) config_error("give exactly one of --toy or --data");
  Arrangement arr;
  if (!o.toy.empty()) {
    ToyId id;
    try {
      id = parse_toy_id(o.toy);
    } catch (const InvalidInput& e) {
      config_error(e.what());
    }
    arr = make_toy(id).arrangement;
  } else {
    arr.data = data_step([&] { return read_points_csv(o.csv); });
    if (arr.data.size() < 2) throw ExitError(kData, o.csv + ": need at least two points");
    if (arr.data.labeled()) {
      for (int k = 1; k <= arr.data.num_clusters(); ++k)
        arr.subspaces.push_back(fit_affine_subspace(arr.data.columns(arr.data.members(k))));
    }
  }
  if (o.preprocess != "none") {
    preprocess(arr.data.points, o.preprocess);
    if (arr.data.labeled()) {
      for (int k = 1; k <= arr.data.num_clusters(); ++k)
        arr.subspaces[k - 1] = fit_affine_subspace(arr.data.columns(arr.data.members(k)));
    }
  }
  return arr;
}

Mode parse_mode(const std::string& s) { return s == "ssc" ? Mode::SSC : Mode::ASSC; }

struct SolveOptions {
  DatasetOptions data;
  std::string mode = "assc";
  std::string variant = "exact";
  std::optional<double> alpha;
  std::optional<double> lambda;
  int clusters = 0;
  std::uint64_t seed = 0;
  int max_iters = SolverConfig{}.max_iters;
  bool certify = false;
  std::string coefficients_out;
  std::string affinity_out;
  std::string report_out;
};

void add_solver_options(CLI::App* cmd, SolveOptions& o) {
  add_dataset_options(cmd, o.data);
  cmd->add_option("--mode", o.mode, "Program")->check(CLI::IsMember({"assc", "ssc"}))->capture_default_str();
  cmd->add_option("--clusters", o.clusters, "Number of clusters; 0 takes it from the labels")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for spectral clustering")->capture_default_str();
  cmd->add_option("--max-iters", o.max_iters, "ADMM iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
}

SolverConfig solver_config(const SolveOptions& o, const DataMatrix& X, std::optional<double> alpha) {
  SolverConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.seed = o.seed;
  cfg.max_iters = o.max_iters;
  if (o.variant == "noisy") {
    if (o.lambda) {
      cfg.variant = Noisy{*o.lambda};
    } else if (alpha) {
      cfg.variant = Noisy{data_step([&] { return compute_lambda(X, *alpha); })};
    } else {
      config_error("the noisy variant needs --alpha or --lambda");
    }
  }
  try {
    cfg.validate();
  } catch (const InvalidInput& e) {
    config_error(e.what());
  }
  return cfg;
}

int cluster_count(const SolveOptions& o, const DataMatrix& X) {
  if (o.clusters > 0) return o.clusters;
  if (!X.labeled()) config_error("--clusters is required for unlabeled data");
  return X.num_clusters();
}

Json config_echo(const SolveOptions& o, const SolverConfig& cfg, int n) {
  Json j{{"source", o.data.toy.empty() ? Json{{"csv", o.data.csv}} : Json{{"toy", o.data.toy}}},
         {"preprocess", o.data.preprocess},
         {"solver", cfg},
         {"clusters", n},
         {"seed", o.seed},
         {"certify", o.certify}};
  j["alpha"] = o.alpha ? Json(*o.alpha) : Json(nullptr);
  return j;
}

struct Pipeline {
  CoefficientMatrix cm;
  Matrix A;
  SpectralResult spectral;
  RunReport report;
};

Pipeline run_pipeline(const SolveOptions& o, const Arrangement& arr, const SolverConfig& cfg, int n) {
  Pipeline p;
  Stopwatch clock;
  p.cm = build_coefficient_matrix(arr.data, cfg);
  p.report.wall_seconds["solve"] = clock.lap();
  if (p.cm.failed == arr.data.size())
    throw ExitError(kSolver, "no column converged (" + std::to_string(p.cm.failed) + " failures)");
  p.A = build_affinity(p.cm.C);
  p.spectral = spectral_cluster(p.A, n, o.seed);
  p.report.wall_seconds["cluster"] = clock.lap();

  p.report.config = config_echo(o, cfg, n);
  for (const auto& s : p.cm.columns) p.report.columns.push_back(column_stats(s));
  p.report.failed_columns = p.cm.failed;
  p.report.predicted_labels = p.spectral.labels;
  if (arr.data.labeled()) p.report.clustering_error = clustering_error(p.spectral.labels, *arr.data.labels);
  if (o.certify) {
    if (!arr.data.labeled()) throw ExitError(kData, "--certify needs labeled data");
    p.report.certificate = certify(arr, p.cm.C, p.spectral.labels);
    p.report.wall_seconds["certify"] = clock.lap();
  }
  return p;
}

void emit_json(const std::string& path, const Json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    data_step([&] { write_json(path, j); });
  }
}

int cmd_solve(const SolveOptions& o) {
  const Arrangement arr = load_dataset(o.data);
  const SolverConfig cfg = solver_config(o, arr.data, o.alpha);
  const int n = cluster_count(o, arr.data);
  Pipeline p = run_pipeline(o, arr, cfg, n);
  const Json report = p.report;
  validate_report_json(report);
  if (!o.coefficients_out.empty()) data_step([&] { write_matrix_csv(o.coefficients_out, p.cm.C); });
  if (!o.affinity_out.empty()) data_step([&] { write_matrix_csv(o.affinity_out, p.A); });
  emit_json(o.report_out, report);
  if (!o.report_out.empty() && o.report_out != "-") {
    std::printf("columns %ld, unconverged %d", static_cast<long>(arr.data.size()), p.cm.failed);
    if (p.report.clustering_error) std::printf(", clustering error %.2f%%", *p.report.clustering_error);
    std::printf("\n");
  }
  return kOk;
}

struct CertifyOptions {
  DatasetOptions data;
  std::string coefficients;
  std::string predicted;
  std::string report_out;
};

int cmd_certify(const CertifyOptions& o) {
  const Arrangement arr = load_dataset(o.data);
  if (!arr.data.labeled()) throw ExitError(kData, "certify needs a labeled dataset");
  const Matrix C = data_step([&] { return read_matrix_csv(o.coefficients); });
  if (C.rows() != arr.data.size() || C.cols() != arr.data.size())
    throw ExitError(kData, "coefficient matrix must be " + std::to_string(arr.data.size()) + " x " +
                               std::to_string(arr.data.size()));
  std::optional<std::vector<int>> predicted;
  if (!o.predicted.empty()) predicted = data_step([&] { return read_labels_csv(o.predicted); });
  const CertificateReport rep = data_step([&] { return certify(arr, C, predicted); });
  emit_json(o.report_out, Json(rep));
  if (!o.report_out.empty() && o.report_out != "-") {
    int preserving = 0;
    std::string faces;
    for (const auto& pc : rep.points) {
      preserving += pc.subspace_preserving;
      if (pc.face_preserving && *pc.face_preserving) faces += " x" + std::to_string(pc.j + 1);
    }
    std::printf("preserving %d/%zu, face-preserving:%s, theory violations %d\n", preserving, rep.points.size(),
                faces.empty() ? " none" : faces.c_str(), rep.theory_violations);
  }
  return kOk;
}

struct EvalOptions {
  std::string predicted;
  std::string truth;
  DatasetOptions data;
};

int cmd_eval(const EvalOptions& o) {
  const auto pred = data_step([&] { return read_labels_csv(o.predicted); });
  std::vector<int> truth;
  if (!o.truth.empty()) {
    truth = data_step([&] { return read_labels_csv(o.truth); });
  } else {
    const Arrangement arr = load_dataset(o.data);
    if (!arr.data.labeled()) throw ExitError(kData, "dataset has no labels to compare against");
    truth = *arr.data.labels;
  }
  const double err = data_step([&] { return clustering_error(pred, truth); });
  std::printf("%.6f\n", err);
  return kOk;
}

struct SweepOptions {
  SolveOptions solve;
  std::vector<double> alphas{1, 2, 5, 10, 20, 50, 100};
  std::string out;
};

int cmd_sweep(SweepOptions o) {
  o.solve.variant = "noisy";
  const Arrangement arr = load_dataset(o.solve.data);
  if (!arr.data.labeled()) throw ExitError(kData, "sweep needs labeled data");
  const int n = cluster_count(o.solve, arr.data);
  std::string table = "alpha,lambda,clustering_error,unconverged\n";
  int solved = 0;
  for (double alpha : o.alphas) {
    const SolverConfig cfg = solver_config(o.solve, arr.data, alpha);
    char row[128];
    try {
      Pipeline p = run_pipeline(o.solve, arr, cfg, n);
      std::snprintf(row, sizeof row, "%.17g,%.17g,%.6f,%d\n", alpha, std::get<Noisy>(cfg.variant).lambda,
                    *p.report.clustering_error, p.cm.failed);
      ++solved;
    } catch (const ExitError& e) {
      if (e.code != kSolver) throw;
      std::snprintf(row, sizeof row, "%.17g,%.17g,,%ld\n", alpha, std::get<Noisy>(cfg.variant).lambda,
                    static_cast<long>(arr.data.size()));
    }
    table += row;
  }
  if (o.out.empty() || o.out == "-") {
    std::cout << table;
  } else {
    std::FILE* f = std::fopen(o.out.c_str(), "w");
    if (!f || std::fputs(table.c_str(), f) < 0) throw ExitError(kData, "cannot write '" + o.out + "'");
    std::fclose(f);
  }
  if (solved == 0) throw ExitError(kSolver, "no alpha produced a converged solve");
  return kOk;
}

struct SynthOptions {
  std::string toy;
  bool random = false;
  RandomArrangementSpec spec;
  double noise = 0.0;
  std::string out;
  std::string labels_out;
};

int cmd_synth(SynthOptions o) {
  if (o.toy.empty() == !o.random) config_error("give exactly one of --toy or --random");
  DataMatrix X;
  if (!o.toy.empty()) {
    try {
      X = make_toy(parse_toy_id(o.toy)).arrangement.data;
    } catch (const InvalidInput& e) {
      config_error(e.what());
    }
  } else {
    o.spec.n = static_cast<int>(o.spec.dims.size());
    if (o.spec.points_per_cluster.size() == 1)
      o.spec.points_per_cluster.assign(o.spec.dims.size(), o.spec.points_per_cluster.front());
    try {
      X = random_arrangement(o.spec).data;
    } catch (const InvalidInput& e) {
      config_error(e.what());
    } catch (const GenerationFailure& e) {
      throw ExitError(kData, e.what());
    }
  }
  if (o.noise > 0) X = add_gaussian_noise(X, o.noise, o.spec.seed + 1);
  data_step([&] { write_points_csv(o.out, X); });
  if (!o.labels_out.empty()) data_step([&] { write_labels_csv(o.labels_out, *X.labels); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine sparse subspace clustering"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Write a built-in or random dataset");
  s->add_option("--toy", synth.toy, "Built-in dataset id");
  s->add_flag("--random", synth.random, "Draw a random union of affine subspaces");
  s->add_option("--dims", synth.spec.dims, "Subspace dimensions, one per cluster")->capture_default_str();
  s->add_option("--points", synth.spec.points_per_cluster, "Points per cluster (one value or one per cluster)")
      ->capture_default_str();
  s->add_option("--ambient", synth.spec.ambient, "Ambient dimension")->capture_default_str();
  s->add_option("--spread", synth.spec.spread, "Half-width of the sampling box")->capture_default_str();
  s->add_option("--separation", synth.spec.separation, "Scale of the subspace offsets")->capture_default_str();
  s->add_flag("--independent", synth.spec.force_affinely_independent, "Redraw until affinely independent");
  s->add_option("--noise", synth.noise, "Gaussian noise level")->check(CLI::NonNegativeNumber);
  s->add_option("--seed", synth.spec.seed, "Random seed")->capture_default_str();
  s->add_option("-o,--out", synth.out, "Points CSV")->required();
  s->add_option("--labels-out", synth.labels_out, "Labels CSV");

  SolveOptions solve;
  auto* v = app.add_subcommand("solve", "Solve every column, cluster, and report");
  add_solver_options(v, solve);
  v->add_option("--variant", solve.variant, "Exact or noisy programs")
      ->check(CLI::IsMember({"exact", "noisy"}))
      ->capture_default_str();
  v->add_option("--alpha", solve.alpha, "Noisy weight multiplier")->check(CLI::PositiveNumber);
  v->add_option("--lambda", solve.lambda, "Noisy weight, overrides --alpha")->check(CLI::PositiveNumber);
  v->add_flag("--certify", solve.certify, "Attach the certificate report (labeled data only)");
  v->add_option("--coefficients-out", solve.coefficients_out, "CSV dump of C");
  v->add_option("--affinity-out", solve.affinity_out, "CSV dump of the affinity");
  v->add_option("-o,--report", solve.report_out, "JSON report path; '-' or omitted prints it");

  CertifyOptions cert;
  auto* c = app.add_subcommand("certify", "Check a coefficient matrix against the geometry of a labeled dataset");
  add_dataset_options(c, cert.data);
  c->add_option("-c,--coefficients", cert.coefficients, "Coefficient matrix CSV")->required();
  c->add_option("--predicted", cert.predicted, "Predicted labels CSV");
  c->add_option("-o,--report", cert.report_out, "JSON report path; '-' or omitted prints it");

  EvalOptions eval;
  auto* e = app.add_subcommand("eval", "Clustering error of predicted labels, in percent");
  e->add_option("-p,--predicted", eval.predicted, "Predicted labels CSV")->required();
  e->add_option("--truth", eval.truth, "True labels CSV");
  add_dataset_options(e, eval.data);

  SweepOptions sweep;
  auto* w = app.add_subcommand("sweep", "Clustering error of the noisy programs over an alpha grid");
  add_solver_options(w, sweep.solve);
  w->add_option("--alphas", sweep.alphas, "Alpha values")->check(CLI::PositiveNumber)->capture_default_str();
  w->add_option("-o,--out", sweep.out, "CSV table path; '-' or omitted prints it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (s->parsed()) return cmd_synth(synth);
    if (v->parsed()) return cmd_solve(solve);
    if (c->parsed()) return cmd_certify(cert);
    if (e->parsed()) return cmd_eval(eval);
    if (w->parsed()) return cmd_sweep(sweep);
  } catch (const ExitError& err) {
    std::fprintf(stderr, "assc: %s\n", err.what());
    return err.code;
  } catch (const SolverFailure& err) {
    std::fprintf(stderr, "assc: %s\n", err.what());
    return kSolver;
  } catch (const Error& err) {
    std::fprintf(stderr, "assc: %s: %s\n", to_string(err.kind()), err.what());
    return kData;
  }
  return kUsage;
}
