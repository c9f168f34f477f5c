#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcnn/analysis.hpp"
#include "gcnn/bench.hpp"
#include "gcnn/errors.hpp"
#include "gcnn/io.hpp"
#include "gcnn/plot.hpp"

namespace fs = std::filesystem;
using namespace gcnn;

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::string> method;
  std::optional<long long> trials, seed, n_rbf, n_train, n_test, n_pwc, grid_n, parallel;
  std::optional<double> gamma, noise, sigma, width_factor;
  std::optional<std::string> centers, width_rule;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "experiment config file (key=value lines)")
      ->required();
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--method", o.method, "rbfnn | gis-lagrange | gcnn-ec | gcnn-ec-i");
  cmd->add_option("--trials", o.trials, "number of repeated trials");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--gamma", o.gamma, "locality parameter of the blending weight");
  cmd->add_option("--noise", o.noise, "training noise standard deviation");
  cmd->add_option("--sigma", o.sigma, "constant RBF width");
  cmd->add_option("--width-factor", o.width_factor, "nearest-neighbor width factor");
  cmd->add_option("--centers", o.centers, "uniform-grid | k-means | sample-subset");
  cmd->add_option("--width-rule", o.width_rule, "constant | nn-scaled");
  cmd->add_option("--n-rbf", o.n_rbf, "number of basis functions");
  cmd->add_option("--n-train", o.n_train, "training set size");
  cmd->add_option("--n-test", o.n_test, "test set size");
  cmd->add_option("--n-pwc", o.n_pwc, "point-wise constraints handed to the GIS baseline");
  cmd->add_option("--grid-n", o.grid_n, "analysis grid resolution");
  cmd->add_option("--parallel-trials", o.parallel, "worker threads for independent trials");
}

ExperimentConfig resolve_config(const Overrides& o) {
  ExperimentConfig cfg = load_config(o.config_path);
  if (o.method) cfg.method = method_from_name(*o.method);
  if (o.trials) cfg.trials = static_cast<Index>(*o.trials);
  if (o.seed) cfg.seed = static_cast<std::uint64_t>(*o.seed);
  if (o.gamma) cfg.gamma = *o.gamma;
  if (o.noise) cfg.noise_sigma = *o.noise;
  if (o.sigma) cfg.policy.constant_sigma = *o.sigma;
  if (o.width_factor) cfg.policy.nn_factor = *o.width_factor;
  if (o.centers) {
    if (*o.centers == "uniform-grid") cfg.policy.kind = CenterPolicy::Kind::UniformGrid;
    else if (*o.centers == "k-means") cfg.policy.kind = CenterPolicy::Kind::KMeans;
    else if (*o.centers == "sample-subset") cfg.policy.kind = CenterPolicy::Kind::SampleSubset;
    else throw config_error("--centers: unknown policy " + *o.centers);
  }
  if (o.width_rule) {
    if (*o.width_rule == "constant") cfg.policy.width_rule = CenterPolicy::WidthRule::Constant;
    else if (*o.width_rule == "nn-scaled")
      cfg.policy.width_rule = CenterPolicy::WidthRule::NearestNeighborScaled;
    else throw config_error("--width-rule: unknown rule " + *o.width_rule);
  }
  if (o.n_rbf) cfg.n_rbf = static_cast<Index>(*o.n_rbf);
  if (o.n_train) cfg.n_train = static_cast<Index>(*o.n_train);
  if (o.n_test) cfg.n_test = static_cast<Index>(*o.n_test);
  if (o.n_pwc) cfg.n_pwc = static_cast<Index>(*o.n_pwc);
  if (o.grid_n) cfg.grid_n = static_cast<Index>(*o.grid_n);
  if (o.parallel) cfg.parallel = static_cast<Index>(*o.parallel);
  return cfg;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  out << content;
}

Mat line_grid(double lo, double hi, Index n) {
  Mat grid(n, 1);
  for (Index i = 0; i < n; ++i)
    grid(i, 0) = lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n - 1);
  return grid;
}

void emit_bench_plot(const ExperimentConfig& cfg, const fs::path& dir) {
  const PairedFit fit = fit_trial(cfg, 0);
  std::vector<PlotSeries> series;
  std::string title;
  if (cfg.experiment == Experiment::Sinc) {
    const Mat grid = line_grid(-10.0, 10.0, 501);
    Vec truth(grid.rows());
    for (Index i = 0; i < grid.rows(); ++i) truth(i) = sinc(grid(i, 0));
    series.push_back({"target", grid.col(0), truth, "#333333"});
    series.push_back({method_name(cfg.method), grid.col(0),
                      predict_constrained(fit.constrained, grid), "#d62728"});
    title = "sinc fit";
  } else {
    const Mat grid = boundary_grid(201);
    const ConstraintSpec& spec = fit.data.specs.front();
    Vec truth(grid.rows());
    Vec fitted(grid.rows());
    const bool neumann = cfg.experiment != Experiment::PdeDirichlet;
    if (neumann) {
      const Index axis = target_axis(spec.target);
      for (Index i = 0; i < grid.rows(); ++i)
        truth(i) = target_slope(spec.target, grid.row(i).transpose());
      fitted = predict_constrained_derivative(fit.constrained, grid, axis);
      title = "boundary derivative along x2 at x1=0";
    } else {
      for (Index i = 0; i < grid.rows(); ++i)
        truth(i) = target_value(spec.target, grid.row(i).transpose());
      fitted = predict_constrained(fit.constrained, grid);
      title = "boundary values at x1=0";
    }
    series.push_back({"target", grid.col(1), truth, "#333333"});
    series.push_back({method_name(cfg.method), grid.col(1), fitted, "#d62728"});
  }
  const std::string name = std::string(experiment_name(cfg.experiment)) + "_" +
                           method_name(cfg.method) + ".svg";
  write_svg_plot((dir / name).string(), title, series);
}

int cmd_bench(const Overrides& o, const std::string& experiment_arg) {
  ExperimentConfig cfg = resolve_config(o);
  if (!experiment_arg.empty()) {
    cfg.experiment = experiment_from_name(experiment_arg);
    if (cfg.experiment == Experiment::PdeNeumannIntegrated && !o.method) cfg.method = Method::GcnnEcI;
  }
  const ExperimentReport report = run_experiment(cfg);
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  const std::string name = std::string(experiment_name(cfg.experiment)) + "_" +
                           method_name(cfg.method) + ".csv";
  write_text(dir / name, report_csv(report));
  emit_bench_plot(cfg, dir);
  std::cout << experiment_name(cfg.experiment) << " " << method_name(cfg.method)
            << ": mse_cstr = " << num(report.mean_cstr) << " +- " << num(report.std_cstr)
            << ", mse_test = " << num(report.mean_test) << " +- " << num(report.std_test)
            << " (" << cfg.trials << " trials)\n";
  std::cout << "wrote " << (dir / name).string() << "\n";
  return 0;
}

int cmd_analyze_coupling(const Overrides& o) {
  ExperimentConfig cfg = resolve_config(o);
  if (cfg.experiment != Experiment::Sinc)
    throw config_error("analyze coupling: only the one-dimensional sinc experiment is supported");
  const PairedFit fit = fit_trial(cfg, 0);
  const Mat grid = line_grid(-10.0, 10.0, cfg.grid_n);

  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  const Vec fm = generic_modification(fit.constrained, fit.unconstrained, grid);
  const std::string method = method_name(cfg.method);

  if (fit.constrained.scheme == Scheme::LisValue ||
      fit.constrained.scheme == Scheme::LisIntegrated) {
    CouplingReport report = coupling_decompose(fit.constrained, grid);
    report.fm = fm;
    write_text(dir / ("coupling_" + method + ".csv"), coupling_csv(report));
  } else {
    std::string csv = "x0,f0,fm\n";
    const Vec f0 = predict(fit.constrained.base, grid);
    for (Index i = 0; i < grid.rows(); ++i) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid(i, 0), f0(i), fm(i));
      csv += buf;
    }
    write_text(dir / ("coupling_" + method + ".csv"), csv);
  }
  const double ratio = locality_ratio(grid, fm, fit.data.specs);
  std::cout << "coupling " << method << ": locality_ratio = " << num(ratio) << "\n";
  write_text(dir / ("locality_" + method + ".csv"),
             "method,locality_ratio\n" + method + "," + num(ratio) + "\n");
  return 0;
}

int cmd_analyze_weights(const Overrides& o) {
  ExperimentConfig cfg = resolve_config(o);
  if (cfg.method != Method::GcnnEc && cfg.method != Method::GisLagrange)
    throw config_error("analyze weights: pick a constrained method (gcnn-ec or gis-lagrange)");
  const PairedFit fit = fit_trial(cfg, 0);
  const WeightChangeReport report = weight_changes(fit.constrained, fit.unconstrained);

  fs::create_directories(o.out_dir);
  char sig[32];
  std::snprintf(sig, sizeof(sig), "%g", cfg.policy.constant_sigma);
  const std::string name =
      std::string("weights_") + method_name(cfg.method) + "_sigma" + sig + ".csv";
  write_text(fs::path(o.out_dir) / name, weight_changes_csv(report));
  std::cout << "wrote " << (fs::path(o.out_dir) / name).string()
            << (report.zero_change ? " (no weight change)" : "") << "\n";
  return 0;
}

int cmd_fit(const Overrides& o, const std::string& model_out) {
  ExperimentConfig cfg = resolve_config(o);
  const PairedFit fit = fit_trial(cfg, 0);
  save_model(model_out, fit.constrained);
  std::cout << "wrote " << model_out << "\n";
  return 0;
}

Mat read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open points file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw config_error("points file is empty: " + path);
  const std::size_t d = rows.front().size();
  Mat X(static_cast<Index>(rows.size()), static_cast<Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw config_error("points file: ragged rows");
    for (std::size_t k = 0; k < d; ++k)
      X(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
  }
  return X;
}

int cmd_predict(const std::string& model_path, const std::string& points_path,
                const std::string& out_path) {
  const GcnnModel model = load_model(model_path);
  const Mat X = read_points(points_path);
  const Vec y = predict_constrained(model, X);
  std::string csv;
  for (Index k = 0; k < X.cols(); ++k) csv += "x" + std::to_string(k) + ",";
  csv += "f\n";
  for (Index i = 0; i < X.rows(); ++i) {
    char buf[40];
    for (Index k = 0; k < X.cols(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g,", X(i, k));
      csv += buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g\n", y(i));
    csv += buf;
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
  } else {
    write_text(out_path, csv);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constrained RBF regression: benchmarks, diagnostics, and model round-trips"};
  app.require_subcommand(1);

  Overrides bench_opts;
  std::string experiment_arg;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark experiment and write CSV/SVG");
  bench->add_option("experiment", experiment_arg,
                    "sinc | pde-dirichlet | pde-neumann | pde-neumann-integrated")
      ->required();
  add_override_flags(bench, bench_opts);

  Overrides analyze_opts;
  std::string analyze_what;
  CLI::App* analyze = app.add_subcommand("analyze", "coupling decomposition or weight changes");
  analyze->add_option("what", analyze_what, "coupling | weights")->required();
  add_override_flags(analyze, analyze_opts);

  Overrides fit_opts;
  std::string model_out;
  CLI::App* fitc = app.add_subcommand("fit", "fit one trial and save the model file");
  add_override_flags(fitc, fit_opts);
  fitc->add_option("--model-out", model_out, "output model path")->required();

  std::string model_path, points_path, pred_out;
  CLI::App* predictc = app.add_subcommand("predict", "evaluate a saved model on points");
  predictc->add_option("--model", model_path, "model file")->required();
  predictc->add_option("--points", points_path, "points file (one point per line)")->required();
  predictc->add_option("--out", pred_out, "output CSV ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (bench->parsed()) return cmd_bench(bench_opts, experiment_arg);
    if (analyze->parsed()) {
      if (analyze_what == "coupling") return cmd_analyze_coupling(analyze_opts);
      if (analyze_what == "weights") return cmd_analyze_weights(analyze_opts);
      throw config_error("analyze: expected 'coupling' or 'weights', got '" + analyze_what + "'");
    }
    if (fitc->parsed()) return cmd_fit(fit_opts, model_out);
    if (predictc->parsed()) return cmd_predict(model_path, points_path, pred_out);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
