#include "gcnn/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "gcnn/errors.hpp"
#include "gcnn/rng.hpp"

namespace gcnn {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vec linspace(double lo, double hi, Index n) {
  Vec v(n);
  if (n == 1) {
    v(0) = lo;
    return v;
  }
  for (Index i = 0; i < n; ++i)
    v(i) = lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n - 1);
  return v;
}

class KahanSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

double mse(const Eigen::Ref<const Vec>& predicted, const Eigen::Ref<const Vec>& expected) {
  if (predicted.size() != expected.size()) throw std::invalid_argument("mse: size mismatch");
  KahanSum sum;
  for (Index i = 0; i < predicted.size(); ++i) {
    const double r = predicted(i) - expected(i);
    sum.add(r * r);
  }
  return sum.value() / static_cast<double>(predicted.size());
}

constexpr Index kBoundaryPoints = 21;

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Sinc: return "sinc";
    case Experiment::PdeDirichlet: return "pde-dirichlet";
    case Experiment::PdeNeumann: return "pde-neumann";
    case Experiment::PdeNeumannIntegrated: return "pde-neumann-integrated";
  }
  throw std::logic_error("unknown experiment");
}

Experiment experiment_from_name(std::string_view name) {
  if (name == "sinc") return Experiment::Sinc;
  if (name == "pde-dirichlet") return Experiment::PdeDirichlet;
  if (name == "pde-neumann") return Experiment::PdeNeumann;
  if (name == "pde-neumann-integrated") return Experiment::PdeNeumannIntegrated;
  throw config_error("unknown experiment: " + std::string(name));
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Rbfnn: return "rbfnn";
    case Method::GisLagrange: return "gis-lagrange";
    case Method::GcnnEc: return "gcnn-ec";
    case Method::GcnnEcI: return "gcnn-ec-i";
  }
  throw std::logic_error("unknown method");
}

Method method_from_name(std::string_view name) {
  if (name == "rbfnn") return Method::Rbfnn;
  if (name == "gis-lagrange") return Method::GisLagrange;
  if (name == "gcnn-ec") return Method::GcnnEc;
  if (name == "gcnn-ec-i") return Method::GcnnEcI;
  throw config_error("unknown method: " + std::string(name));
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (value.empty()) throw config_error("config key '" + key + "' has no value");

    const auto as_count = [&](Index lo) {
      long long v;
      try {
        v = std::stoll(value);
      } catch (...) {
        throw config_error("config key '" + key + "': not an integer: " + value);
      }
      if (v < lo) throw config_error("config key '" + key + "': value too small");
      return static_cast<Index>(v);
    };
    const auto as_real = [&]() {
      try {
        return std::stod(value);
      } catch (...) {
        throw config_error("config key '" + key + "': not a number: " + value);
      }
    };

    if (key == "experiment") cfg.experiment = experiment_from_name(value);
    else if (key == "method") cfg.method = method_from_name(value);
    else if (key == "n_train") cfg.n_train = as_count(1);
    else if (key == "n_test") cfg.n_test = as_count(1);
    else if (key == "n_rbf") cfg.n_rbf = as_count(1);
    else if (key == "gamma") cfg.gamma = as_real();
    else if (key == "noise_sigma") cfg.noise_sigma = as_real();
    else if (key == "trials") cfg.trials = as_count(1);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_count(0));
    else if (key == "n_pwc") cfg.n_pwc = as_count(1);
    else if (key == "grid_n") cfg.grid_n = as_count(2);
    else if (key == "parallel_trials") cfg.parallel = as_count(1);
    else if (key == "centers") {
      if (value == "uniform-grid") cfg.policy.kind = CenterPolicy::Kind::UniformGrid;
      else if (value == "k-means") cfg.policy.kind = CenterPolicy::Kind::KMeans;
      else if (value == "sample-subset") cfg.policy.kind = CenterPolicy::Kind::SampleSubset;
      else throw config_error("config key 'centers': unknown policy " + value);
    } else if (key == "width_rule") {
      if (value == "constant") cfg.policy.width_rule = CenterPolicy::WidthRule::Constant;
      else if (value == "nn-scaled")
        cfg.policy.width_rule = CenterPolicy::WidthRule::NearestNeighborScaled;
      else throw config_error("config key 'width_rule': unknown rule " + value);
    } else if (key == "sigma") cfg.policy.constant_sigma = as_real();
    else if (key == "width_factor") cfg.policy.nn_factor = as_real();
    else throw config_error("unknown config key: " + key);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  return parse_config(in);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n_train < 1 || cfg.n_test < 1 || cfg.n_rbf < 1 || cfg.trials < 1)
    throw config_error("config: counts and trials must be >= 1");
  if (!(cfg.gamma > 0.0)) throw config_error("config: gamma must be positive");
  if (!(cfg.noise_sigma >= 0.0)) throw config_error("config: noise_sigma must be nonnegative");
  if (cfg.parallel < 1) throw config_error("config: parallel_trials must be >= 1");
  if (cfg.policy.width_rule == CenterPolicy::WidthRule::Constant &&
      !(cfg.policy.constant_sigma > 0.0))
    throw config_error("config: sigma must be positive");
  if (cfg.policy.width_rule == CenterPolicy::WidthRule::NearestNeighborScaled &&
      !(cfg.policy.nn_factor > 0.0))
    throw config_error("config: width_factor must be positive");
  if (cfg.policy.kind != CenterPolicy::Kind::UniformGrid && cfg.n_rbf > cfg.n_train)
    throw config_error("config: n_rbf exceeds n_train for a data-driven center policy");

  switch (cfg.experiment) {
    case Experiment::Sinc:
      if (cfg.method == Method::GcnnEcI)
        throw config_error("config: point constraints have no derivative form to integrate");
      break;
    case Experiment::PdeDirichlet:
      if (cfg.method == Method::GcnnEcI)
        throw config_error("config: the Dirichlet boundary is already a value constraint");
      break;
    case Experiment::PdeNeumann:
      if (cfg.method == Method::GisLagrange)
        throw config_error(
            "config: the Lagrange baseline needs point-wise value constraints; "
            "derivative boundaries are not supported");
      break;
    case Experiment::PdeNeumannIntegrated:
      if (cfg.method != Method::GcnnEcI)
        throw config_error("config: pde-neumann-integrated implies method gcnn-ec-i");
      break;
  }
  if (cfg.experiment == Experiment::PdeDirichlet || cfg.experiment == Experiment::PdeNeumann ||
      cfg.experiment == Experiment::PdeNeumannIntegrated) {
    const Index k = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(cfg.n_train))));
    if (k * k != cfg.n_train)
      throw config_error("config: pde experiments need n_train to be a perfect square");
    if (cfg.n_test < kBoundaryPoints)
      throw config_error("config: pde experiments need n_test >= 21");
  }
}

GeneratedExperiment gen_sinc(Index n_train, Index n_test, double noise_sigma,
                             std::uint64_t seed) {
  if (n_train < 1 || n_test < 1) throw std::invalid_argument("gen_sinc: counts must be >= 1");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("gen_sinc: negative noise");
  SplitMix64 rng(seed);

  GeneratedExperiment out;
  out.train.X = linspace(-10.0, 10.0, n_train);
  out.train.y.resize(n_train);
  for (Index i = 0; i < n_train; ++i)
    out.train.y(i) = sinc(out.train.X(i, 0)) + noise_sigma * rng.normal();
  out.train.noise_sigma = noise_sigma;
  out.train.seed = seed;

  out.test.X.resize(n_test, 1);
  for (Index i = 0; i < n_test; ++i) out.test.X(i, 0) = rng.uniform(-10.0, 10.0);
  out.test.y.resize(n_test);
  for (Index i = 0; i < n_test; ++i)
    out.test.y(i) = sinc(out.test.X(i, 0)) + noise_sigma * rng.normal();
  out.test.noise_sigma = noise_sigma;
  out.test.seed = seed;

  for (const double at : {0.0, std::numbers::pi / 2.0}) {
    ConstraintSpec spec;
    spec.set = PointList{Mat::Constant(1, 1, at)};
    spec.target = targets::by_name("sinc");
    out.specs.push_back(std::move(spec));
  }
  return out;
}

GeneratedExperiment gen_pde(BoundaryKind kind, Index n_train, Index n_test, double noise_sigma,
                            std::uint64_t seed) {
  const Index k = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n_train))));
  if (k * k != n_train)
    throw std::invalid_argument("gen_pde: n_train must be a perfect square");
  if (n_test < kBoundaryPoints)
    throw std::invalid_argument("gen_pde: n_test must cover the 21 boundary points");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("gen_pde: negative noise");
  SplitMix64 rng(seed);

  GeneratedExperiment out;
  const Vec axis = linspace(0.0, 1.0, k);
  out.train.X.resize(n_train, 2);
  out.train.y.resize(n_train);
  Index row = 0;
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j, ++row) {
      out.train.X(row, 0) = axis(i);
      out.train.X(row, 1) = axis(j);
      out.train.y(row) = pde_solution(axis(i), axis(j)) + noise_sigma * rng.normal();
    }
  out.train.noise_sigma = noise_sigma;
  out.train.seed = seed;

  const Index interior = n_test - kBoundaryPoints;
  out.test.X.resize(n_test, 2);
  out.test.y.resize(n_test);
  for (Index i = 0; i < interior; ++i) {
    out.test.X(i, 0) = rng.uniform01();
    out.test.X(i, 1) = rng.uniform01();
  }
  out.test.X.bottomRows(kBoundaryPoints) = boundary_grid(kBoundaryPoints);
  for (Index i = 0; i < n_test; ++i)
    out.test.y(i) = pde_solution(out.test.X(i, 0), out.test.X(i, 1));
  out.test.seed = seed;

  ConstraintSpec spec;
  spec.set = AxisPlane{0, 0.0};
  spec.target = targets::by_name(kind == BoundaryKind::Dirichlet ? "cube-x2"
                                                                 : "cube-x2-integrated");
  out.specs.push_back(std::move(spec));
  return out;
}

Mat boundary_grid(Index n) {
  Mat grid(n, 2);
  grid.col(0).setZero();
  grid.col(1) = linspace(0.0, 1.0, n);
  return grid;
}

std::vector<PointConstraint> discretize_constraint(const ConstraintSpec& spec, Index n_points,
                                                   Index dim, double lo, double hi) {
  if (n_points < 1) throw std::invalid_argument("discretize_constraint: need n_points >= 1");
  std::vector<PointConstraint> out;
  if (const auto* pl = std::get_if<PointList>(&spec.set)) {
    for (Index i = 0; i < pl->points.rows(); ++i) {
      Vec p = pl->points.row(i).transpose();
      const double v = target_value(spec.target, p);
      out.push_back({std::move(p), v});
    }
    return out;
  }
  const auto* ap = std::get_if<AxisPlane>(&spec.set);
  if (!ap)
    throw unsupported_operation("discretize_constraint: predicate regions are not discretizable");
  if (dim == 1) {
    Vec p = Vec::Constant(1, ap->level);
    out.push_back({p, target_value(spec.target, p)});
    return out;
  }
  if (dim != 2)
    throw unsupported_operation("discretize_constraint: axis-plane sampling only in dimension <= 2");
  const Index free_axis = ap->axis == 0 ? 1 : 0;
  const Vec ts = n_points == 1 ? Vec::Constant(1, 0.5 * (lo + hi)) : linspace(lo, hi, n_points);
  for (Index i = 0; i < ts.size(); ++i) {
    Vec p(2);
    p(ap->axis) = ap->level;
    p(free_axis) = ts(i);
    out.push_back({p, target_value(spec.target, p)});
  }
  return out;
}

namespace {

GeneratedExperiment generate(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
  GeneratedExperiment gen;
  switch (cfg.experiment) {
    case Experiment::Sinc:
      gen = gen_sinc(cfg.n_train, cfg.n_test, cfg.noise_sigma, trial_seed);
      break;
    case Experiment::PdeDirichlet:
      gen = gen_pde(BoundaryKind::Dirichlet, cfg.n_train, cfg.n_test, cfg.noise_sigma, trial_seed);
      break;
    case Experiment::PdeNeumann:
    case Experiment::PdeNeumannIntegrated:
      gen = gen_pde(BoundaryKind::Neumann, cfg.n_train, cfg.n_test, cfg.noise_sigma, trial_seed);
      break;
  }
  for (auto& spec : gen.specs) spec.gamma = cfg.gamma;
  return gen;
}

std::vector<PointConstraint> gis_constraints(const ExperimentConfig& cfg,
                                             const GeneratedExperiment& gen) {
  std::vector<PointConstraint> points;
  for (const auto& spec : gen.specs) {
    auto part = discretize_constraint(spec, cfg.n_pwc, gen.train.X.cols());
    points.insert(points.end(), part.begin(), part.end());
  }
  return points;
}

GcnnModel fit_by_method(const ExperimentConfig& cfg, const GeneratedExperiment& gen,
                        const RbfModel& base) {
  switch (cfg.method) {
    case Method::Rbfnn: {
      RbfModel fitted = fit_unconstrained(gen.train.X, gen.train.y, base);
      return GcnnModel{std::move(fitted), {}, Scheme::Unconstrained};
    }
    case Method::GisLagrange:
      return fit_gis_lagrange(gen.train.X, gen.train.y, base, gis_constraints(cfg, gen));
    case Method::GcnnEc: {
      const bool derivative =
          !gen.specs.empty() && has_derivative_form(gen.specs.front().target);
      return derivative ? fit_lis_derivative(gen.train.X, gen.train.y, base, gen.specs)
                        : fit_lis_value(gen.train.X, gen.train.y, base, gen.specs);
    }
    case Method::GcnnEcI:
      return fit_lis_integrated(gen.train.X, gen.train.y, base, gen.specs);
  }
  throw std::logic_error("unknown method");
}

double constraint_mse(const ExperimentConfig& cfg, const GeneratedExperiment& gen,
                      const GcnnModel& model) {
  if (cfg.experiment == Experiment::Sinc) {
    // value residuals at the interpolation points themselves
    std::vector<PointConstraint> points = gis_constraints(cfg, gen);
    Mat P(static_cast<Index>(points.size()), gen.train.X.cols());
    Vec expected(P.rows());
    for (Index i = 0; i < P.rows(); ++i) {
      P.row(i) = points[static_cast<std::size_t>(i)].point.transpose();
      expected(i) = points[static_cast<std::size_t>(i)].value;
    }
    return mse(predict_constrained(model, P), expected);
  }
  const Mat P = boundary_grid(kBoundaryPoints);
  const ConstraintSpec& spec = gen.specs.front();
  if (cfg.experiment == Experiment::PdeDirichlet) {
    Vec expected(P.rows());
    for (Index i = 0; i < P.rows(); ++i)
      expected(i) = target_value(spec.target, P.row(i).transpose());
    return mse(predict_constrained(model, P), expected);
  }
  // Neumann: derivative residuals along the constrained axis
  const Index axis = target_axis(spec.target);
  Vec expected(P.rows());
  for (Index i = 0; i < P.rows(); ++i)
    expected(i) = target_slope(spec.target, P.row(i).transpose());
  return mse(predict_constrained_derivative(model, P, axis), expected);
}

struct TrialOutcome {
  double mse_cstr = 0.0;
  double mse_test = 0.0;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, Index trial) {
  const GeneratedExperiment gen = generate(cfg, cfg.seed + static_cast<std::uint64_t>(trial));
  const RbfModel base = init_centers(gen.train.X, cfg.n_rbf, cfg.policy, cfg.seed);
  const GcnnModel model = fit_by_method(cfg, gen, base);
  TrialOutcome out;
  out.mse_test = mse(predict_constrained(model, gen.test.X), gen.test.y);
  out.mse_cstr = constraint_mse(cfg, gen, model);
  return out;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ExperimentReport report;
  report.config = cfg;
  report.mse_cstr.resize(static_cast<std::size_t>(cfg.trials));
  report.mse_test.resize(static_cast<std::size_t>(cfg.trials));

  const Index workers = std::min<Index>(cfg.parallel, cfg.trials);
  if (workers <= 1) {
    for (Index t = 0; t < cfg.trials; ++t) {
      const TrialOutcome o = run_trial(cfg, t);
      report.mse_cstr[static_cast<std::size_t>(t)] = o.mse_cstr;
      report.mse_test[static_cast<std::size_t>(t)] = o.mse_test;
    }
  } else {
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (Index w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (Index t = w; t < cfg.trials; t += workers) {
          try {
            const TrialOutcome o = run_trial(cfg, t);
            report.mse_cstr[static_cast<std::size_t>(t)] = o.mse_cstr;
            report.mse_test[static_cast<std::size_t>(t)] = o.mse_test;
          } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  const auto stats = [&](const std::vector<double>& v, double& mean, double& stddev) {
    KahanSum sum;
    for (double x : v) sum.add(x);
    mean = sum.value() / static_cast<double>(v.size());
    KahanSum dev;
    for (double x : v) dev.add((x - mean) * (x - mean));
    stddev = std::sqrt(dev.value() / static_cast<double>(v.size()));
  };
  stats(report.mse_cstr, report.mean_cstr, report.std_cstr);
  stats(report.mse_test, report.mean_test, report.std_test);
  return report;
}

std::string report_csv(const ExperimentReport& report) {
  const ExperimentConfig& cfg = report.config;
  std::string out;
  out += std::string("# experiment=") + experiment_name(cfg.experiment) + "\n";
  out += std::string("# method=") + method_name(cfg.method) + "\n";
  out += "# n_train=" + std::to_string(cfg.n_train) + "\n";
  out += "# n_test=" + std::to_string(cfg.n_test) + "\n";
  out += "# n_rbf=" + std::to_string(cfg.n_rbf) + "\n";
  out += "# gamma=" + fmt(cfg.gamma) + "\n";
  out += "# noise_sigma=" + fmt(cfg.noise_sigma) + "\n";
  out += "# trials=" + std::to_string(cfg.trials) + "\n";
  out += "# seed=" + std::to_string(cfg.seed) + "\n";
  out += std::string("# centers=") +
         (cfg.policy.kind == CenterPolicy::Kind::UniformGrid    ? "uniform-grid"
          : cfg.policy.kind == CenterPolicy::Kind::KMeans       ? "k-means"
                                                                : "sample-subset") +
         "\n";
  if (cfg.policy.width_rule == CenterPolicy::WidthRule::Constant)
    out += "# width_rule=constant sigma=" + fmt(cfg.policy.constant_sigma) + "\n";
  else
    out += "# width_rule=nn-scaled width_factor=" + fmt(cfg.policy.nn_factor) + "\n";
  out += "trial,mse_cstr,mse_test\n";
  for (std::size_t t = 0; t < report.mse_cstr.size(); ++t)
    out += std::to_string(t) + "," + fmt(report.mse_cstr[t]) + "," + fmt(report.mse_test[t]) + "\n";
  out += "mean," + fmt(report.mean_cstr) + "," + fmt(report.mean_test) + "\n";
  out += "std," + fmt(report.std_cstr) + "," + fmt(report.std_test) + "\n";
  return out;
}

PairedFit fit_trial(const ExperimentConfig& cfg, Index trial) {
  validate_config(cfg);
  PairedFit out;
  out.data = generate(cfg, cfg.seed + static_cast<std::uint64_t>(trial));
  const RbfModel base = init_centers(out.data.train.X, cfg.n_rbf, cfg.policy, cfg.seed);
  out.unconstrained = fit_unconstrained(out.data.train.X, out.data.train.y, base);
  out.constrained = fit_by_method(cfg, out.data, base);
  return out;
}

}  // namespace gcnn
