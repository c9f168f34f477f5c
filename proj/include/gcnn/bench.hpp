#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gcnn/model.hpp"
#include "gcnn/targets.hpp"

namespace gcnn {

enum class Experiment { Sinc, PdeDirichlet, PdeNeumann, PdeNeumannIntegrated };
enum class Method { Rbfnn, GisLagrange, GcnnEc, GcnnEcI };

const char* experiment_name(Experiment e);
Experiment experiment_from_name(std::string_view name);
const char* method_name(Method m);
Method method_from_name(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::Sinc;
  Method method = Method::GcnnEc;
  Index n_train = 30;
  Index n_test = 500;
  Index n_rbf = 11;
  double gamma = 1e-4;
  double noise_sigma = 0.0;
  Index trials = 1;
  std::uint64_t seed = 0;
  CenterPolicy policy;
  Index n_pwc = 5;      // point-wise constraint count handed to the GIS baseline
  Index grid_n = 1001;  // analysis grid resolution
  Index parallel = 1;   // worker threads for independent trials
};

/// Flat key=value config format, '#' comments; unknown keys are rejected.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& config);

/// Analytic reference surface of the PDE experiments: e^{-x1} (x1 + x2^3).
inline double pde_solution(double x1, double x2) { return std::exp(-x1) * (x1 + cube(x2)); }

/// d/dx2 of the reference surface restricted to the boundary x1 = 0.
inline double pde_boundary_slope(double x2) { return 3.0 * x2 * x2; }

struct GeneratedExperiment {
  Dataset train;
  Dataset test;
  std::vector<ConstraintSpec> specs;  // gamma left at its default; stamped from config
};

/// Sinc target on [-10, 10]: evenly spaced training data, uniformly random
/// test data, and the two interpolation-point constraints f(0) = 1 and
/// f(pi/2) = 2/pi. The noise corrupts the function itself, so training and
/// test targets both carry it.
GeneratedExperiment gen_sinc(Index n_train, Index n_test, double noise_sigma, std::uint64_t seed);

enum class BoundaryKind { Dirichlet, Neumann };

/// PDE surface on [0,1]^2: an even sqrt(n_train)^2 training grid with noisy
/// targets, plus a test set of n_test - 21 random interior points and 21 even
/// points on the boundary x1 = 0 with clean targets. The Dirichlet spec
/// prescribes x2^3 on the boundary; the Neumann spec prescribes d/dx2 = 3 x2^2
/// together with its antiderivative.
GeneratedExperiment gen_pde(BoundaryKind kind, Index n_train, Index n_test, double noise_sigma,
                            std::uint64_t seed);

/// Point-wise samples of a constraint for the GIS baseline: point lists return
/// their points; an axis-plane in dimension 2 is sampled evenly over
/// [lo, hi] along its free coordinate (midpoint when n_points == 1).
std::vector<PointConstraint> discretize_constraint(const ConstraintSpec& spec, Index n_points,
                                                   Index dim, double lo = 0.0, double hi = 1.0);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<double> mse_cstr;
  std::vector<double> mse_test;
  double mean_cstr = 0.0, std_cstr = 0.0;
  double mean_test = 0.0, std_test = 0.0;
};

/// Runs config.trials independent trials. Trial t reseeds the generators with
/// seed + t and regenerates both training noise and test data; centers and
/// widths are fixed across trials (they depend only on the deterministic
/// training inputs and the base seed). Statistics use compensated summation
/// and the population standard deviation.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// CSV: config echo as '#' comments, a trial,mse_cstr,mse_test header, one row
/// per trial, then mean and std summary rows.
std::string report_csv(const ExperimentReport& report);

/// One fitted trial plus its paired unconstrained model (shared centers and
/// widths), for the analysis diagnostics and the fit/predict commands.
struct PairedFit {
  GeneratedExperiment data;
  RbfModel unconstrained;
  GcnnModel constrained;
};
PairedFit fit_trial(const ExperimentConfig& config, Index trial);

/// Boundary evaluation grid (0, x2) with x2 even over [0, 1].
Mat boundary_grid(Index n);

}  // namespace gcnn
