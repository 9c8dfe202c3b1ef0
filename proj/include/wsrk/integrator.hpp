#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wsrk/random.hpp"
#include "wsrk/tableau.hpp"

namespace wsrk {

/// a(t, x) written into `out` (length d).
using DriftFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;
/// Column j of b(t, x) written into `out` (length d).
using DiffusionColumnFn =
    std::function<void(double t, std::span<const double> x, std::size_t j, std::span<double> out)>;
/// Scalar functional f(x) whose expectation is estimated.
using Functional = std::function<double(std::span<const double> x)>;

/// Ito SDE dX = a(t, X) dt + b(t, X) dW on [t0, T] with d-dimensional state
/// and m-dimensional Wiener process.
struct SdeProblem {
    std::size_t dim = 1;
    std::size_t noise_dim = 1;
    DriftFn drift;
    DiffusionColumnFn diffusion_column;
    Vector x0;
    double t0 = 0.0;
    double T = 1.0;
    /// E f(X_t) when known in closed form; empty otherwise.
    std::function<double(double t)> exact_functional;
};

/// Throws InvalidArgument when dimensions, callables or the interval are bad.
void check_problem(const SdeProblem& p);

struct StepContext {
    double t = 0.0;
    double h = 0.0;
    std::span<const double> y;
    const WeakIncrementBatch* increments = nullptr;
};

/// Which stage evaluations a tableau actually needs. A stage is skipped
/// when every coefficient that could carry its value downstream is zero.
struct StagePlan {
    std::vector<bool> drift;      // a(t + c0_i h, H_i^(0))
    std::vector<bool> diffusion;  // b^k(t + c1_i h, H_i^(k)), all k
    std::vector<bool> auxiliary;  // b^k(t + c2_i h, Hhat_i^(l)), k != l
    bool pairs = false;           // off-diagonal Ihat_(k,l) read
};

StagePlan plan_stages(const Tableau& t, std::size_t noise_dim);

/// Evaluations per step under the stepper's memoisation rules.
struct EvaluationCost {
    std::uint64_t drift_evals = 0;
    std::uint64_t diffusion_column_evals = 0;
    std::uint64_t random_draws = 0;

    bool operator==(const EvaluationCost&) const = default;
};

EvaluationCost evaluation_cost(const Tableau& t, std::size_t noise_dim);

enum class IncrementMode { ThreePoint, Gaussian };

/// One-step map of an explicit SRK scheme with preallocated workspace.
///
/// Stages are computed in index order. b^k at H_i^(k) is evaluated once per
/// (i, k) and shared by the beta1/beta2 sums and every later stage;
/// b^k at Hhat_i^(l) once per (i, k, l), k != l, shared by beta3/beta4.
class SrkStepper {
public:
    SrkStepper(const Tableau& tableau, const SdeProblem& problem);

    /// Writes Y_{n+1} into `out`. Throws DivergenceError on a non-finite result.
    void step(double t, double h, std::span<const double> y, const WeakIncrementBatch& inc,
              std::span<double> out);

    const StagePlan& plan() const noexcept { return plan_; }
    const Tableau& tableau() const noexcept { return tableau_; }

private:
    Tableau tableau_;
    const SdeProblem& problem_;
    StagePlan plan_;
    std::size_t d_, m_, s_;

    std::vector<double> drift_vals_;      // s * d
    std::vector<double> diffusion_vals_;  // (s * m) * d
    std::vector<double> stage_, column_;  // d each
};

Vector srk_step(const Tableau& tableau, const SdeProblem& problem, const StepContext& ctx);

/// Reusable trajectory runner for Monte Carlo loops.
class PathSimulator {
public:
    PathSimulator(const Tableau& tableau, const SdeProblem& problem,
                  IncrementMode mode = IncrementMode::ThreePoint);

    /// Integrates from (problem.t0, problem.x0) over the given step sizes,
    /// drawing a fresh batch per step from `stream`.
    const Vector& run(std::span<const double> steps, RandomStream& stream);

    const SrkStepper& stepper() const noexcept { return stepper_; }

private:
    const SdeProblem& problem_;
    SrkStepper stepper_;
    IncrementMode mode_;
    WeakIncrementBatch batch_;
    Vector y_, next_;
};

/// Folds the step over `steps`, which must sum to T - t0.
Vector simulate_path(const Tableau& tableau, const SdeProblem& problem,
                     std::span<const double> steps, RandomStream& stream,
                     IncrementMode mode = IncrementMode::ThreePoint);

/// Uniform grid of n steps covering [t0, t_end]. Throws InvalidArgument
/// unless h divides the interval (to 1e-9 relative on the step count).
std::vector<double> uniform_grid(double t0, double t_end, double h);

/// Exact E f(Y_1) of one step from (t0, y0) by summing over the finite
/// support of the increments. Needs noise_dim <= 4.
double exact_one_step_expectation(const Tableau& tableau, const SdeProblem& problem,
                                  const Functional& f, double t0, std::span<const double> y0,
                                  double h);

/// Stream of trajectory `index` at extrapolation level `level` (0: step h,
/// 1: step h/2). Both levels are independent.
RandomStream extrapolation_stream(std::uint64_t seed, std::uint64_t index, int level);

/// 2 E f(Z^{h/2}) - E f(Z^h) with Euler-Maruyama paths, each level estimated
/// from M independent trajectories.
double extrapolated_em(const SdeProblem& problem, const Functional& f, double t_eval, double h,
                       std::uint64_t M, std::uint64_t seed);

}  // namespace wsrk
