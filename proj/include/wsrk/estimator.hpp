#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wsrk/integrator.hpp"
#include "wsrk/problems.hpp"
#include "wsrk/tableau.hpp"

namespace wsrk {

/// A scheme the estimator can run: an SRK tableau, or Euler-Maruyama with
/// Richardson extrapolation (EXEM), which is not itself an SRK tableau.
struct Scheme {
    std::string name;
    std::optional<Tableau> tableau;  // empty for EXEM

    bool extrapolated() const noexcept { return !tableau.has_value(); }

    static Scheme from_tableau(Tableau t);
    /// Named SRK schemes plus "EXEM". Throws UnknownName.
    static Scheme from_name(std::string_view name);
};

struct EstimateOptions {
    std::size_t batches = 20;
    unsigned threads = 0;  // 0: hardware concurrency; never changes results
    bool fail_on_divergence = true;
    IncrementMode increments = IncrementMode::ThreePoint;
};

/// Mean error of a Monte Carlo estimate of E f(X_t) at one step size.
struct WeakErrorReport {
    double h = 0.0;
    std::uint64_t M = 0;
    double u_Mh = 0.0;       // sample average of f(Y_t)
    double mu_hat = 0.0;     // u_Mh - E f(X_t)
    double sigma2_mu = 0.0;  // empirical variance of the mean error (batch means)
    double ci_a = 0.0;       // 90% confidence interval
    double ci_b = 0.0;
    std::uint64_t diverged = 0;
};

/// Runs M trajectories split into `batches` equal batches; trajectory i
/// draws from RandomStream::derive(seed, i), and batches are summed in
/// trajectory order, so results do not depend on the thread count.
///
/// sigma2_mu is the sample variance of the batch means divided by the number
/// of batches; the interval is mu_hat +- t_{0.95, batches-1} sqrt(sigma2_mu).
WeakErrorReport estimate(const NamedProblem& problem, const Scheme& scheme, const Functional& f,
                         double t_eval, double h, std::uint64_t M, std::uint64_t seed,
                         const EstimateOptions& options = {});

/// 0.95 quantile of Student's t distribution.
double student_t_95(double degrees_of_freedom);

/// Least-squares slope of log2 |mu| against log2 h over (h, mu) points.
/// Throws InvalidArgument with fewer than two distinct step sizes or when any
/// |mu| is zero.
double fit_order(std::span<const std::pair<double, double>> points);

struct ConvergenceStudy {
    std::string scheme;
    std::string problem;
    std::vector<WeakErrorReport> points;
    double fitted_order = 0.0;
    std::vector<std::string> warnings;
};

/// estimate() for every scheme and step size, then fit_order per scheme.
/// Points with mu_hat == 0 are left out of the regression with a warning.
std::vector<ConvergenceStudy> run_study(const NamedProblem& problem,
                                        std::span<const Scheme> schemes, const Functional& f,
                                        double t_eval, std::span<const double> step_sizes,
                                        std::uint64_t M, std::uint64_t seed,
                                        const EstimateOptions& options = {});

/// Header "scheme,problem,h,M,u_Mh,mu_hat,sigma2_mu,ci_a,ci_b,diverged".
std::string format_errors_csv(std::span<const ConvergenceStudy> studies);
/// Header "scheme,problem,fitted_order".
std::string format_orders_csv(std::span<const ConvergenceStudy> studies);

}  // namespace wsrk
