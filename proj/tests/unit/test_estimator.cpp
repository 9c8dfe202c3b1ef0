#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "wsrk/error.hpp"
#include "wsrk/estimator.hpp"
#include "wsrk/problems.hpp"

using namespace wsrk;

namespace {

// dX = dW, X_0 = 0, f(x) = x^2, E f(X_t) = t. Euler-Maruyama with three-point
// increments has no bias at t = h = 1.
NamedProblem brownian_square() {
    NamedProblem np;
    np.name = "brownian";
    np.sde.dim = 1;
    np.sde.noise_dim = 1;
    np.sde.drift = [](double, std::span<const double>, std::span<double> out) { out[0] = 0.0; };
    np.sde.diffusion_column = [](double, std::span<const double>, std::size_t,
                                 std::span<double> out) { out[0] = 1.0; };
    np.sde.x0 = {0.0};
    np.sde.T = 1.0;
    np.sde.exact_functional = [](double t) { return t; };
    np.f = [](std::span<const double> x) { return x[0] * x[0]; };
    np.t_eval = 1.0;
    return np;
}

std::vector<std::pair<double, double>> points(const std::vector<double>& hs,
                                              const std::vector<double>& mus) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < hs.size(); ++i) out.emplace_back(hs[i], mus[i]);
    return out;
}

}  // namespace

TEST(Estimate, NoiselessConstantProblemHasZeroError) {
    const NamedProblem np = problem_linear(0.0, 0.0, 1, 1.7);
    const WeakErrorReport r =
        estimate(np, Scheme::from_name("RDI2WM"), np.f, 1.0, 0.25, 40, 3);
    EXPECT_NEAR(r.mu_hat, 0.0, 1e-15);
    EXPECT_LE(r.sigma2_mu, 1e-30);
    EXPECT_NEAR(r.ci_a, 0.0, 1e-15);
    EXPECT_NEAR(r.ci_b, 0.0, 1e-15);
    EXPECT_NEAR(r.u_Mh, 1.7, 1e-15);
    EXPECT_EQ(r.M, 40u);
    EXPECT_EQ(r.diverged, 0u);
}

TEST(Estimate, BatchMeansStatistics) {
    // Recompute the statistics from the per-trajectory values.
    const NamedProblem np = problem_nonlinear();
    const Scheme s = Scheme::from_name("RDI1WM");
    const std::uint64_t M = 200, B = 20, seed = 77;
    const WeakErrorReport r = estimate(np, s, np.f, 2.0, 0.5, M, seed);

    PathSimulator sim(*s.tableau, np.sde);
    const auto grid = uniform_grid(0.0, 2.0, 0.5);
    std::vector<double> batch_sum(B, 0.0);
    double total = 0.0;
    for (std::uint64_t i = 0; i < M; ++i) {
        RandomStream stream = RandomStream::derive(seed, i);
        const double v = np.f(sim.run(grid, stream));
        batch_sum[i / (M / B)] += v;
        total += v;
    }
    EXPECT_NEAR(r.u_Mh, total / M, 1e-12);
    EXPECT_NEAR(r.mu_hat, total / M - 0.0, 1e-12);
    double mean = 0.0;
    for (double& b : batch_sum) {
        b /= static_cast<double>(M / B);
        mean += b / B;
    }
    double ss = 0.0;
    for (double b : batch_sum) ss += (b - mean) * (b - mean);
    const double sigma2 = ss / (B - 1) / B;
    EXPECT_NEAR(r.sigma2_mu, sigma2, 1e-12 * sigma2);
    // t_{0.95, 19} = 1.729133.
    EXPECT_NEAR(r.ci_b - r.mu_hat, 1.729133 * std::sqrt(sigma2), 1e-5);
    EXPECT_NEAR(r.mu_hat - r.ci_a, r.ci_b - r.mu_hat, 1e-15);
    EXPECT_LE(r.ci_a, r.mu_hat);
    EXPECT_LE(r.mu_hat, r.ci_b);
}

TEST(Estimate, StudentQuantile) {
    EXPECT_NEAR(student_t_95(19.0), 1.729133, 1e-6);
    EXPECT_NEAR(student_t_95(1.0), 6.313752, 1e-6);
    EXPECT_NEAR(student_t_95(1e7), 1.644854, 1e-6);
}

TEST(Estimate, ResultsDoNotDependOnThreadCount) {
    const NamedProblem np = problem_2d();
    const Scheme s = Scheme::from_name("RDI3WM");
    EstimateOptions o;
    o.threads = 1;
    const WeakErrorReport one = estimate(np, s, np.f, 4.0, 0.5, 2000, 11, o);
    for (unsigned t : {2u, 3u, 8u, 0u}) {
        o.threads = t;
        const WeakErrorReport r = estimate(np, s, np.f, 4.0, 0.5, 2000, 11, o);
        EXPECT_EQ(r.u_Mh, one.u_Mh) << t;
        EXPECT_EQ(r.sigma2_mu, one.sigma2_mu) << t;
        EXPECT_EQ(r.ci_a, one.ci_a) << t;
    }
}

TEST(Estimate, ExtrapolatedSchemeMatchesDirectComputation) {
    const NamedProblem np = problem_nonlinear();
    const WeakErrorReport r = estimate(np, Scheme::from_name("EXEM"), np.f, 2.0, 0.5, 400, 5);
    const double direct = extrapolated_em(np.sde, np.f, 2.0, 0.5, 400, 5);
    EXPECT_NEAR(r.u_Mh, direct, 1e-12 * (1.0 + std::fabs(direct)));
}

TEST(Estimate, ExtrapolationBeatsEulerOnNonlinearProblem) {
    const NamedProblem np = problem_nonlinear();
    const WeakErrorReport em = estimate(np, Scheme::from_name("EM"), np.f, 2.0, 0.25, 200000, 8);
    const WeakErrorReport ex =
        estimate(np, Scheme::from_name("EXEM"), np.f, 2.0, 0.25, 200000, 8);
    EXPECT_LT(std::fabs(ex.mu_hat), std::fabs(em.mu_hat));
}

TEST(Estimate, ConfidenceIntervalCoverage) {
    const NamedProblem np = brownian_square();
    const Scheme em = Scheme::from_name("EM");
    int covered = 0;
    const int studies = 200;
    for (int k = 0; k < studies; ++k) {
        const WeakErrorReport r = estimate(np, em, np.f, 1.0, 1.0, 2000, 1000 + k);
        if (r.ci_a <= 0.0 && 0.0 <= r.ci_b) ++covered;
    }
    EXPECT_GE(covered, 170) << covered << " of " << studies;
}

TEST(Estimate, Preconditions) {
    const NamedProblem np = problem_nonlinear();
    const Scheme s = Scheme::from_name("EM");
    EXPECT_THROW(estimate(np, s, np.f, 2.0, 0.5, 101, 1), InvalidArgument);
    EstimateOptions o;
    o.batches = 1;
    EXPECT_THROW(estimate(np, s, np.f, 2.0, 0.5, 100, 1, o), InvalidArgument);
    EXPECT_THROW(estimate(np, s, np.f, 2.0, 0.3, 100, 1), InvalidArgument);
    EXPECT_THROW(estimate(np, s, np.f, 3.0, 0.5, 100, 1), InvalidArgument);
    NamedProblem no_exact = np;
    no_exact.sde.exact_functional = nullptr;
    EXPECT_THROW(estimate(no_exact, s, np.f, 2.0, 0.5, 100, 1), InvalidArgument);
    EXPECT_THROW(Scheme::from_name("nope"), UnknownName);
}

TEST(Estimate, DivergenceFailsUnlessAllowed) {
    NamedProblem np = problem_nonlinear();
    // Blows up once the path passes 3.
    np.sde.drift = [](double t, std::span<const double> x, std::span<double> out) {
        out[0] = (t > 0.0 && x[0] > 3.0) ? HUGE_VAL : 0.5 * x[0] + std::sqrt(x[0] * x[0] + 1.0);
    };
    const Scheme s = Scheme::from_name("EM");
    try {
        estimate(np, s, np.f, 2.0, 0.5, 200, 4);
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_GT(e.count(), 0u);
    }
    EstimateOptions o;
    o.fail_on_divergence = false;
    const WeakErrorReport r = estimate(np, s, np.f, 2.0, 0.5, 200, 4, o);
    EXPECT_GT(r.diverged, 0u);
    EXPECT_LT(r.diverged, 200u);
    EXPECT_TRUE(std::isfinite(r.u_Mh));
}

TEST(FitOrder, SyntheticLines) {
    EXPECT_NEAR(fit_order(points({0.5, 0.25, 0.125}, {0.25, 0.0625, 0.015625})), 2.0, 1e-12);
    EXPECT_NEAR(fit_order(points({0.5, 0.25, 0.125, 0.0625}, {-3.0, -1.5, -0.75, -0.375})), 1.0,
                1e-12);
    for (double order : {0.3, 1.7, 3.2}) {
        std::vector<double> hs, mus;
        for (int k = 0; k < 6; ++k) {
            hs.push_back(std::ldexp(1.0, -k));
            mus.push_back(0.37 * std::pow(hs.back(), order));
        }
        EXPECT_NEAR(fit_order(points(hs, mus)), order, 1e-12);
    }
}

TEST(FitOrder, ReferenceErrorSequences) {
    const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625};
    EXPECT_NEAR(fit_order(points(hs, {8.797e-01, 7.705e-01, 4.825e-01, 2.691e-01})), 0.58, 0.01);
    EXPECT_NEAR(fit_order(points(hs, {3.760e-01, 9.454e-02, 2.318e-02, 5.816e-03})), 2.01, 0.01);
}

TEST(FitOrder, Preconditions) {
    EXPECT_THROW(fit_order(points({0.5}, {0.1})), InvalidArgument);
    EXPECT_THROW(fit_order(points({0.5, 0.5}, {0.1, 0.2})), InvalidArgument);
    EXPECT_THROW(fit_order(points({0.5, 0.25}, {0.1, 0.0})), InvalidArgument);
}

TEST(RunStudy, ZeroErrorPointIsExcludedWithWarning) {
    // Euler on y' = y over [0, 1]: Y = (1 + h)^(1/h); the exact value is set to
    // the h = 1/2 result, so that point has mu_hat = 0.
    NamedProblem np = problem_linear(1.0, 0.0, 1);
    np.sde.exact_functional = [](double) { return 2.25; };
    const std::vector<Scheme> schemes{Scheme::from_name("EM")};
    const std::vector<double> hs{1.0, 0.5, 0.25};
    const auto studies = run_study(np, schemes, np.f, 1.0, hs, 20, 1);
    ASSERT_EQ(studies.size(), 1u);
    ASSERT_EQ(studies[0].points.size(), 3u);
    EXPECT_EQ(studies[0].points[1].mu_hat, 0.0);
    ASSERT_EQ(studies[0].warnings.size(), 1u);
    const double expected = fit_order(points({1.0, 0.25}, {2.0 - 2.25, std::pow(1.25, 4) - 2.25}));
    EXPECT_DOUBLE_EQ(studies[0].fitted_order, expected);
}

TEST(RunStudy, SingleStepSizeCannotBeFitted) {
    const NamedProblem np = problem_linear(1.0, 0.5, 1);
    const std::vector<Scheme> schemes{Scheme::from_name("EM")};
    const std::vector<double> hs{0.5};
    EXPECT_THROW(run_study(np, schemes, np.f, 1.0, hs, 20, 1), InvalidArgument);
}

TEST(RunStudy, DeterministicProblemRecoversThirdOrder) {
    const NamedProblem np = problem_linear(1.0, 0.0, 1);
    const std::vector<Scheme> schemes{Scheme::from_name("RDI3WM")};
    const std::vector<double> hs{0.25, 0.125, 0.0625, 0.03125};
    const auto studies = run_study(np, schemes, np.f, 1.0, hs, 20, 1);
    EXPECT_GE(studies[0].fitted_order, 2.8);
    EXPECT_LE(studies[0].fitted_order, 3.2);
}

TEST(RunStudy, CsvFormat) {
    const NamedProblem np = problem_linear(1.0, 1.0, 2);
    const std::vector<Scheme> schemes{Scheme::from_name("EM"), Scheme::from_name("RDI2WM")};
    const std::vector<double> hs{0.5, 0.25};
    const auto studies = run_study(np, schemes, np.f, 1.0, hs, 1000, 2);
    const std::string errors = format_errors_csv(studies);
    EXPECT_EQ(errors.substr(0, errors.find('\n')),
              "scheme,problem,h,M,u_Mh,mu_hat,sigma2_mu,ci_a,ci_b,diverged");
    EXPECT_NE(errors.find("\nEM,\"linear:a=1,b=1,p=2\",5.00000E-01,1000,"), std::string::npos);
    EXPECT_EQ(std::count(errors.begin(), errors.end(), '\n'), 5);
    const std::string orders = format_orders_csv(studies);
    EXPECT_EQ(orders.substr(0, orders.find('\n')), "scheme,problem,fitted_order");
    EXPECT_EQ(std::count(orders.begin(), orders.end(), '\n'), 3);
}
