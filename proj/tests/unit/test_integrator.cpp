#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "oracle.hpp"
#include "wsrk/error.hpp"
#include "wsrk/families.hpp"
#include "wsrk/integrator.hpp"
#include "wsrk/problems.hpp"

using namespace wsrk;

namespace {

Tableau random_explicit_tableau(std::mt19937_64& g, std::size_t s) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tableau t = Tableau::zero(s, "random");
    for (Vector* v : {&t.alpha, &t.beta1, &t.beta2, &t.beta3, &t.beta4})
        for (double& x : *v) x = u(g);
    for (int q = 0; q < 3; ++q)
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < i; ++j) {
                t.a_matrix(q)(i, j) = u(g);
                t.b_matrix(q)(i, j) = u(g);
            }
    t.refresh_nodes();
    return t;
}

SdeProblem ode(double rate) {
    SdeProblem p = problem_linear(rate, 0.0, 1).sde;
    return p;
}

double deterministic_slope(const Tableau& t) {
    const SdeProblem p = ode(1.0);
    std::vector<double> hs, errs;
    for (int k = 2; k <= 8; ++k) {
        const double h = std::ldexp(1.0, -k);
        RandomStream stream(1);
        const Vector y = simulate_path(t, p, uniform_grid(0.0, 1.0, h), stream);
        hs.push_back(h);
        errs.push_back(y[0] - std::exp(1.0));
    }
    return oracle::slope(hs, errs);
}

}  // namespace

TEST(SrkStep, MatchesTermByTermReference) {
    std::mt19937_64 g(17);
    std::vector<Tableau> tableaux;
    for (const std::string& n : named_scheme_names()) tableaux.push_back(named_scheme(n));
    for (std::size_t s = 1; s <= 4; ++s)
        for (int k = 0; k < 3; ++k) tableaux.push_back(random_explicit_tableau(g, s));

    for (std::size_t m = 1; m <= 3; ++m) {
        const SdeProblem p = oracle::coupled_problem(m);
        for (const Tableau& t : tableaux) {
            for (int trial = 0; trial < 10; ++trial) {
                RandomStream stream(1000 * m + trial);
                const double h = 0.05 + 0.1 * trial;
                const WeakIncrementBatch inc = draw(m, h, stream);
                const Vector y{0.3 - 0.1 * trial, 0.2 * trial};
                const double t0 = 0.1 * trial;
                const Vector got = srk_step(t, p, StepContext{t0, h, y, &inc});
                const Vector want = oracle::reference_step(t, p, t0, h, y, inc.ihat, inc.v);
                for (std::size_t x = 0; x < 2; ++x)
                    EXPECT_NEAR(got[x], want[x], 1e-13 * (1.0 + std::fabs(want[x])))
                        << t.name << " m=" << m << " trial " << trial;
            }
        }
    }
}

TEST(SrkStep, SimpsonTableauReproducesCubicTaylorPolynomial) {
    const SdeProblem p = ode(1.0);
    const Tableau t = named_scheme("RDI4WM");
    RandomStream stream(3);
    const WeakIncrementBatch inc = draw(1, 0.1, stream);
    const Vector y1 = srk_step(t, p, StepContext{0.0, 0.1, p.x0, &inc});
    EXPECT_NEAR(y1[0], 1.0 + 0.1 + 0.01 / 2.0 + 0.001 / 6.0, 1e-15);
}

TEST(SrkStep, EulerMaruyamaSingleStep) {
    const SdeProblem p = problem_linear(0.0, 1.0, 1).sde;
    WeakIncrementBatch inc;
    inc.h = 1.0;
    inc.ihat = {std::sqrt(3.0)};
    inc.v = Matrix(1);
    inc.v(0, 0) = -1.0;
    const Vector y1 = srk_step(named_scheme("EM"), p, StepContext{0.0, 1.0, p.x0, &inc});
    EXPECT_DOUBLE_EQ(y1[0], 1.0 + std::sqrt(3.0));
}

TEST(SrkStep, CoefficientBehindZeroWeightIsIrrelevant) {
    const SdeProblem p = problem_2d().sde;
    Tableau t = named_scheme("RDI2WM");
    ASSERT_EQ(t.alpha[2], 0.0);
    Tableau changed = t;
    changed.B0(2, 0) = 3.7;
    for (int trial = 0; trial < 50; ++trial) {
        RandomStream stream(trial);
        const WeakIncrementBatch inc = draw(2, 0.25, stream);
        const Vector y{1.0 + 0.1 * trial, -0.5};
        const Vector a = srk_step(t, p, StepContext{0.0, 0.25, y, &inc});
        const Vector b = srk_step(changed, p, StepContext{0.0, 0.25, y, &inc});
        EXPECT_EQ(a, b);
    }
}

TEST(SrkStep, DeterministicReductionIgnoresStochasticCoefficients) {
    SdeProblem p = oracle::coupled_problem(2);
    p.diffusion_column = [](double, std::span<const double>, std::size_t, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
    };
    for (const std::string& name : named_scheme_names()) {
        const Tableau t = named_scheme(name);
        Tableau stripped = Tableau::zero(t.stages);
        stripped.alpha = t.alpha;
        stripped.A0 = t.A0;
        stripped.refresh_nodes();
        RandomStream stream(8);
        const WeakIncrementBatch inc = draw(2, 0.2, stream);
        const Vector y{0.4, 0.1};
        EXPECT_EQ(srk_step(t, p, StepContext{0.3, 0.2, y, &inc}),
                  srk_step(stripped, p, StepContext{0.3, 0.2, y, &inc}))
            << name;
    }
}

TEST(SrkStep, NonFiniteResultRaisesDivergence) {
    SdeProblem p = problem_linear(1.0, 0.0, 1).sde;
    p.drift = [](double, std::span<const double> x, std::span<double> out) {
        out[0] = x[0] * std::numeric_limits<double>::max();
    };
    RandomStream stream(1);
    const WeakIncrementBatch inc = draw(1, 0.5, stream);
    try {
        srk_step(named_scheme("EM"), p, StepContext{0.25, 0.5, Vector{2.0}, &inc});
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_DOUBLE_EQ(e.time(), 0.75);
        ASSERT_EQ(e.state().size(), 1u);
        EXPECT_FALSE(std::isfinite(e.state()[0]));
    }
}

TEST(SrkStep, RejectsMismatchedInputs) {
    const SdeProblem p = problem_2d().sde;
    RandomStream stream(1);
    const WeakIncrementBatch inc1 = draw(1, 0.5, stream);
    const WeakIncrementBatch inc2 = draw(2, 0.5, stream);
    const Tableau t = named_scheme("EM");
    EXPECT_THROW(srk_step(t, p, StepContext{0.0, 0.5, p.x0, &inc1}), InvalidArgument);
    EXPECT_THROW(srk_step(t, p, StepContext{0.0, 0.0, p.x0, &inc2}), InvalidArgument);
    EXPECT_THROW(srk_step(t, p, StepContext{0.0, 0.5, Vector{1.0}, &inc2}), InvalidArgument);
    Tableau bad = t;
    bad.A0(0, 0) = 1.0;
    EXPECT_THROW(SrkStepper(bad, p), InvalidArgument);
}

TEST(SimulatePath, ZeroCoefficientsReturnInitialValue) {
    const SdeProblem p = problem_linear(0.0, 0.0, 1, 2.5).sde;
    RandomStream stream(4);
    const std::vector<double> steps = uniform_grid(0.0, 1.0, 0.125);
    EXPECT_EQ(simulate_path(named_scheme("RDI3WM"), p, steps, stream), (Vector{2.5}));
}

TEST(SimulatePath, SingleStepEqualsStep) {
    const SdeProblem p = problem_nonlinear().sde;
    SdeProblem unit = p;
    unit.T = 0.5;
    for (const std::string& name : named_scheme_names()) {
        RandomStream a(12), b(12);
        const Vector path = simulate_path(named_scheme(name), unit, std::vector<double>{0.5}, a);
        const Tableau t = named_scheme(name);
        const WeakIncrementBatch inc = draw(1, 0.5, b, plan_stages(t, 1).pairs);
        EXPECT_EQ(path, srk_step(t, p, StepContext{0.0, 0.5, p.x0, &inc})) << name;
    }
}

TEST(SimulatePath, SameStreamSameTrajectory) {
    const SdeProblem p = problem_2d().sde;
    const auto steps = uniform_grid(0.0, 4.0, 0.25);
    RandomStream a = RandomStream::derive(5, 17), b = RandomStream::derive(5, 17);
    EXPECT_EQ(simulate_path(named_scheme("RDI3WM"), p, steps, a),
              simulate_path(named_scheme("RDI3WM"), p, steps, b));
}

TEST(SimulatePath, StepsMustCoverTheInterval) {
    const SdeProblem p = problem_linear(1.0, 1.0, 1).sde;
    RandomStream s(1);
    EXPECT_THROW(simulate_path(named_scheme("EM"), p, std::vector<double>{0.5}, s),
                 InvalidArgument);
    EXPECT_THROW(simulate_path(named_scheme("EM"), p, std::vector<double>{1.5, -0.5}, s),
                 InvalidArgument);
}

TEST(SimulatePath, GaussianModeOnlyForSchemesWithoutIteratedTerms) {
    const SdeProblem p = problem_linear(1.0, 1.0, 1).sde;
    EXPECT_NO_THROW(PathSimulator(named_scheme("EM"), p, IncrementMode::Gaussian));
    EXPECT_NO_THROW(PathSimulator(named_scheme("RDI1WM"), p, IncrementMode::Gaussian));
    EXPECT_THROW(PathSimulator(named_scheme("RDI2WM"), p, IncrementMode::Gaussian),
                 InvalidArgument);
}

TEST(UniformGrid, DividesInterval) {
    EXPECT_EQ(uniform_grid(0.0, 1.0, 0.1).size(), 10u);
    EXPECT_EQ(uniform_grid(0.0, 4.0, 1.0).size(), 4u);
    EXPECT_THROW(uniform_grid(0.0, 1.0, 0.3), InvalidArgument);
    EXPECT_THROW(uniform_grid(0.0, 1.0, 0.0), InvalidArgument);
    EXPECT_THROW(uniform_grid(1.0, 1.0, 0.1), InvalidArgument);
}

TEST(DeterministicOrder, GlobalErrorSlopes) {
    for (const char* name : {"RDI1WM", "RDI2WM", "PL1WM"}) {
        const double s = deterministic_slope(named_scheme(name));
        EXPECT_GE(s, 1.9) << name;
        EXPECT_LE(s, 2.1) << name;
    }
    for (const char* name : {"RDI3WM", "RDI4WM"}) {
        const double s = deterministic_slope(named_scheme(name));
        EXPECT_GE(s, 2.9) << name;
        EXPECT_LE(s, 3.1) << name;
    }
    const double em = deterministic_slope(named_scheme("EM"));
    EXPECT_GE(em, 0.9);
    EXPECT_LE(em, 1.1);
}

TEST(ExactOneStep, EulerMaruyamaSecondMoment) {
    const oracle::Vec x0{1.0};
    const NamedProblem p = oracle::linear_problem(0.0, 1.0, 2);
    for (double h : {1.0, 0.5, 0.01}) {
        const double e = exact_one_step_expectation(named_scheme("EM"), p.sde, p.f, 0.0, x0, h);
        EXPECT_NEAR(e, 1.0 + h, 1e-15);
    }
}

TEST(ExactOneStep, ConstantFunctional) {
    const SdeProblem p = problem_2d().sde;
    const Functional one = [](std::span<const double>) { return 1.0; };
    for (const std::string& name : named_scheme_names())
        EXPECT_NEAR(exact_one_step_expectation(named_scheme(name), p, one, 0.0, p.x0, 0.3), 1.0,
                    1e-14);
}

TEST(ExactOneStep, WeakOrderSlopes) {
    for (int power : {1, 2, 3}) {
        const NamedProblem p = oracle::linear_problem(1.0, 1.0, power);
        for (const char* name : {"EM", "PL1WM", "RDI2WM", "RDI3WM", "RDI4WM"}) {
            const Tableau t = named_scheme(name);
            const int order = std::string(name) == "EM" ? 1 : 2;
            std::vector<double> hs, errs;
            for (int k = 4; k <= 10; ++k) {
                const double h = std::ldexp(1.0, -k);
                hs.push_back(h);
                errs.push_back(exact_one_step_expectation(t, p.sde, p.f, 0.0, p.sde.x0, h) -
                               oracle::linear_moment(1.0, 1.0, power, 1.0, h));
            }
            EXPECT_GE(oracle::slope(hs, errs), order + 0.8) << name << " power " << power;
        }
    }
}

TEST(ExactOneStep, RejectsLargeNoiseDimension) {
    const SdeProblem p = oracle::coupled_problem(5);
    const Functional f = [](std::span<const double> x) { return x[0]; };
    EXPECT_THROW(exact_one_step_expectation(named_scheme("EM"), p, f, 0.0, p.x0, 0.1),
                 InvalidArgument);
}

TEST(Cost, InstrumentedCountsMatchModel) {
    for (std::size_t m = 1; m <= 3; ++m) {
        const SdeProblem base = oracle::coupled_problem(m);
        for (const std::string& name : named_scheme_names()) {
            const Tableau t = named_scheme(name);
            auto counters = std::make_shared<oracle::Counters>();
            const SdeProblem p = oracle::instrumented(base, counters);
            PathSimulator sim(t, p);
            RandomStream stream(3);
            const std::vector<double> steps(5, 0.2);
            sim.run(steps, stream);
            const EvaluationCost c = evaluation_cost(t, m);
            EXPECT_EQ(counters->drift, 5 * c.drift_evals) << name << " m=" << m;
            EXPECT_EQ(counters->diffusion, 5 * c.diffusion_column_evals) << name << " m=" << m;
            EXPECT_EQ(stream.draws(), 5 * c.random_draws) << name << " m=" << m;
        }
    }
}

TEST(Cost, KnownValues) {
    EXPECT_EQ(evaluation_cost(named_scheme("EM"), 1), (EvaluationCost{1, 1, 1}));
    EXPECT_EQ(evaluation_cost(named_scheme("EM"), 3), (EvaluationCost{1, 3, 3}));
    EXPECT_EQ(evaluation_cost(named_scheme("RDI1WM"), 1), (EvaluationCost{2, 1, 1}));
    // Three diffusion stages per column, three auxiliary stages with two
    // columns each, one off-diagonal pair.
    EXPECT_EQ(evaluation_cost(named_scheme("RDI2WM"), 2), (EvaluationCost{2, 12, 3}));
    EXPECT_EQ(evaluation_cost(named_scheme("RDI3WM"), 1), (EvaluationCost{3, 3, 1}));
}

TEST(Extrapolation, ConstantFunctionalIsExact) {
    const SdeProblem p = problem_nonlinear().sde;
    const Functional c = [](std::span<const double>) { return 3.25; };
    EXPECT_EQ(extrapolated_em(p, c, 2.0, 0.5, 100, 1), 3.25);
}

TEST(Extrapolation, SecondOrderOnLinearOde) {
    const SdeProblem p = ode(1.0);
    const Functional f = [](std::span<const double> x) { return x[0]; };
    std::vector<double> hs, errs;
    for (int k = 2; k <= 7; ++k) {
        const double h = std::ldexp(1.0, -k);
        hs.push_back(h);
        errs.push_back(extrapolated_em(p, f, 1.0, h, 2, 9) - std::exp(1.0));
    }
    const double s = oracle::slope(hs, errs);
    EXPECT_GE(s, 1.9);
    EXPECT_LE(s, 2.1);
}

TEST(Extrapolation, LevelsUseIndependentStreams) {
    EXPECT_NE(extrapolation_stream(1, 5, 0)(), extrapolation_stream(1, 5, 1)());
    EXPECT_NE(extrapolation_stream(1, 5, 0)(), RandomStream::derive(1, 5)());
}
