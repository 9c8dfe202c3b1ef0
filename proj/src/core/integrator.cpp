#include "wsrk/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "wsrk/error.hpp"
#include "wsrk/families.hpp"

namespace wsrk {

void check_problem(const SdeProblem& p) {
    if (p.dim == 0 || p.noise_dim == 0)
        throw InvalidArgument("state and noise dimensions must be at least 1");
    if (!p.drift || !p.diffusion_column)
        throw InvalidArgument("drift and diffusion callables are required");
    if (p.x0.size() != p.dim) throw InvalidArgument("initial value has wrong dimension");
    if (!(p.t0 < p.T)) throw InvalidArgument("time interval must satisfy t0 < T");
}

StagePlan plan_stages(const Tableau& t, std::size_t noise_dim) {
    const std::size_t s = t.stages;
    StagePlan plan;
    plan.drift.assign(s, false);
    plan.diffusion.assign(s, false);
    plan.auxiliary.assign(s, false);

    for (std::size_t i = s; i-- > 0;) {
        plan.auxiliary[i] = noise_dim >= 2 && (t.beta3[i] != 0.0 || t.beta4[i] != 0.0);

        bool diffusion = t.beta1[i] != 0.0 || t.beta2[i] != 0.0;
        bool drift = t.alpha[i] != 0.0;
        for (std::size_t j = i + 1; j < s; ++j) {
            diffusion = diffusion || (t.B0(j, i) != 0.0 && plan.drift[j]) ||
                        (t.B1(j, i) != 0.0 && plan.diffusion[j]) ||
                        (t.B2(j, i) != 0.0 && plan.auxiliary[j]);
            drift = drift || (t.A0(j, i) != 0.0 && plan.drift[j]) ||
                    (t.A1(j, i) != 0.0 && plan.diffusion[j]) ||
                    (t.A2(j, i) != 0.0 && plan.auxiliary[j]);
        }
        plan.diffusion[i] = diffusion;
        plan.drift[i] = drift;
        if (plan.auxiliary[i] && t.beta4[i] != 0.0) plan.pairs = true;
    }
    return plan;
}

EvaluationCost evaluation_cost(const Tableau& t, std::size_t noise_dim) {
    const StagePlan plan = plan_stages(t, noise_dim);
    const auto count = [](const std::vector<bool>& v) {
        return static_cast<std::uint64_t>(std::count(v.begin(), v.end(), true));
    };
    const std::uint64_t m = noise_dim;
    EvaluationCost cost;
    cost.drift_evals = count(plan.drift);
    cost.diffusion_column_evals = count(plan.diffusion) * m + count(plan.auxiliary) * m * (m - 1);
    cost.random_draws = m + (plan.pairs ? m * (m - 1) / 2 : 0);
    return cost;
}

SrkStepper::SrkStepper(const Tableau& tableau, const SdeProblem& problem)
    : tableau_(tableau),
      problem_(problem),
      plan_(plan_stages(tableau, problem.noise_dim)),
      d_(problem.dim),
      m_(problem.noise_dim),
      s_(tableau.stages),
      drift_vals_(s_ * d_, 0.0),
      diffusion_vals_(s_ * m_ * d_, 0.0),
      stage_(d_, 0.0),
      column_(d_, 0.0) {
    check_problem(problem);
    if (const auto v = validate(tableau); !v.empty())
        throw InvalidArgument("invalid tableau: " + v.front().message);
}

void SrkStepper::step(double t, double h, std::span<const double> y,
                      const WeakIncrementBatch& inc, std::span<double> out) {
    const Tableau& tb = tableau_;
    const double sqh = std::sqrt(h);
    const auto drift_at = [&](std::size_t j) {
        return std::span<double>(drift_vals_.data() + j * d_, d_);
    };
    const auto diffusion_at = [&](std::size_t j, std::size_t k) {
        return std::span<double>(diffusion_vals_.data() + (j * m_ + k) * d_, d_);
    };
    const auto axpy = [&](double a, std::span<const double> x) {
        for (std::size_t r = 0; r < d_; ++r) stage_[r] += a * x[r];
    };

    for (std::size_t i = 0; i < s_; ++i) {
        if (plan_.drift[i]) {
            std::copy(y.begin(), y.end(), stage_.begin());
            for (std::size_t j = 0; j < i; ++j) {
                if (tb.A0(i, j) != 0.0) axpy(tb.A0(i, j) * h, drift_at(j));
                if (tb.B0(i, j) != 0.0)
                    for (std::size_t r = 0; r < m_; ++r)
                        axpy(tb.B0(i, j) * inc.ihat[r], diffusion_at(j, r));
            }
            problem_.drift(t + tb.c0[i] * h, stage_, drift_at(i));
        }
        if (plan_.diffusion[i]) {
            for (std::size_t k = 0; k < m_; ++k) {
                std::copy(y.begin(), y.end(), stage_.begin());
                for (std::size_t j = 0; j < i; ++j) {
                    if (tb.A1(i, j) != 0.0) axpy(tb.A1(i, j) * h, drift_at(j));
                    if (tb.B1(i, j) != 0.0) axpy(tb.B1(i, j) * sqh, diffusion_at(j, k));
                }
                problem_.diffusion_column(t + tb.c1[i] * h, stage_, k, diffusion_at(i, k));
            }
        }
    }

    std::copy(y.begin(), y.end(), out.begin());
    for (std::size_t i = 0; i < s_; ++i) {
        if (tb.alpha[i] != 0.0) {
            const auto a = drift_at(i);
            for (std::size_t r = 0; r < d_; ++r) out[r] += tb.alpha[i] * h * a[r];
        }
        if (!plan_.diffusion[i] || (tb.beta1[i] == 0.0 && tb.beta2[i] == 0.0)) continue;
        for (std::size_t k = 0; k < m_; ++k) {
            const double w = tb.beta1[i] * inc.ihat[k] + tb.beta2[i] * inc.pair(k, k) / sqh;
            const auto b = diffusion_at(i, k);
            for (std::size_t r = 0; r < d_; ++r) out[r] += w * b[r];
        }
    }

    for (std::size_t i = 0; i < s_; ++i) {
        if (!plan_.auxiliary[i]) continue;
        for (std::size_t l = 0; l < m_; ++l) {
            std::copy(y.begin(), y.end(), stage_.begin());
            for (std::size_t j = 0; j < i; ++j) {
                if (tb.A2(i, j) != 0.0) axpy(tb.A2(i, j) * h, drift_at(j));
                if (tb.B2(i, j) != 0.0) axpy(tb.B2(i, j) * sqh, diffusion_at(j, l));
            }
            for (std::size_t k = 0; k < m_; ++k) {
                if (k == l) continue;
                problem_.diffusion_column(t + tb.c2[i] * h, stage_, k, column_);
                double w = tb.beta3[i] * inc.ihat[k];
                if (tb.beta4[i] != 0.0) w += tb.beta4[i] * inc.pair(k, l) / sqh;
                for (std::size_t r = 0; r < d_; ++r) out[r] += w * column_[r];
            }
        }
    }

    for (std::size_t r = 0; r < d_; ++r)
        if (!std::isfinite(out[r])) throw DivergenceError(t + h, Vector(out.begin(), out.end()));
}

Vector srk_step(const Tableau& tableau, const SdeProblem& problem, const StepContext& ctx) {
    if (!(ctx.h > 0.0)) throw InvalidArgument("step size must be positive");
    if (ctx.increments == nullptr || ctx.increments->noise_dim() != problem.noise_dim)
        throw InvalidArgument("increment batch does not match the noise dimension");
    if (ctx.y.size() != problem.dim) throw InvalidArgument("state has wrong dimension");
    SrkStepper stepper(tableau, problem);
    Vector out(problem.dim);
    stepper.step(ctx.t, ctx.h, ctx.y, *ctx.increments, out);
    return out;
}

namespace {

bool reads_only_single_increments(const Tableau& t) {
    const auto zero = [](const Vector& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    };
    return zero(t.beta2) && zero(t.beta3) && zero(t.beta4);
}

}  // namespace

PathSimulator::PathSimulator(const Tableau& tableau, const SdeProblem& problem,
                             IncrementMode mode)
    : problem_(problem),
      stepper_(tableau, problem),
      mode_(mode),
      y_(problem.dim),
      next_(problem.dim) {
    if (mode == IncrementMode::Gaussian && !reads_only_single_increments(tableau))
        throw InvalidArgument("Gaussian increments are only available for schemes with "
                              "beta2 = beta3 = beta4 = 0");
}

const Vector& PathSimulator::run(std::span<const double> steps, RandomStream& stream) {
    std::copy(problem_.x0.begin(), problem_.x0.end(), y_.begin());
    double t = problem_.t0;
    const std::size_t m = problem_.noise_dim;
    for (const double h : steps) {
        if (mode_ == IncrementMode::Gaussian)
            draw_gaussian_into(batch_, m, h, stream);
        else
            draw_into(batch_, m, h, stream, stepper_.plan().pairs);
        stepper_.step(t, h, y_, batch_, next_);
        std::swap(y_, next_);
        t += h;
    }
    return y_;
}

Vector simulate_path(const Tableau& tableau, const SdeProblem& problem,
                     std::span<const double> steps, RandomStream& stream, IncrementMode mode) {
    double total = 0.0;
    for (const double h : steps) {
        if (!(h > 0.0)) throw InvalidArgument("step sizes must be positive");
        total += h;
    }
    const double span = problem.T - problem.t0;
    if (std::fabs(total - span) > 1e-12 * std::max(1.0, std::fabs(span)))
        throw InvalidArgument("step sizes must sum to T - t0");
    PathSimulator sim(tableau, problem, mode);
    return sim.run(steps, stream);
}

std::vector<double> uniform_grid(double t0, double t_end, double h) {
    if (!(h > 0.0)) throw InvalidArgument("step size must be positive");
    if (!(t_end > t0)) throw InvalidArgument("evaluation time must exceed t0");
    const double ratio = (t_end - t0) / h;
    const double n = std::round(ratio);
    if (n < 1.0 || std::fabs(ratio - n) > 1e-9)
        throw InvalidArgument("step size does not divide the time interval");
    return std::vector<double>(static_cast<std::size_t>(n), h);
}

double exact_one_step_expectation(const Tableau& tableau, const SdeProblem& problem,
                                  const Functional& f, double t0, std::span<const double> y0,
                                  double h) {
    if (problem.noise_dim > kMaxEnumerationNoiseDim)
        throw InvalidArgument("exact expectation supports noise dimension up to 4");
    if (y0.size() != problem.dim) throw InvalidArgument("state has wrong dimension");
    SrkStepper stepper(tableau, problem);
    Vector out(problem.dim);
    double sum = 0.0;
    for (const SupportAtom& atom : enumerate_support(problem.noise_dim, h)) {
        stepper.step(t0, h, y0, atom.batch, out);
        sum += atom.probability * f(out);
    }
    return sum;
}

RandomStream extrapolation_stream(std::uint64_t seed, std::uint64_t index, int level) {
    return RandomStream::derive(seed, index).split(static_cast<std::uint64_t>(level));
}

double extrapolated_em(const SdeProblem& problem, const Functional& f, double t_eval, double h,
                       std::uint64_t M, std::uint64_t seed) {
    if (M == 0) throw InvalidArgument("sample count must be positive");
    const Tableau em = named_scheme("EM");
    const std::vector<double> coarse = uniform_grid(problem.t0, t_eval, h);
    const std::vector<double> fine = uniform_grid(problem.t0, t_eval, h / 2.0);
    PathSimulator sim(em, problem);
    double sum_coarse = 0.0;
    double sum_fine = 0.0;
    for (std::uint64_t i = 0; i < M; ++i) {
        RandomStream s0 = extrapolation_stream(seed, i, 0);
        sum_coarse += f(sim.run(coarse, s0));
        RandomStream s1 = extrapolation_stream(seed, i, 1);
        sum_fine += f(sim.run(fine, s1));
    }
    const double n = static_cast<double>(M);
    return 2.0 * (sum_fine / n) - sum_coarse / n;
}

}  // namespace wsrk
