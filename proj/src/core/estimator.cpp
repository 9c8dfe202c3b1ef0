#include "wsrk/estimator.hpp"

#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

#include "wsrk/error.hpp"
#include "wsrk/families.hpp"

namespace wsrk {

Scheme Scheme::from_tableau(Tableau t) {
    Scheme s;
    s.name = t.name.empty() ? "custom" : t.name;
    s.tableau = std::move(t);
    return s;
}

Scheme Scheme::from_name(std::string_view name) {
    if (name == "EXEM") return Scheme{"EXEM", std::nullopt};
    return from_tableau(named_scheme(name));
}

double student_t_95(double degrees_of_freedom) {
    return boost::math::quantile(boost::math::students_t(degrees_of_freedom), 0.95);
}

namespace {

struct BatchResult {
    double sum = 0.0;
    std::uint64_t valid = 0;
    std::uint64_t diverged = 0;
    std::optional<DivergenceError> first_failure;
};

// Per-thread simulation state; one instance is never shared.
class TrajectorySampler {
public:
    TrajectorySampler(const NamedProblem& problem, const Scheme& scheme, const Functional& f,
                      double t_eval, double h, std::uint64_t seed, IncrementMode mode)
        : f_(f), seed_(seed), extrapolated_(scheme.extrapolated()) {
        if (extrapolated_) {
            sim_.emplace(named_scheme("EM"), problem.sde, mode);
            coarse_ = uniform_grid(problem.sde.t0, t_eval, h);
            fine_ = uniform_grid(problem.sde.t0, t_eval, h / 2.0);
        } else {
            sim_.emplace(*scheme.tableau, problem.sde, mode);
            coarse_ = uniform_grid(problem.sde.t0, t_eval, h);
        }
    }

    double sample(std::uint64_t index) {
        if (!extrapolated_) {
            RandomStream stream = RandomStream::derive(seed_, index);
            return f_(sim_->run(coarse_, stream));
        }
        RandomStream s0 = extrapolation_stream(seed_, index, 0);
        const double coarse = f_(sim_->run(coarse_, s0));
        RandomStream s1 = extrapolation_stream(seed_, index, 1);
        const double fine = f_(sim_->run(fine_, s1));
        return 2.0 * fine - coarse;
    }

private:
    const Functional& f_;
    std::uint64_t seed_;
    bool extrapolated_;
    std::optional<PathSimulator> sim_;
    std::vector<double> coarse_, fine_;
};

}  // namespace

WeakErrorReport estimate(const NamedProblem& problem, const Scheme& scheme, const Functional& f,
                         double t_eval, double h, std::uint64_t M, std::uint64_t seed,
                         const EstimateOptions& options) {
    if (!problem.sde.exact_functional)
        throw InvalidArgument("problem " + problem.name + " has no exact functional");
    if (!f) throw InvalidArgument("functional is required");
    const std::size_t batches = options.batches;
    if (batches < 2) throw InvalidArgument("at least two batches are required");
    if (M < 2 || M % batches != 0)
        throw InvalidArgument("sample count must be at least 2 and divisible by the batch count");
    if (!(t_eval > problem.sde.t0) || t_eval > problem.sde.T)
        throw InvalidArgument("evaluation time outside the problem interval");
    check_problem(problem.sde);

    const std::uint64_t per_batch = M / batches;
    std::vector<BatchResult> results(batches);

    // Constructing one sampler up front surfaces argument errors on this thread.
    TrajectorySampler(problem, scheme, f, t_eval, h, seed, options.increments);

    std::atomic<std::size_t> next_batch{0};
    std::mutex error_mutex;
    std::exception_ptr worker_error;
    const auto worker = [&] {
        try {
            TrajectorySampler sampler(problem, scheme, f, t_eval, h, seed, options.increments);
            for (std::size_t b = next_batch++; b < batches; b = next_batch++) {
                BatchResult& r = results[b];
                for (std::uint64_t i = b * per_batch; i < (b + 1) * per_batch; ++i) {
                    try {
                        r.sum += sampler.sample(i);
                        ++r.valid;
                    } catch (const DivergenceError& e) {
                        ++r.diverged;
                        if (!r.first_failure) r.first_failure = e;
                    }
                }
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!worker_error) worker_error = std::current_exception();
        }
    };

    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(batches)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    if (worker_error) std::rethrow_exception(worker_error);

    WeakErrorReport report;
    report.h = h;
    report.M = M;
    double total = 0.0;
    std::uint64_t valid = 0;
    for (const BatchResult& r : results) {
        total += r.sum;
        valid += r.valid;
        report.diverged += r.diverged;
    }
    if (report.diverged > 0 && options.fail_on_divergence) {
        for (const BatchResult& r : results)
            if (r.first_failure)
                throw DivergenceError(r.first_failure->time(), r.first_failure->state(),
                                      report.diverged);
    }

    std::vector<double> means;
    means.reserve(batches);
    for (const BatchResult& r : results) {
        if (r.valid == 0) throw DivergenceError(t_eval, {}, report.diverged);
        means.push_back(r.sum / static_cast<double>(r.valid));
    }

    const double exact = problem.sde.exact_functional(t_eval);
    report.u_Mh = total / static_cast<double>(valid);
    report.mu_hat = report.u_Mh - exact;

    double mean_of_means = 0.0;
    for (const double m : means) mean_of_means += m;
    mean_of_means /= static_cast<double>(batches);
    double ss = 0.0;
    for (const double m : means) ss += (m - mean_of_means) * (m - mean_of_means);
    const auto nb = static_cast<double>(batches);
    report.sigma2_mu = ss / (nb - 1.0) / nb;

    const double half = student_t_95(nb - 1.0) * std::sqrt(report.sigma2_mu);
    report.ci_a = report.mu_hat - half;
    report.ci_b = report.mu_hat + half;
    return report;
}

double fit_order(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw InvalidArgument("order fit needs at least two step sizes");
    bool distinct = false;
    for (const auto& [h, mu] : points) {
        if (!(h > 0.0)) throw InvalidArgument("order fit needs positive step sizes");
        if (mu == 0.0 || !std::isfinite(mu))
            throw InvalidArgument("zero mean error: regression undefined; increase M or exclude "
                                  "the point");
        if (h != points.front().first) distinct = true;
    }
    if (!distinct) throw InvalidArgument("order fit needs at least two distinct step sizes");

    const auto n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [h, mu] : points) {
        sx += std::log2(h);
        sy += std::log2(std::fabs(mu));
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [h, mu] : points) {
        const double dx = std::log2(h) - mx;
        sxy += dx * (std::log2(std::fabs(mu)) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<ConvergenceStudy> run_study(const NamedProblem& problem,
                                        std::span<const Scheme> schemes, const Functional& f,
                                        double t_eval, std::span<const double> step_sizes,
                                        std::uint64_t M, std::uint64_t seed,
                                        const EstimateOptions& options) {
    std::vector<ConvergenceStudy> studies;
    for (const Scheme& scheme : schemes) {
        ConvergenceStudy study;
        study.scheme = scheme.name;
        study.problem = problem.name;
        std::vector<std::pair<double, double>> fit_points;
        for (const double h : step_sizes) {
            study.points.push_back(estimate(problem, scheme, f, t_eval, h, M, seed, options));
            const WeakErrorReport& r = study.points.back();
            if (r.mu_hat == 0.0)
                study.warnings.push_back("mean error is exactly zero at h=" + std::to_string(h) +
                                         "; point left out of the order fit");
            else
                fit_points.emplace_back(r.h, r.mu_hat);
        }
        study.fitted_order = fit_order(fit_points);
        studies.push_back(std::move(study));
    }
    return studies;
}

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5E", x);
    return buf;
}

std::string field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string format_errors_csv(std::span<const ConvergenceStudy> studies) {
    std::string out = "scheme,problem,h,M,u_Mh,mu_hat,sigma2_mu,ci_a,ci_b,diverged\n";
    for (const ConvergenceStudy& s : studies) {
        for (const WeakErrorReport& r : s.points) {
            out += field(s.scheme) + "," + field(s.problem) + "," + sci(r.h) + "," + std::to_string(r.M) + "," +
                   sci(r.u_Mh) + "," + sci(r.mu_hat) + "," + sci(r.sigma2_mu) + "," +
                   sci(r.ci_a) + "," + sci(r.ci_b) + "," + std::to_string(r.diverged) + "\n";
        }
    }
    return out;
}

std::string format_orders_csv(std::span<const ConvergenceStudy> studies) {
    std::string out = "scheme,problem,fitted_order\n";
    for (const ConvergenceStudy& s : studies)
        out += field(s.scheme) + "," + field(s.problem) + "," + sci(s.fitted_order) + "\n";
    return out;
}

}  // namespace wsrk
