#include "wsrk/wsrk.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "wsrk/conditions.hpp"
#include "wsrk/error.hpp"
#include "wsrk/estimator.hpp"
#include "wsrk/families.hpp"
#include "wsrk/integrator.hpp"
#include "wsrk/problems.hpp"
#include "wsrk/tableau.hpp"

struct wsrk_tableau {
    wsrk::Tableau value;
};
struct wsrk_report {
    wsrk::ConditionReport value;
};
struct wsrk_problem {
    wsrk::NamedProblem value;
};
struct wsrk_study {
    std::vector<wsrk::ConvergenceStudy> value;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_constraint;

void clear_error() {
    last_error.clear();
    last_constraint.clear();
}

wsrk_status fail(wsrk_status code, std::string message) {
    last_error = std::move(message);
    return code;
}

// Runs `body` and maps library exceptions onto status codes.
template <class F>
wsrk_status guarded(F&& body) {
    clear_error();
    try {
        body();
        return WSRK_OK;
    } catch (const wsrk::ConstraintViolation& e) {
        last_constraint = e.constraint();
        return fail(WSRK_CONSTRAINT_VIOLATION, e.what());
    } catch (const wsrk::DivergenceError& e) {
        return fail(WSRK_DIVERGED, e.what());
    } catch (const wsrk::ParseError& e) {
        return fail(WSRK_PARSE_ERROR, e.what());
    } catch (const wsrk::UnknownName& e) {
        return fail(WSRK_UNKNOWN_NAME, e.what());
    } catch (const wsrk::InvalidArgument& e) {
        return fail(WSRK_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(WSRK_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(WSRK_INTERNAL, e.what());
    } catch (...) {
        return fail(WSRK_INTERNAL, "unknown error");
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool condition, const char* message) {
    if (!condition) throw wsrk::InvalidArgument(message);
}

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const std::string& n : names) {
        if (!out.empty()) out += ' ';
        out += n;
    }
    return out;
}

}  // namespace

extern "C" {

const char* wsrk_last_error(void) { return last_error.c_str(); }
const char* wsrk_last_constraint(void) { return last_constraint.c_str(); }
void wsrk_string_free(char* s) { std::free(s); }

wsrk_status wsrk_tableau_from_name(const char* name, wsrk_tableau** out) {
    return guarded([&] {
        require(name != nullptr && out != nullptr, "null argument");
        *out = new wsrk_tableau{wsrk::named_scheme(name)};
    });
}

wsrk_status wsrk_tableau_from_json(const char* text, wsrk_tableau** out) {
    return guarded([&] {
        require(text != nullptr && out != nullptr, "null argument");
        *out = new wsrk_tableau{wsrk::deserialize(text)};
    });
}

wsrk_status wsrk_tableau_from_file(const char* path, wsrk_tableau** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        std::ifstream in(path, std::ios::binary);
        if (!in) throw wsrk::InvalidArgument(std::string("cannot open ") + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        *out = new wsrk_tableau{wsrk::deserialize(buf.str())};
    });
}

void wsrk_family_params_init(wsrk_family_params* p) {
    if (p == nullptr) return;
    std::memset(p, 0, sizeof *p);
    p->sign_branch = 1;
}

wsrk_status wsrk_tableau_from_family(const char* family, const wsrk_family_params* p,
                                     wsrk_tableau** out) {
    return guarded([&] {
        require(family != nullptr && out != nullptr, "null argument");
        const auto f = wsrk::family_from_string(family);
        if (!f) throw wsrk::UnknownName(std::string("unknown family: ") + family);
        wsrk::FamilyParams params;
        params.family = *f;
        if (p != nullptr) {
            for (int k = 1; k <= 11; ++k)
                if (p->c_set & (1u << k)) params.c[k] = p->c[k];
            if (p->lambda_set) params.lambda = p->lambda;
            if (p->sign_branch != 0) {
                require(p->sign_branch == 1 || p->sign_branch == -1, "sign branch must be +1 or -1");
                params.sign_branch = p->sign_branch;
            }
        }
        *out = new wsrk_tableau{wsrk::make_family(params)};
    });
}

wsrk_status wsrk_family_order(const char* family, int* deterministic, int* stochastic) {
    return guarded([&] {
        require(family != nullptr, "null argument");
        const auto f = wsrk::family_from_string(family);
        if (!f) throw wsrk::UnknownName(std::string("unknown family: ") + family);
        const wsrk::OrderClaim claim = wsrk::classified_order(*f);
        if (deterministic) *deterministic = claim.deterministic;
        if (stochastic) *stochastic = claim.stochastic;
    });
}

const char* wsrk_family_names(void) {
    static const std::string names = [] {
        std::vector<std::string> v;
        for (const wsrk::Family f : wsrk::kAllFamilies) v.emplace_back(wsrk::to_string(f));
        return join(v);
    }();
    return names.c_str();
}

const char* wsrk_scheme_names(void) {
    static const std::string names = [] {
        std::vector<std::string> v = wsrk::named_scheme_names();
        v.emplace_back("EXEM");
        return join(v);
    }();
    return names.c_str();
}

void wsrk_tableau_free(wsrk_tableau* t) { delete t; }

size_t wsrk_tableau_stages(const wsrk_tableau* t) { return t ? t->value.stages : 0; }

const char* wsrk_tableau_name(const wsrk_tableau* t) { return t ? t->value.name.c_str() : ""; }

wsrk_status wsrk_tableau_to_json(const wsrk_tableau* t, char** out) {
    return guarded([&] {
        require(t != nullptr && out != nullptr, "null argument");
        *out = copy_string(wsrk::serialize(t->value));
    });
}

wsrk_status wsrk_tableau_validate(const wsrk_tableau* t) {
    return guarded([&] {
        require(t != nullptr, "null argument");
        const auto violations = wsrk::validate(t->value);
        if (!violations.empty()) throw wsrk::InvalidArgument(violations.front().message);
    });
}

size_t wsrk_condition_count(void) { return wsrk::kConditionCount; }

const char* wsrk_condition_id(size_t index) {
    if (index >= wsrk::kConditionCount) return nullptr;
    return wsrk::to_string(wsrk::condition_at(index)).data();
}

const char* wsrk_condition_formula(size_t index) {
    if (index >= wsrk::kConditionCount) return nullptr;
    return wsrk::formula(wsrk::condition_at(index)).data();
}

wsrk_status wsrk_conditions_evaluate(const wsrk_tableau* t, double tolerance, wsrk_report** out) {
    return guarded([&] {
        require(t != nullptr && out != nullptr, "null argument");
        require(tolerance >= 0.0, "tolerance must be non-negative");
        *out = new wsrk_report{wsrk::evaluate_all(t->value, tolerance)};
    });
}

void wsrk_report_free(wsrk_report* r) { delete r; }

double wsrk_report_residual(const wsrk_report* r, size_t index) {
    if (r == nullptr || index >= wsrk::kConditionCount)
        return std::numeric_limits<double>::quiet_NaN();
    return r->value.residuals[index];
}

int wsrk_report_satisfied(const wsrk_report* r, size_t index) {
    if (r == nullptr || index >= wsrk::kConditionCount) return 0;
    return r->value.satisfied[index] ? 1 : 0;
}

void wsrk_report_order(const wsrk_report* r, int* deterministic, int* stochastic) {
    if (r == nullptr) return;
    if (deterministic) *deterministic = r->value.inferred.deterministic;
    if (stochastic) *stochastic = r->value.inferred.stochastic;
}

wsrk_status wsrk_report_text(const wsrk_report* r, char** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "null argument");
        *out = copy_string(wsrk::format_report_text(r->value));
    });
}

wsrk_status wsrk_report_csv(const wsrk_report* r, char** out) {
    return guarded([&] {
        require(r != nullptr && out != nullptr, "null argument");
        *out = copy_string(wsrk::format_report_csv(r->value));
    });
}

wsrk_status wsrk_evaluation_cost(const wsrk_tableau* t, size_t noise_dim, wsrk_cost* out) {
    return guarded([&] {
        require(t != nullptr && out != nullptr, "null argument");
        require(noise_dim >= 1, "noise dimension must be at least 1");
        const wsrk::EvaluationCost c = wsrk::evaluation_cost(t->value, noise_dim);
        *out = wsrk_cost{c.drift_evals, c.diffusion_column_evals, c.random_draws};
    });
}

wsrk_status wsrk_problem_from_name(const char* spec, wsrk_problem** out) {
    return guarded([&] {
        require(spec != nullptr && out != nullptr, "null argument");
        *out = new wsrk_problem{wsrk::problem_by_name(spec)};
    });
}

void wsrk_problem_free(wsrk_problem* p) { delete p; }
const char* wsrk_problem_name(const wsrk_problem* p) { return p ? p->value.name.c_str() : ""; }
size_t wsrk_problem_dim(const wsrk_problem* p) { return p ? p->value.sde.dim : 0; }
size_t wsrk_problem_noise_dim(const wsrk_problem* p) { return p ? p->value.sde.noise_dim : 0; }
double wsrk_problem_t0(const wsrk_problem* p) { return p ? p->value.sde.t0 : 0.0; }
double wsrk_problem_t_eval(const wsrk_problem* p) { return p ? p->value.t_eval : 0.0; }

wsrk_status wsrk_problem_exact(const wsrk_problem* p, double t, double* out) {
    return guarded([&] {
        require(p != nullptr && out != nullptr, "null argument");
        require(static_cast<bool>(p->value.sde.exact_functional), "no exact functional");
        *out = p->value.sde.exact_functional(t);
    });
}

wsrk_status wsrk_one_step_expectation(const wsrk_tableau* t, const wsrk_problem* p, double h,
                                      double* out) {
    return guarded([&] {
        require(t != nullptr && p != nullptr && out != nullptr, "null argument");
        const wsrk::NamedProblem& np = p->value;
        *out = wsrk::exact_one_step_expectation(t->value, np.sde, np.f, np.sde.t0, np.sde.x0, h);
    });
}

void wsrk_study_options_init(wsrk_study_options* o) {
    if (o == nullptr) return;
    std::memset(o, 0, sizeof *o);
    o->batches = 20;
}

wsrk_status wsrk_study_run(const wsrk_problem* p, const char* const* scheme_names,
                           size_t scheme_count, const wsrk_tableau* const* tableaux,
                           size_t tableau_count, const double* step_sizes, size_t step_count,
                           uint64_t M, uint64_t seed, const wsrk_study_options* options,
                           wsrk_study** out) {
    return guarded([&] {
        require(p != nullptr && out != nullptr, "null argument");
        require(scheme_count == 0 || scheme_names != nullptr, "null scheme list");
        require(tableau_count == 0 || tableaux != nullptr, "null tableau list");
        require(scheme_count + tableau_count > 0, "no schemes given");
        require(step_sizes != nullptr && step_count > 0, "no step sizes given");

        std::vector<wsrk::Scheme> schemes;
        for (size_t i = 0; i < scheme_count; ++i) {
            require(scheme_names[i] != nullptr, "null scheme name");
            schemes.push_back(wsrk::Scheme::from_name(scheme_names[i]));
        }
        for (size_t i = 0; i < tableau_count; ++i) {
            require(tableaux[i] != nullptr, "null tableau");
            schemes.push_back(wsrk::Scheme::from_tableau(tableaux[i]->value));
        }

        wsrk::EstimateOptions opts;
        double t_eval = p->value.t_eval;
        if (options != nullptr) {
            if (options->batches != 0) opts.batches = options->batches;
            opts.threads = options->threads;
            opts.fail_on_divergence = options->allow_divergence == 0;
            if (options->gaussian) opts.increments = wsrk::IncrementMode::Gaussian;
            if (options->t_eval > 0.0) t_eval = options->t_eval;
        }
        const std::vector<double> hs(step_sizes, step_sizes + step_count);
        *out = new wsrk_study{wsrk::run_study(p->value, schemes, p->value.f, t_eval, hs, M, seed,
                                              opts)};
    });
}

void wsrk_study_free(wsrk_study* s) { delete s; }

size_t wsrk_study_scheme_count(const wsrk_study* s) { return s ? s->value.size() : 0; }

const char* wsrk_study_scheme_name(const wsrk_study* s, size_t index) {
    if (s == nullptr || index >= s->value.size()) return "";
    return s->value[index].scheme.c_str();
}

double wsrk_study_fitted_order(const wsrk_study* s, size_t index) {
    if (s == nullptr || index >= s->value.size()) return 0.0;
    return s->value[index].fitted_order;
}

size_t wsrk_study_warning_count(const wsrk_study* s, size_t index) {
    if (s == nullptr || index >= s->value.size()) return 0;
    return s->value[index].warnings.size();
}

const char* wsrk_study_warning(const wsrk_study* s, size_t index, size_t k) {
    if (s == nullptr || index >= s->value.size() || k >= s->value[index].warnings.size())
        return "";
    return s->value[index].warnings[k].c_str();
}

uint64_t wsrk_study_diverged(const wsrk_study* s, size_t index) {
    if (s == nullptr || index >= s->value.size()) return 0;
    uint64_t total = 0;
    for (const auto& r : s->value[index].points) total += r.diverged;
    return total;
}

wsrk_status wsrk_study_errors_csv(const wsrk_study* s, char** out) {
    return guarded([&] {
        require(s != nullptr && out != nullptr, "null argument");
        *out = copy_string(wsrk::format_errors_csv(s->value));
    });
}

wsrk_status wsrk_study_orders_csv(const wsrk_study* s, char** out) {
    return guarded([&] {
        require(s != nullptr && out != nullptr, "null argument");
        *out = copy_string(wsrk::format_orders_csv(s->value));
    });
}

}  // extern "C"
