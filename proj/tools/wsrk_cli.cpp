// Command-line front end. Uses only the C interface of the library.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wsrk/wsrk.h"

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kConstraint = 2,
    kDiverged = 3,
    kClaimNotMet = 4,
};

struct Failure {
    int code;
};

struct Deleter {
    void operator()(wsrk_tableau* p) const { wsrk_tableau_free(p); }
    void operator()(wsrk_report* p) const { wsrk_report_free(p); }
    void operator()(wsrk_problem* p) const { wsrk_problem_free(p); }
    void operator()(wsrk_study* p) const { wsrk_study_free(p); }
    void operator()(char* p) const { wsrk_string_free(p); }
};
template <class T>
using Owned = std::unique_ptr<T, Deleter>;

int exit_code_for(wsrk_status s) {
    switch (s) {
        case WSRK_OK: return kOk;
        case WSRK_CONSTRAINT_VIOLATION: return kConstraint;
        case WSRK_DIVERGED: return kDiverged;
        default: return kUsage;
    }
}

void check(wsrk_status s) {
    if (s == WSRK_OK) return;
    if (s == WSRK_CONSTRAINT_VIOLATION)
        std::cerr << "error: " << wsrk_last_constraint() << "\n";
    else
        std::cerr << "error: " << wsrk_last_error() << "\n";
    throw Failure{exit_code_for(s)};
}

std::string take(char* raw) {
    Owned<char> owned(raw);
    return owned ? std::string(owned.get()) : std::string();
}

Owned<wsrk_tableau> load_tableau(const std::string& scheme, const std::string& file) {
    wsrk_tableau* t = nullptr;
    if (!file.empty())
        check(wsrk_tableau_from_file(file.c_str(), &t));
    else
        check(wsrk_tableau_from_name(scheme.c_str(), &t));
    return Owned<wsrk_tableau>(t);
}

Owned<wsrk_problem> load_problem(const std::string& spec) {
    wsrk_problem* p = nullptr;
    check(wsrk_problem_from_name(spec.c_str(), &p));
    return Owned<wsrk_problem>(p);
}

Owned<wsrk_report> evaluate(const wsrk_tableau* t, double tol) {
    wsrk_report* r = nullptr;
    check(wsrk_conditions_evaluate(t, tol, &r));
    return Owned<wsrk_report>(r);
}

std::optional<std::pair<int, int>> parse_claim(const std::string& text) {
    int d = 0, s = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d,%d%c", &d, &s, &tail) != 2 || d < 0 || s < 0)
        return std::nullopt;
    return std::make_pair(d, s);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
        std::cerr << "error: cannot write " << path.string() << "\n";
        throw Failure{kUsage};
    }
}

// ---- check ----

struct CheckArgs {
    std::string scheme, file, claim;
    double tol = 1e-12;
    bool csv = false;
};

int run_check(const CheckArgs& a) {
    std::optional<std::pair<int, int>> claim;
    if (!a.claim.empty()) {
        claim = parse_claim(a.claim);
        if (!claim) {
            std::cerr << "error: --claim expects p_D,p_S\n";
            return kUsage;
        }
    }
    const auto t = load_tableau(a.scheme, a.file);
    const auto r = evaluate(t.get(), a.tol);
    char* out = nullptr;
    check(a.csv ? wsrk_report_csv(r.get(), &out) : wsrk_report_text(r.get(), &out));
    std::cout << take(out);
    if (!claim) return kOk;
    int d = 0, s = 0;
    wsrk_report_order(r.get(), &d, &s);
    if (d >= claim->first && s >= claim->second) return kOk;
    std::cerr << "claimed order (" << claim->first << ", " << claim->second
              << ") not met: inferred (" << d << ", " << s << ")\n";
    return kClaimNotMet;
}

// ---- family ----

struct FamilyArgs {
    std::string family;
    std::vector<CLI::Option*> c_opts = std::vector<CLI::Option*>(12, nullptr);
    std::array<double, 12> c{};
    CLI::Option* lambda_opt = nullptr;
    double lambda = 0.0;
    int sign = 1;
    bool verify = false;
    double tol = 1e-12;
};

int run_family(const FamilyArgs& a) {
    wsrk_family_params params;
    wsrk_family_params_init(&params);
    for (int k = 1; k <= 11; ++k) {
        if (a.c_opts[k]->count() > 0) {
            params.c[k] = a.c[k];
            params.c_set |= 1u << k;
        }
    }
    if (a.lambda_opt->count() > 0) {
        params.lambda = a.lambda;
        params.lambda_set = 1;
    }
    params.sign_branch = a.sign;

    wsrk_tableau* raw = nullptr;
    check(wsrk_tableau_from_family(a.family.c_str(), &params, &raw));
    const Owned<wsrk_tableau> t(raw);
    char* json = nullptr;
    check(wsrk_tableau_to_json(t.get(), &json));
    std::cout << take(json);
    if (!a.verify) return kOk;

    const auto r = evaluate(t.get(), a.tol);
    char* text = nullptr;
    check(wsrk_report_text(r.get(), &text));
    std::cerr << take(text);
    int want_d = 0, want_s = 0, got_d = 0, got_s = 0;
    check(wsrk_family_order(a.family.c_str(), &want_d, &want_s));
    wsrk_report_order(r.get(), &got_d, &got_s);
    if (got_d >= want_d && got_s >= want_s) return kOk;
    std::cerr << "classified order (" << want_d << ", " << want_s << ") not met\n";
    return kClaimNotMet;
}

// ---- study ----

struct StudyArgs {
    std::string problem;
    std::vector<std::string> schemes;
    std::vector<std::string> files;
    std::vector<double> h;
    std::uint64_t M = 100000;
    std::uint64_t seed = 1;
    std::size_t batches = 20;
    unsigned threads = 0;
    double t_eval = 0.0;
    std::string out_dir = ".";
    bool allow_divergence = false;
    bool gaussian = false;
};

int run_study(const StudyArgs& a) {
    const auto problem = load_problem(a.problem);
    std::vector<Owned<wsrk_tableau>> owned;
    std::vector<const wsrk_tableau*> tableaux;
    for (const std::string& f : a.files) {
        owned.push_back(load_tableau("", f));
        tableaux.push_back(owned.back().get());
    }
    std::vector<const char*> names;
    for (const std::string& s : a.schemes) names.push_back(s.c_str());

    wsrk_study_options opts;
    wsrk_study_options_init(&opts);
    opts.batches = a.batches;
    opts.threads = a.threads;
    opts.allow_divergence = a.allow_divergence ? 1 : 0;
    opts.gaussian = a.gaussian ? 1 : 0;
    opts.t_eval = a.t_eval;

    wsrk_study* raw = nullptr;
    check(wsrk_study_run(problem.get(), names.data(), names.size(), tableaux.data(),
                         tableaux.size(), a.h.data(), a.h.size(), a.M, a.seed, &opts, &raw));
    const Owned<wsrk_study> study(raw);

    const std::filesystem::path dir(a.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    char* errors = nullptr;
    char* orders = nullptr;
    check(wsrk_study_errors_csv(study.get(), &errors));
    write_file(dir / "errors.csv", take(errors));
    check(wsrk_study_orders_csv(study.get(), &orders));
    write_file(dir / "orders.csv", take(orders));

    for (std::size_t i = 0; i < wsrk_study_scheme_count(study.get()); ++i) {
        for (std::size_t k = 0; k < wsrk_study_warning_count(study.get(), i); ++k)
            std::cerr << "warning: " << wsrk_study_scheme_name(study.get(), i) << ": "
                      << wsrk_study_warning(study.get(), i, k) << "\n";
        char line[256];
        std::snprintf(line, sizeof line, "%-8s %s fitted order %.4f",
                      wsrk_study_scheme_name(study.get(), i), wsrk_problem_name(problem.get()),
                      wsrk_study_fitted_order(study.get(), i));
        std::cout << line;
        if (const auto d = wsrk_study_diverged(study.get(), i); d > 0)
            std::cout << " (" << d << " diverged trajectories dropped)";
        std::cout << "\n";
    }
    return kOk;
}

// ---- cost ----

struct CostArgs {
    std::string scheme, file;
    std::size_t m = 1;
};

int run_cost(const CostArgs& a) {
    const auto t = load_tableau(a.scheme, a.file);
    wsrk_cost c{};
    check(wsrk_evaluation_cost(t.get(), a.m, &c));
    std::cout << "drift " << c.drift_evals << "\n"
              << "diffusion " << c.diffusion_column_evals << "\n"
              << "rv " << c.random_draws << "\n";
    return kOk;
}

// ---- enumerate ----

struct EnumerateArgs {
    std::string scheme, file, problem;
    double h = 0.0;
};

int run_enumerate(const EnumerateArgs& a) {
    const auto t = load_tableau(a.scheme, a.file);
    const auto p = load_problem(a.problem);
    double value = 0.0, exact = 0.0;
    check(wsrk_one_step_expectation(t.get(), p.get(), a.h, &value));
    check(wsrk_problem_exact(p.get(), wsrk_problem_t0(p.get()) + a.h, &exact));
    std::printf("one_step %.17g\nexact %.17g\nerror %.17g\n", value, exact, value - exact);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak stochastic Runge-Kutta schemes: order conditions, families and "
                 "weak-error studies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "wsrk 1.0");

    CheckArgs check_args;
    auto* check_cmd = app.add_subcommand("check", "Evaluate all order conditions of a tableau");
    auto* scheme_opt = check_cmd->add_option("--scheme", check_args.scheme, "Named scheme");
    auto* file_opt = check_cmd->add_option("--file", check_args.file, "Tableau JSON file");
    scheme_opt->excludes(file_opt);
    check_cmd->add_option("--tol", check_args.tol, "Residual tolerance")->capture_default_str();
    check_cmd->add_flag("--csv", check_args.csv, "CSV output");
    check_cmd->add_option("--claim", check_args.claim, "Claimed order p_D,p_S");

    FamilyArgs family_args;
    auto* family_cmd = app.add_subcommand("family", "Build a tableau from a coefficient family");
    family_cmd->add_option("family", family_args.family, "Family identifier")
        ->required()
        ->description(std::string("One of: ") + wsrk_family_names());
    for (int k = 1; k <= 11; ++k)
        family_args.c_opts[k] = family_cmd->add_option("--c" + std::to_string(k),
                                                       family_args.c[k], "Free parameter");
    family_args.lambda_opt = family_cmd->add_option("--lambda", family_args.lambda, "lambda");
    family_cmd->add_option("--sign", family_args.sign, "Sign branch for +- choices")
        ->check(CLI::IsMember({-1, 1}))
        ->capture_default_str();
    family_cmd->add_flag("--verify", family_args.verify, "Check the classified order conditions");
    family_cmd->add_option("--tol", family_args.tol, "Residual tolerance for --verify")
        ->capture_default_str();

    StudyArgs study_args;
    auto* study_cmd = app.add_subcommand("study", "Monte Carlo weak-error convergence study");
    study_cmd->set_help_flag("--help", "Print this help message and exit");
    study_cmd->add_option("problem", study_args.problem,
                          "nonlinear16, system18 or linear:a=..,b=..,p=..")
        ->required();
    study_cmd->add_option("--schemes", study_args.schemes, "Comma-separated scheme names")
        ->delimiter(',');
    study_cmd->add_option("--file", study_args.files, "Additional tableau JSON files");
    study_cmd->add_option("--h", study_args.h, "Comma-separated step sizes")
        ->delimiter(',')
        ->required();
    study_cmd->add_option("--M", study_args.M, "Trajectories per step size")->capture_default_str();
    study_cmd->add_option("--seed", study_args.seed, "Master seed")->capture_default_str();
    study_cmd->add_option("--batches", study_args.batches, "Batches for the confidence interval")
        ->capture_default_str();
    study_cmd->add_option("--threads", study_args.threads, "Worker threads (0: all cores)");
    study_cmd->add_option("--t", study_args.t_eval, "Evaluation time (default: problem's)");
    study_cmd->add_option("--out-dir", study_args.out_dir, "Directory for the CSV files")
        ->capture_default_str();
    study_cmd->add_flag("--allow-divergence", study_args.allow_divergence,
                        "Drop diverged trajectories instead of failing");
    study_cmd->add_flag("--gaussian", study_args.gaussian,
                        "Gaussian increments (schemes without iterated-integral terms)");

    CostArgs cost_args;
    auto* cost_cmd = app.add_subcommand("cost", "Function evaluations and draws per step");
    auto* cost_scheme = cost_cmd->add_option("scheme", cost_args.scheme, "Named scheme");
    auto* cost_file = cost_cmd->add_option("--file", cost_args.file, "Tableau JSON file");
    cost_scheme->excludes(cost_file);
    cost_cmd->add_option("--m", cost_args.m, "Noise dimension")->capture_default_str();

    EnumerateArgs enum_args;
    auto* enum_cmd =
        app.add_subcommand("enumerate", "Exact expectation of one step over the increment support");
    enum_cmd->set_help_flag("--help", "Print this help message and exit");
    auto* enum_scheme = enum_cmd->add_option("--scheme", enum_args.scheme, "Named scheme");
    auto* enum_file = enum_cmd->add_option("--file", enum_args.file, "Tableau JSON file");
    enum_scheme->excludes(enum_file);
    enum_cmd->add_option("problem", enum_args.problem, "Problem name")->required();
    enum_cmd->add_option("--h", enum_args.h, "Step size")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const auto need_tableau = [](const std::string& scheme, const std::string& file) {
        if (scheme.empty() && file.empty()) {
            std::cerr << "error: give a scheme name or --file\n";
            throw Failure{kUsage};
        }
    };

    try {
        if (*check_cmd) {
            need_tableau(check_args.scheme, check_args.file);
            return run_check(check_args);
        }
        if (*family_cmd) return run_family(family_args);
        if (*study_cmd) {
            if (study_args.schemes.empty() && study_args.files.empty()) {
                std::cerr << "error: give --schemes or --file\n";
                return kUsage;
            }
            return run_study(study_args);
        }
        if (*cost_cmd) {
            need_tableau(cost_args.scheme, cost_args.file);
            return run_cost(cost_args);
        }
        if (*enum_cmd) {
            need_tableau(enum_args.scheme, enum_args.file);
            return run_enumerate(enum_args);
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return kUsage;
}
