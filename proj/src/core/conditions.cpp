#include "wsrk/conditions.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace wsrk {

namespace {

// Short names so each registry line reads like the equation it encodes.
struct Terms {
    const Tableau& t;
    Vector e;

    explicit Terms(const Tableau& tab) : t(tab), e(ones(tab.stages)) {}

    Vector mv(const Matrix& m, const Vector& v) const { return matvec(m, v); }
    Vector me(const Matrix& m) const { return matvec(m, e); }
    static Vector x(const Vector& a, const Vector& b) { return hadamard(a, b); }
    static Vector pw(const Vector& v, int k) { return power(v, k); }
    static double d(const Vector& a, const Vector& b) { return dot(a, b); }
    double sum(const Vector& w) const { return dot(w, e); }
};

struct Entry {
    ConditionId id;
    const char* tag;
    const char* text;
    double rhs;
    bool deterministic;
    std::function<double(const Terms&)> lhs;
};

using C = ConditionId;

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> r;
        // clang-format off
        r.push_back({C::W1, "W1", "alpha^T e = 1", 1.0, true,
            [](const Terms& T) { return T.sum(T.t.alpha); }});
        r.push_back({C::W2, "W2", "beta4^T e = 0", 0.0, false,
            [](const Terms& T) { return T.sum(T.t.beta4); }});
        r.push_back({C::W3, "W3", "beta3^T e = 0", 0.0, false,
            [](const Terms& T) { return T.sum(T.t.beta3); }});
        r.push_back({C::W4, "W4", "(beta1^T e)^2 = 1", 1.0, false,
            [](const Terms& T) { const double s = T.sum(T.t.beta1); return s * s; }});
        r.push_back({C::W5, "W5", "beta2^T e = 0", 0.0, false,
            [](const Terms& T) { return T.sum(T.t.beta2); }});
        r.push_back({C::W6, "W6", "beta1^T B1 e = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.me(T.t.B1)); }});
        r.push_back({C::W7, "W7", "beta3^T B2 e = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.me(T.t.B2)); }});
        r.push_back({C::W8, "W8", "alpha^T A0 e = 1/2", 0.5, true,
            [](const Terms& T) { return T.d(T.t.alpha, T.me(T.t.A0)); }});
        r.push_back({C::W9, "W9", "alpha^T (B0 e)^2 = 1/2", 0.5, false,
            [](const Terms& T) { return T.d(T.t.alpha, T.pw(T.me(T.t.B0), 2)); }});
        r.push_back({C::W10, "W10", "(beta1^T e)(alpha^T B0 e) = 1/2", 0.5, false,
            [](const Terms& T) { return T.sum(T.t.beta1) * T.d(T.t.alpha, T.me(T.t.B0)); }});
        r.push_back({C::W11, "W11", "(beta1^T e)(beta1^T A1 e) = 1/2", 0.5, false,
            [](const Terms& T) { return T.sum(T.t.beta1) * T.d(T.t.beta1, T.me(T.t.A1)); }});
        r.push_back({C::W12, "W12", "beta3^T A2 e = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.me(T.t.A2)); }});
        r.push_back({C::W13, "W13", "beta2^T B1 e = 1", 1.0, false,
            [](const Terms& T) { return T.d(T.t.beta2, T.me(T.t.B1)); }});
        r.push_back({C::W14, "W14", "beta4^T B2 e = 1", 1.0, false,
            [](const Terms& T) { return T.d(T.t.beta4, T.me(T.t.B2)); }});
        r.push_back({C::W15, "W15", "(beta1^T e)(beta1^T (B1 e)^2) = 1/2", 0.5, false,
            [](const Terms& T) { return T.sum(T.t.beta1) * T.d(T.t.beta1, T.pw(T.me(T.t.B1), 2)); }});
        r.push_back({C::W16, "W16", "(beta1^T e)(beta3^T (B2 e)^2) = 1/2", 0.5, false,
            [](const Terms& T) { return T.sum(T.t.beta1) * T.d(T.t.beta3, T.pw(T.me(T.t.B2), 2)); }});
        r.push_back({C::W17, "W17", "beta1^T (B1 (B1 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.mv(T.t.B1, T.me(T.t.B1))); }});
        r.push_back({C::W18, "W18", "beta3^T (B2 (B1 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.mv(T.t.B2, T.me(T.t.B1))); }});
        r.push_back({C::W19, "W19", "beta3^T (A2 (B0 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.mv(T.t.A2, T.me(T.t.B0))); }});
        r.push_back({C::W20, "W20", "beta1^T (A1 (B0 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.mv(T.t.A1, T.me(T.t.B0))); }});
        r.push_back({C::W21, "W21", "alpha^T (B0 (B1 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.alpha, T.mv(T.t.B0, T.me(T.t.B1))); }});
        r.push_back({C::W22, "W22", "beta2^T A1 e = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta2, T.me(T.t.A1)); }});
        r.push_back({C::W23, "W23", "beta4^T A2 e = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta4, T.me(T.t.A2)); }});
        r.push_back({C::W24, "W24", "beta1^T ((A1 e)(B1 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.x(T.me(T.t.A1), T.me(T.t.B1))); }});
        r.push_back({C::W25, "W25", "beta3^T ((A2 e)(B2 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.x(T.me(T.t.A2), T.me(T.t.B2))); }});
        r.push_back({C::W26, "W26", "beta4^T (A2 (B0 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta4, T.mv(T.t.A2, T.me(T.t.B0))); }});
        r.push_back({C::W27, "W27", "beta2^T (A1 (B0 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta2, T.mv(T.t.A1, T.me(T.t.B0))); }});
        r.push_back({C::W28, "W28", "beta2^T (A1 (B0 e)^2) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta2, T.mv(T.t.A1, T.pw(T.me(T.t.B0), 2))); }});
        r.push_back({C::W29, "W29", "beta4^T (A2 (B0 e)^2) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta4, T.mv(T.t.A2, T.pw(T.me(T.t.B0), 2))); }});
        r.push_back({C::W30, "W30", "beta3^T (B2 (A1 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.mv(T.t.B2, T.me(T.t.A1))); }});
        r.push_back({C::W31, "W31", "beta1^T (B1 (A1 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.mv(T.t.B1, T.me(T.t.A1))); }});
        r.push_back({C::W32, "W32", "beta2^T (B1 e)^2 = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta2, T.pw(T.me(T.t.B1), 2)); }});
        r.push_back({C::W33, "W33", "beta4^T (B2 e)^2 = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta4, T.pw(T.me(T.t.B2), 2)); }});
        r.push_back({C::W34, "W34", "beta4^T (B2 (B1 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta4, T.mv(T.t.B2, T.me(T.t.B1))); }});
        r.push_back({C::W35, "W35", "beta2^T (B1 (B1 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta2, T.mv(T.t.B1, T.me(T.t.B1))); }});
        r.push_back({C::W36, "W36", "beta1^T (B1 e)^3 = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.pw(T.me(T.t.B1), 3)); }});
        r.push_back({C::W37, "W37", "beta3^T (B2 e)^3 = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.pw(T.me(T.t.B2), 3)); }});
        r.push_back({C::W38, "W38", "beta1^T (B1 (B1 e)^2) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.mv(T.t.B1, T.pw(T.me(T.t.B1), 2))); }});
        r.push_back({C::W39, "W39", "beta3^T (B2 (B1 e)^2) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.mv(T.t.B2, T.pw(T.me(T.t.B1), 2))); }});
        r.push_back({C::W40, "W40", "alpha^T ((B0 e)(B0 (B1 e))) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.alpha, T.x(T.me(T.t.B0), T.mv(T.t.B0, T.me(T.t.B1)))); }});
        r.push_back({C::W41, "W41", "beta1^T ((A1 (B0 e))(B1 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.x(T.mv(T.t.A1, T.me(T.t.B0)), T.me(T.t.B1))); }});
        r.push_back({C::W42, "W42", "beta3^T ((A2 (B0 e))(B2 e)) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.x(T.mv(T.t.A2, T.me(T.t.B0)), T.me(T.t.B2))); }});
        r.push_back({C::W43, "W43", "beta1^T (A1 (B0 (B1 e))) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.mv(T.t.A1, T.mv(T.t.B0, T.me(T.t.B1)))); }});
        r.push_back({C::W44, "W44", "beta3^T (A2 (B0 (B1 e))) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.mv(T.t.A2, T.mv(T.t.B0, T.me(T.t.B1)))); }});
        r.push_back({C::W45, "W45", "beta1^T (B1 (A1 (B0 e))) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.mv(T.t.B1, T.mv(T.t.A1, T.me(T.t.B0)))); }});
        r.push_back({C::W46, "W46", "beta3^T (B2 (A1 (B0 e))) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.mv(T.t.B2, T.mv(T.t.A1, T.me(T.t.B0)))); }});
        r.push_back({C::W47, "W47", "beta1^T ((B1 e)(B1 (B1 e))) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.x(T.me(T.t.B1), T.mv(T.t.B1, T.me(T.t.B1)))); }});
        r.push_back({C::W48, "W48", "beta3^T ((B2 e)(B2 (B1 e))) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.x(T.me(T.t.B2), T.mv(T.t.B2, T.me(T.t.B1)))); }});
        r.push_back({C::W49, "W49", "beta1^T (B1 (B1 (B1 e))) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta1, T.mv(T.t.B1, T.mv(T.t.B1, T.me(T.t.B1)))); }});
        r.push_back({C::W50, "W50", "beta3^T (B2 (B1 (B1 e))) = 0", 0.0, false,
            [](const Terms& T) { return T.d(T.t.beta3, T.mv(T.t.B2, T.mv(T.t.B1, T.me(T.t.B1)))); }});

        r.push_back({C::D3A, "D3A", "alpha^T (A0 e)^2 = 1/3", 1.0 / 3.0, true,
            [](const Terms& T) { return T.d(T.t.alpha, T.pw(T.me(T.t.A0), 2)); }});
        r.push_back({C::D3B, "D3B", "alpha^T (A0 (A0 e)) = 1/6", 1.0 / 6.0, true,
            [](const Terms& T) { return T.d(T.t.alpha, T.mv(T.t.A0, T.me(T.t.A0))); }});
        r.push_back({C::D4A, "D4A", "alpha^T (A0 (A0 e)^2) = 1/12", 1.0 / 12.0, true,
            [](const Terms& T) { return T.d(T.t.alpha, T.mv(T.t.A0, T.pw(T.me(T.t.A0), 2))); }});
        r.push_back({C::D4B, "D4B", "alpha^T ((A0 e)(A0 (A0 e))) = 1/8", 1.0 / 8.0, true,
            [](const Terms& T) { return T.d(T.t.alpha, T.x(T.me(T.t.A0), T.mv(T.t.A0, T.me(T.t.A0)))); }});
        r.push_back({C::D4C, "D4C", "alpha^T (A0 e)^3 = 1/4", 1.0 / 4.0, true,
            [](const Terms& T) { return T.d(T.t.alpha, T.pw(T.me(T.t.A0), 3)); }});
        r.push_back({C::T1, "T1", "beta2^T ((A1 e)(B1 e)) (beta1^T e)^2 = 2/3", 2.0 / 3.0, false,
            [](const Terms& T) {
                const double s = T.sum(T.t.beta1);
                return T.d(T.t.beta2, T.x(T.me(T.t.A1), T.me(T.t.B1))) * s * s; }});
        r.push_back({C::T2, "T2", "(beta1^T e)(beta3^T (B2 e)^4) = 1", 1.0, false,
            [](const Terms& T) { return T.sum(T.t.beta1) * T.d(T.t.beta3, T.pw(T.me(T.t.B2), 4)); }});
        // clang-format on
        return r;
    }();
    return entries;
}

const Entry& entry(ConditionId id) { return registry()[index_of(id)]; }

}  // namespace

std::string_view to_string(ConditionId id) { return entry(id).tag; }

std::optional<ConditionId> condition_from_string(std::string_view tag) {
    for (const Entry& e : registry())
        if (tag == e.tag) return e.id;
    return std::nullopt;
}

std::string_view formula(ConditionId id) { return entry(id).text; }
double target(ConditionId id) { return entry(id).rhs; }
bool is_deterministic(ConditionId id) { return entry(id).deterministic; }

double evaluate(const Tableau& t, ConditionId id) {
    const Entry& e = entry(id);
    return e.lhs(Terms(t)) - e.rhs;
}

bool ConditionReport::all_ok(ConditionId first, ConditionId last) const {
    for (std::size_t i = index_of(first); i <= index_of(last); ++i)
        if (!satisfied[i]) return false;
    return true;
}

ConditionReport evaluate_all(const Tableau& t, double tol) {
    ConditionReport report;
    report.tolerance = tol;
    const Terms terms(t);
    for (const Entry& e : registry()) {
        const double r = e.lhs(terms) - e.rhs;
        report.residuals[index_of(e.id)] = r;
        report.satisfied[index_of(e.id)] = std::fabs(r) <= tol;
    }

    if (report.all_ok(C::W1, C::W50))
        report.inferred.stochastic = 2;
    else if (report.all_ok(C::W1, C::W7))
        report.inferred.stochastic = 1;

    const bool order1 = report.ok(C::W1);
    const bool order2 = order1 && report.ok(C::W8);
    const bool order3 = order2 && report.ok(C::D3A) && report.ok(C::D3B);
    report.inferred.deterministic = order3 ? 3 : order2 ? 2 : order1 ? 1 : 0;
    return report;
}

std::string format_report_text(const ConditionReport& report) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-5s %-24s %-6s  %s\n", "id", "residual", "status",
                  "condition");
    out += line;
    for (const Entry& e : registry()) {
        const std::size_t i = index_of(e.id);
        std::snprintf(line, sizeof line, "%-5s %-24.16e %-6s  %s\n", e.tag, report.residuals[i],
                      report.satisfied[i] ? "pass" : "FAIL", e.text);
        out += line;
    }
    std::snprintf(line, sizeof line, "tolerance %.3g\ninferred order (p_D, p_S) = (%d, %d)\n",
                  report.tolerance, report.inferred.deterministic, report.inferred.stochastic);
    out += line;
    return out;
}

std::string format_report_csv(const ConditionReport& report) {
    std::string out = "id,residual,satisfied\n";
    char line[96];
    for (const Entry& e : registry()) {
        const std::size_t i = index_of(e.id);
        std::snprintf(line, sizeof line, "%s,%.17g,%s\n", e.tag, report.residuals[i],
                      report.satisfied[i] ? "true" : "false");
        out += line;
    }
    return out;
}

}  // namespace wsrk
