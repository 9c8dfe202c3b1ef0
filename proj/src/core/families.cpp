#include "wsrk/families.hpp"

#include <cmath>
#include <set>

#include "wsrk/error.hpp"

namespace wsrk {

namespace {

struct FamilyInfo {
    Family family;
    const char* name;
    std::set<int> params;  // c-indices the caller may set
    bool takes_lambda;
};

const std::vector<FamilyInfo>& family_table() {
    static const std::vector<FamilyInfo> table = {
        {Family::Ord11, "ord11", {1}, false},
        {Family::Ord21, "ord21", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, false},
        {Family::CaseA, "case-a", {1, 2, 3, 4, 5}, false},
        {Family::Case211, "case-211", {1, 2, 3, 4, 5, 6, 7}, false},
        {Family::Case212, "case-212", {1, 2, 3, 4, 5, 6, 7, 8}, false},
        {Family::Case221, "case-221", {1, 2, 3, 4, 5, 6, 7, 8, 9}, false},
        {Family::Case222, "case-222", {1, 2, 3, 4, 5, 6, 7, 8}, false},
        {Family::Case223, "case-223", {1, 2, 3, 4, 5, 6, 7, 8}, false},
        {Family::Ord32_212, "ord32-212", {1, 2, 3, 4, 5, 6}, false},
        {Family::Ord32_221A, "ord32-221a", {1, 2, 3, 4, 5, 9}, false},
        {Family::Ord32_221B, "ord32-221b", {1, 2, 3, 4, 5, 9}, false},
        {Family::Ord32_221C, "ord32-221c", {1, 2, 3, 4, 5, 8}, true},
        {Family::Ord32_223A, "ord32-223a", {1, 2, 3, 4, 5}, false},
        {Family::Ord32_223C, "ord32-223c", {1, 2, 3, 4, 5, 7}, false},
    };
    return table;
}

const FamilyInfo& info(Family f) {
    for (const auto& i : family_table())
        if (i.family == f) return i;
    throw InvalidArgument("unknown family");
}

bool near(double x, double y) { return std::fabs(x - y) <= kExclusionTolerance; }

void require(bool ok, const char* constraint) {
    if (!ok) throw ConstraintViolation(constraint);
}

// Resolves c-parameters with defaults and rejects ones the family ignores.
class Params {
public:
    explicit Params(const FamilyParams& p) : p_(p) {
        const FamilyInfo& fi = info(p.family);
        for (int k = 1; k <= 11; ++k)
            if (p.c[k] && !fi.params.count(k))
                throw InvalidArgument("parameter c" + std::to_string(k) +
                                      " is not taken by family " + fi.name);
        if (p.lambda && !fi.takes_lambda)
            throw InvalidArgument(std::string("parameter lambda is not taken by family ") +
                                  fi.name);
        if (p.sign_branch != 1 && p.sign_branch != -1)
            throw InvalidArgument("sign branch must be +1 or -1");
        three_stage_ = p.family != Family::Ord11 && p.family != Family::Ord21;
        for (int k = 1; k <= 11; ++k)
            if (p.c[k] && !std::isfinite(*p.c[k]))
                throw InvalidArgument("parameter c" + std::to_string(k) + " is not finite");
        if (p.lambda && !std::isfinite(*p.lambda))
            throw InvalidArgument("parameter lambda is not finite");
    }

    double c(int k) const {
        if (p_.c[k]) return *p_.c[k];
        if (k == 1) return 1.0;
        if (three_stage_ && k == 3) return std::sqrt(2.0 / 3.0);
        if (three_stage_ && k == 4) return std::sqrt(2.0);
        return 0.0;
    }
    double lambda() const { return p_.lambda.value_or(0.0); }
    double sign() const { return static_cast<double>(p_.sign_branch); }

    double sign_c1() const {
        const double c1 = c(1);
        require(c1 == 1.0 || c1 == -1.0, "c1 ∈ {−1, 1}");
        return c1;
    }

private:
    const FamilyParams& p_;
    bool three_stage_ = false;
};

Tableau ord11(const Params& p) {
    Tableau t = Tableau::zero(1);
    t.alpha[0] = 1.0;
    t.beta1[0] = p.sign_c1();
    return t;
}

Tableau ord21(const Params& p) {
    const double c1 = p.sign_c1();
    const double c2 = p.c(2);
    require(!near(c2, 0.0), "c2 ≠ 0");
    require(p.c(4) * p.c(10) == 0.0, "c4·c10 = 0");
    require(p.c(6) * p.c(11) == 0.0, "c6·c11 = 0");

    Tableau t = Tableau::zero(2);
    t.alpha = {1.0 - 1.0 / (2.0 * c2), 1.0 / (2.0 * c2)};
    t.beta1 = {c1 - p.c(4), p.c(4)};
    t.beta2 = {p.c(5), -p.c(5)};
    t.beta3 = {p.c(6), -p.c(6)};
    t.beta4 = {p.c(7), -p.c(7)};
    t.A0(1, 0) = c2;
    t.A1(1, 0) = p.c(8);
    t.A2(1, 0) = p.c(9);
    t.B0(1, 0) = p.c(3);
    t.B1(1, 0) = p.c(10);
    t.B2(1, 0) = p.c(11);
    t.refresh_nodes();
    return t;
}

// Diffusion part shared by every three-stage family. Only alpha, A0 and B0
// are left to the individual cases.
Tableau three_stage_base(const Params& p, bool free_c2_c5) {
    const double c1 = p.sign_c1();
    const double c3 = p.c(3);
    const double c4 = p.c(4);
    require(!near(c3, 0.0), "c3 ≠ 0");
    require(!near(c4, 0.0), "c4 ≠ 0");
    if (!free_c2_c5) {
        require(p.c(2) == 0.0, "c2 = 0");
        require(p.c(5) == 0.0, "c5 = 0");
    }
    const double c2 = p.c(2);
    const double c5 = p.c(5);
    const double c3sq = c3 * c3;
    const double c4sq = c4 * c4;

    Tableau t = Tableau::zero(3);
    t.beta1 = {c1 - c1 / (2.0 * c3sq), c1 / (4.0 * c3sq), c1 / (4.0 * c3sq)};
    t.beta2 = {0.0, 1.0 / (2.0 * c3), -1.0 / (2.0 * c3)};
    t.beta3 = {-c1 / (2.0 * c4sq), c1 / (4.0 * c4sq), c1 / (4.0 * c4sq)};
    t.beta4 = {0.0, 1.0 / (2.0 * c4), -1.0 / (2.0 * c4)};

    t.A1(1, 0) = c3sq;
    t.A1(2, 0) = c3sq - c2;
    t.A1(2, 1) = c2;
    t.B1(1, 0) = c3;
    t.B1(2, 0) = -c3;

    t.A2(2, 0) = c5;
    t.A2(2, 1) = -c5;
    t.B2(1, 0) = c4;
    t.B2(2, 0) = -c4;
    return t;
}

Tableau case_a(const Params& p) {
    Tableau t = three_stage_base(p, false);
    t.alpha = {0.5, 0.5, 0.0};
    t.A0(1, 0) = 1.0;
    t.B0(1, 0) = p.c(1);
    t.refresh_nodes();
    return t;
}

Tableau case_211(const Params& p) {
    Tableau t = three_stage_base(p, true);
    const double c6 = p.c(6);
    const double c7 = p.c(7);
    t.alpha = {0.5 - c6, c6, 0.5};
    t.A0(2, 0) = c7;
    t.A0(2, 1) = 1.0 - c7;
    t.B0(2, 0) = p.c(1);
    t.refresh_nodes();
    return t;
}

Tableau case_212(const Params& p, double c6, double c7, double c8) {
    Tableau t = three_stage_base(p, true);
    require(!near(c6, 0.0), "c6 ≠ 0");
    const double a2 = (1.0 - c7 - c8) / (2.0 * c6);
    t.alpha = {0.5 - a2, a2, 0.5};
    t.A0(1, 0) = c6;
    t.A0(2, 0) = c7;
    t.A0(2, 1) = c8;
    t.B0(2, 0) = p.c(1);
    t.refresh_nodes();
    return t;
}

Tableau case_221(const Params& p, double c6, double c7, double c8, double c9) {
    Tableau t = three_stage_base(p, false);
    const double c1 = p.c(1);
    require(!near(c6, 0.0), "c6 ≠ 0");
    require(!near(c7, 0.0), "c7 ≠ 0");
    require(!near(c6, -c7), "c6 ≠ −c7");
    const double kappa = c6 * c7 * (2.0 * c6 + 2.0 * c7 - 1.0);
    require(kappa >= 0.0, "κ ≥ 0");
    const double root = std::sqrt(kappa);
    require(!near(c6, root) && !near(c6, -root), "c6 ≠ ±√κ");
    const double lambda = (1.0 - 2.0 * c6 * c8) / (2.0 * c7);

    t.alpha = {1.0 - c6 - c7, c6, c7};
    t.A0(1, 0) = c8;
    t.A0(2, 0) = lambda - c9;
    t.A0(2, 1) = c9;
    const double s = p.sign();
    t.B0(1, 0) = c1 / 2.0 * (c6 - s * root) / (c6 * (c6 + c7));
    t.B0(2, 0) = c1 / 2.0 * (c7 + s * root) / (c7 * (c6 + c7));
    t.refresh_nodes();
    return t;
}

Tableau case_222(const Params& p) {
    Tableau t = three_stage_base(p, false);
    const double c8 = p.c(8);
    require(!near(c8, 0.0), "c8 ≠ 0");
    t.alpha = {0.5, 0.0, 0.5};
    t.A0(1, 0) = p.c(6);
    t.A0(2, 0) = 1.0 - p.c(7);
    t.A0(2, 1) = p.c(7);
    t.B0(1, 0) = c8;
    t.B0(2, 0) = p.c(1);
    t.refresh_nodes();
    return t;
}

Tableau case_223(const Params& p, double c6, double c7, double c8) {
    Tableau t = three_stage_base(p, false);
    const double c1 = p.c(1);
    require(!near(c6, -0.5) && !near(c6, 0.0), "c6 ∉ {−1/2, 0}");
    t.alpha = {1.0, c6, -c6};
    t.A0(1, 0) = c7;
    t.A0(2, 0) = (1.0 - 2.0 * c6 * c7) / (-2.0 * c6) - c8;
    t.A0(2, 1) = c8;
    t.B0(1, 0) = c1 / 2.0 * (1.0 + 1.0 / (2.0 * c6));
    t.B0(2, 0) = c1 / 2.0 * (1.0 - 1.0 / (2.0 * c6));
    t.refresh_nodes();
    return t;
}

Tableau ord32_212(const Params& p) {
    const double c6 = p.c(6);
    require(!near(c6, 0.0), "c6 ≠ 0");
    const double disc = 9.0 * c6 * c6 - 36.0 * c6 + 24.0;
    require(disc >= 0.0, "9c6² − 36c6 + 24 ≥ 0");
    const double c7 = 0.5 * c6 + p.sign() * std::sqrt(disc) / 6.0 - 1.0 / (3.0 * c6);
    const double c8 = 1.0 / (3.0 * c6);
    return case_212(p, c6, c7, c8);
}

Tableau ord32_221a(const Params& p) {
    const double c9 = p.c(9);
    require(!near(c9, 0.0), "c9 ≠ 0");
    const double c7 = 1.0 / (4.0 * c9);
    require(!near(c7, -0.75) && !near(c7, 0.0) && !near(c7, 0.5) &&
                !(c7 > -0.25 && c7 < 0.0),
            "c7 ∉ {−3/4, 0, 1/2} ∪ ]−1/4, 0[");
    return case_221(p, 0.75, c7, 2.0 / 3.0, c9);
}

Tableau ord32_221b(const Params& p) {
    const double c9 = p.c(9);
    require(!near(c9, 0.0), "c9 ≠ 0");
    const double c7 = 1.0 / (4.0 * c9);
    const double c6 = 0.75 - c7;
    const bool in_first = c6 > kExclusionTolerance && c6 < 0.25 - kExclusionTolerance;
    const bool in_second = c6 > 0.25 + kExclusionTolerance && c6 < 0.75 - kExclusionTolerance;
    require(in_first || in_second, "c6 ∈ ]0, 1/4[ ∪ ]1/4, 3/4[");
    return case_221(p, c6, c7, 2.0 / 3.0, c9);
}

Tableau ord32_221c(const Params& p) {
    const double lambda = p.lambda();
    const double c8 = p.c(8);
    constexpr double two_thirds = 2.0 / 3.0;

    require(!near(c8, 0.0) && !near(c8, two_thirds), "c8 ∉ {0, 2/3}");
    require(!near(lambda, 0.0) && !near(lambda, two_thirds) && !near(lambda, c8) &&
                !near(lambda, two_thirds - c8),
            "λ ∉ {0, 2/3, c8, 2/3 − c8}");
    require(!near((lambda - 1.0) * c8, lambda * lambda - two_thirds),
            "(λ − 1)c8 ≠ λ² − 2/3");

    if (near(c8, 1.0)) {
        require(lambda < two_thirds, "λ < 2/3 if c8 = 1");
    } else {
        const double threshold = (3.0 * c8 - 2.0) / (3.0 * (c8 - 1.0));
        if (c8 > two_thirds && c8 < 1.0) {
            require(threshold <= lambda && lambda < two_thirds,
                    "(3c8 − 2)/(3(c8 − 1)) ≤ λ < 2/3 if 2/3 < c8 < 1");
        } else if (c8 > 0.0 && c8 < two_thirds) {
            require(lambda > two_thirds || lambda <= threshold,
                    "λ > 2/3 or λ ≤ (3c8 − 2)/(3(c8 − 1)) if 0 < c8 < 2/3");
        } else {
            require(lambda < two_thirds || lambda >= threshold,
                    "λ < 2/3 or λ ≥ (3c8 − 2)/(3(c8 − 1)) if c8 < 0 or c8 > 1");
        }
    }

    const double c6 = (2.0 - 3.0 * lambda) / (6.0 * c8 * (c8 - lambda));
    const double c7 = (3.0 * c8 - 2.0) / (6.0 * lambda * (c8 - lambda));
    const double c9 = lambda * (c8 - lambda) / ((3.0 * c8 - 2.0) * c8);
    return case_221(p, c6, c7, c8, c9);
}

// The deterministic order-3 condition alpha^T (A0 (A0 e)) = 1/6 reads
// -c6 c7 c8 = 1/6 for the Case223 tableau, which fixes c8.
double case_223_third_order_c8(double c6, double c7) { return -1.0 / (6.0 * c6 * c7); }

Tableau ord32_223a(const Params& p) {
    const double c6 = 0.75;
    const double c7 = 2.0 / 3.0;
    return case_223(p, c6, c7, case_223_third_order_c8(c6, c7));
}

Tableau ord32_223c(const Params& p) {
    const double c7 = p.c(7);
    require(!near(c7, -1.0 / 6.0) && !near(c7, 0.0) && !near(c7, 1.0 / 3.0),
            "c7 ∉ {−1/6, 0, 1/3}");
    const double c6 = 1.0 / (4.0 * c7 - 4.0 / 3.0);
    return case_223(p, c6, c7, case_223_third_order_c8(c6, c7));
}

}  // namespace

std::string_view to_string(Family f) { return info(f).name; }

std::optional<Family> family_from_string(std::string_view name) {
    for (const auto& i : family_table())
        if (name == i.name) return i.family;
    return std::nullopt;
}

std::vector<ConditionId> classified_conditions(Family f) {
    std::vector<ConditionId> ids;
    const int last_weak = f == Family::Ord11 || f == Family::Ord21 ? 7 : 50;
    for (int n = 1; n <= last_weak; ++n) ids.push_back(weak_condition(n));
    if (f == Family::Ord21) ids.push_back(ConditionId::W8);
    const OrderClaim order = classified_order(f);
    if (order.deterministic == 3) {
        ids.push_back(ConditionId::D3A);
        ids.push_back(ConditionId::D3B);
    }
    return ids;
}

OrderClaim classified_order(Family f) {
    switch (f) {
        case Family::Ord11: return {1, 1};
        case Family::Ord21: return {2, 1};
        case Family::Ord32_212:
        case Family::Ord32_221A:
        case Family::Ord32_221B:
        case Family::Ord32_221C:
        case Family::Ord32_223A:
        case Family::Ord32_223C: return {3, 2};
        default: return {2, 2};
    }
}

Tableau make_family(const FamilyParams& fp) {
    const Params p(fp);
    Tableau t;
    switch (fp.family) {
        case Family::Ord11: t = ord11(p); break;
        case Family::Ord21: t = ord21(p); break;
        case Family::CaseA: t = case_a(p); break;
        case Family::Case211: t = case_211(p); break;
        case Family::Case212: t = case_212(p, p.c(6), p.c(7), p.c(8)); break;
        case Family::Case221: t = case_221(p, p.c(6), p.c(7), p.c(8), p.c(9)); break;
        case Family::Case222: t = case_222(p); break;
        case Family::Case223: t = case_223(p, p.c(6), p.c(7), p.c(8)); break;
        case Family::Ord32_212: t = ord32_212(p); break;
        case Family::Ord32_221A: t = ord32_221a(p); break;
        case Family::Ord32_221B: t = ord32_221b(p); break;
        case Family::Ord32_221C: t = ord32_221c(p); break;
        case Family::Ord32_223A: t = ord32_223a(p); break;
        case Family::Ord32_223C: t = ord32_223c(p); break;
    }
    t.name = std::string(to_string(fp.family));
    for (const auto& v : validate(t))
        throw ConstraintViolation("finite coefficients (" + v.message + ")");
    return t;
}

namespace {

// Literal coefficient tables of the named schemes.

Tableau scheme_em() {
    Tableau t = Tableau::zero(1, "EM");
    t.alpha = {1.0};
    t.beta1 = {1.0};
    return t;
}

Tableau scheme_rdi1wm() {
    Tableau t = Tableau::zero(2, "RDI1WM");
    t.alpha = {0.25, 0.75};
    t.beta1 = {1.0, 0.0};
    t.A0(1, 0) = 2.0 / 3.0;
    t.B0(1, 0) = 2.0 / 3.0;
    t.refresh_nodes();
    return t;
}

// Diffusion part common to RDI2WM, RDI3WM and RDI4WM.
Tableau rdi_diffusion_part(std::string name) {
    const double r23 = std::sqrt(2.0 / 3.0);
    const double r2 = std::sqrt(2.0);
    const double r6 = std::sqrt(6.0);
    Tableau t = Tableau::zero(3, std::move(name));
    t.beta1 = {0.25, 0.375, 0.375};
    t.beta2 = {0.0, r6 / 4.0, -r6 / 4.0};
    t.beta3 = {-0.25, 0.125, 0.125};
    t.beta4 = {0.0, r2 / 4.0, -r2 / 4.0};
    t.A1(1, 0) = 2.0 / 3.0;
    t.A1(2, 0) = 2.0 / 3.0;
    t.B1(1, 0) = r23;
    t.B1(2, 0) = -r23;
    t.B2(1, 0) = r2;
    t.B2(2, 0) = -r2;
    return t;
}

Tableau scheme_rdi2wm() {
    Tableau t = rdi_diffusion_part("RDI2WM");
    t.alpha = {0.5, 0.5, 0.0};
    t.A0(1, 0) = 1.0;
    t.B0(1, 0) = 1.0;
    t.refresh_nodes();
    return t;
}

Tableau scheme_rdi3wm() {
    const double r15 = std::sqrt(15.0);
    Tableau t = rdi_diffusion_part("RDI3WM");
    t.alpha = {2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0};
    t.A0(1, 0) = 0.5;
    t.A0(2, 1) = 0.75;
    t.B0(1, 0) = (9.0 - 2.0 * r15) / 14.0;
    t.B0(2, 0) = (18.0 + 3.0 * r15) / 28.0;
    t.refresh_nodes();
    return t;
}

Tableau scheme_rdi4wm() {
    const double r6 = std::sqrt(6.0);
    Tableau t = rdi_diffusion_part("RDI4WM");
    t.alpha = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
    t.A0(1, 0) = 0.5;
    t.A0(2, 0) = -1.0;
    t.A0(2, 1) = 2.0;
    t.B0(1, 0) = (6.0 - r6) / 10.0;
    t.B0(2, 0) = (3.0 + 2.0 * r6) / 5.0;
    t.refresh_nodes();
    return t;
}

// Platen's scheme: Case A with c1 = c3 = c4 = 1.
Tableau scheme_pl1wm() {
    Tableau t = Tableau::zero(3, "PL1WM");
    t.alpha = {0.5, 0.5, 0.0};
    t.beta1 = {0.5, 0.25, 0.25};
    t.beta2 = {0.0, 0.5, -0.5};
    t.beta3 = {-0.5, 0.25, 0.25};
    t.beta4 = {0.0, 0.5, -0.5};
    t.A0(1, 0) = 1.0;
    t.B0(1, 0) = 1.0;
    t.A1(1, 0) = 1.0;
    t.A1(2, 0) = 1.0;
    t.B1(1, 0) = 1.0;
    t.B1(2, 0) = -1.0;
    t.B2(1, 0) = 1.0;
    t.B2(2, 0) = -1.0;
    t.refresh_nodes();
    return t;
}

}  // namespace

std::vector<std::string> named_scheme_names() {
    return {"EM", "PL1WM", "RDI1WM", "RDI2WM", "RDI3WM", "RDI4WM"};
}

Tableau named_scheme(std::string_view name) {
    if (name == "EM") return scheme_em();
    if (name == "PL1WM") return scheme_pl1wm();
    if (name == "RDI1WM") return scheme_rdi1wm();
    if (name == "RDI2WM") return scheme_rdi2wm();
    if (name == "RDI3WM") return scheme_rdi3wm();
    if (name == "RDI4WM") return scheme_rdi4wm();
    throw UnknownName("unknown scheme \"" + std::string(name) + "\"");
}

}  // namespace wsrk
