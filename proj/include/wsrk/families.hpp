#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsrk/conditions.hpp"
#include "wsrk/tableau.hpp"

namespace wsrk {

/// Parameter families of the classification.
///
///  - Ord11: one stage, order (1,1) (Euler-Maruyama up to the sign of c1).
///  - Ord21: two stages, order (2,1).
///  - CaseA .. Case223: three stages, order (2,2); the case splits on alpha_3
///    and B0_21 as in the classification.
///  - Ord32_*: three-stage (3,2) specialisations of Case212, Case221 (three
///    sub-cases a/b/c) and Case223 (sub-cases a and c).
enum class Family {
    Ord11,
    Ord21,
    CaseA,
    Case211,
    Case212,
    Case221,
    Case222,
    Case223,
    Ord32_212,
    Ord32_221A,
    Ord32_221B,
    Ord32_221C,
    Ord32_223A,
    Ord32_223C,
};

inline constexpr std::array kAllFamilies = {
    Family::Ord11,      Family::Ord21,      Family::CaseA,      Family::Case211,
    Family::Case212,    Family::Case221,    Family::Case222,    Family::Case223,
    Family::Ord32_212,  Family::Ord32_221A, Family::Ord32_221B, Family::Ord32_221C,
    Family::Ord32_223A, Family::Ord32_223C,
};

/// CLI spelling, e.g. "ord32-221c", "case-211".
std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view name);

/// Free parameters. Unset slots take family defaults: c1 = 1; in the
/// three-stage families c3 = sqrt(2/3) and c4 = sqrt(2); everything else 0.
/// Parameters a family derives itself (e.g. c6, c7, c9 in Ord32_221C) must be
/// left unset.
struct FamilyParams {
    Family family = Family::Ord11;
    std::array<std::optional<double>, 12> c{};  // c[1]..c[11]; c[0] unused
    std::optional<double> lambda;
    int sign_branch = +1;  // picks the upper (+1) or lower (-1) sign of a "+-" choice
};

/// Order conditions a family is classified for.
std::vector<ConditionId> classified_conditions(Family f);

/// Order the classification promises for a family.
OrderClaim classified_order(Family f);

/// Admissibility tolerance for excluded-value sets (|x - excluded| > tol).
inline constexpr double kExclusionTolerance = 1e-12;

/// Builds the tableau of a family. Throws ConstraintViolation naming the
/// first failed admissibility condition, InvalidArgument for parameters the
/// family does not take.
Tableau make_family(const FamilyParams& p);

/// EM, PL1WM, RDI1WM, RDI2WM, RDI3WM, RDI4WM. Throws UnknownName.
Tableau named_scheme(std::string_view name);

std::vector<std::string> named_scheme_names();

}  // namespace wsrk
