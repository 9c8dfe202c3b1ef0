#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "wsrk/tableau.hpp"

namespace wsrk {

/// Every order condition the library knows about.
///
/// W1..W50 are the weak order-one (W1..W7) and order-two (W8..W50)
/// conditions. D3A/D3B are the classical deterministic order-3 conditions,
/// D4A/D4B/D4C three of the order-4 ones. T1 and T2 are two stochastic
/// order-3 tree conditions used to pick optimal schemes; they are reported
/// but never raise the inferred order.
enum class ConditionId : std::size_t {
    W1, W2, W3, W4, W5, W6, W7, W8, W9, W10,
    W11, W12, W13, W14, W15, W16, W17, W18, W19, W20,
    W21, W22, W23, W24, W25, W26, W27, W28, W29, W30,
    W31, W32, W33, W34, W35, W36, W37, W38, W39, W40,
    W41, W42, W43, W44, W45, W46, W47, W48, W49, W50,
    D3A, D3B, D4A, D4B, D4C, T1, T2,
};

inline constexpr std::size_t kConditionCount = 57;

constexpr std::size_t index_of(ConditionId id) { return static_cast<std::size_t>(id); }
constexpr ConditionId condition_at(std::size_t i) { return static_cast<ConditionId>(i); }

/// W-condition with 1-based number n (1..50).
constexpr ConditionId weak_condition(int n) { return condition_at(static_cast<std::size_t>(n - 1)); }

std::string_view to_string(ConditionId id);
std::optional<ConditionId> condition_from_string(std::string_view tag);

/// The defining equation as text, e.g. "alpha^T (B0 e)^2 = 1/2".
std::string_view formula(ConditionId id);

/// Right-hand side of the condition.
double target(ConditionId id);

/// True when the condition involves only alpha and A0 (the part that
/// survives on ODEs, b == 0).
bool is_deterministic(ConditionId id);

/// LHS - RHS of the condition for tableau `t`.
double evaluate(const Tableau& t, ConditionId id);

inline constexpr double kDefaultConditionTolerance = 1e-12;

struct ConditionReport {
    std::array<double, kConditionCount> residuals{};
    std::array<bool, kConditionCount> satisfied{};
    double tolerance = kDefaultConditionTolerance;
    OrderClaim inferred;

    double residual(ConditionId id) const { return residuals[index_of(id)]; }
    bool ok(ConditionId id) const { return satisfied[index_of(id)]; }

    /// True iff every condition in [first, last] (enum order) is satisfied.
    bool all_ok(ConditionId first, ConditionId last) const;
};

ConditionReport evaluate_all(const Tableau& t, double tol = kDefaultConditionTolerance);

/// Fixed-width table: id, residual, pass/fail, and the inferred order.
std::string format_report_text(const ConditionReport& report);

/// CSV with header "id,residual,satisfied".
std::string format_report_csv(const ConditionReport& report);

}  // namespace wsrk
