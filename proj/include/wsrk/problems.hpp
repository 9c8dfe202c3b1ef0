#pragma once

#include <string>
#include <string_view>

#include "wsrk/integrator.hpp"

namespace wsrk {

/// Built-in test problem: an SDE, the functional f and E f(X_t) in closed form.
struct NamedProblem {
    SdeProblem sde;
    std::string name;
    Functional f;
    std::string f_description;
    double t_eval = 1.0;  // default evaluation time (the end of the interval)
};

/// dX = (X/2 + sqrt(X^2 + 1)) dt + sqrt(X^2 + 1) dW, X_0 = 0 on [0, 2].
/// The solution is sinh(t + W_t); with f(x) = p(arsinh x), p(z) = z^3 - 6z^2 + 8z,
/// E f(X_t) = t^3 - 3t^2 + 2t.
NamedProblem problem_nonlinear();

/// Linear 2-d system driven by a 2-d Wiener process with non-commutative
/// noise, X_0 = (1, 1), f(x) = (x^1)^2, E f(X_t) = exp(-t), evaluated at t = 4.
NamedProblem problem_2d();

/// dX = a X dt + b X dW, X_0 = x0 on [0, T], f(x) = x^power (power 1 or 2).
NamedProblem problem_linear(double a, double b, int power, double x0 = 1.0, double T = 1.0);

/// "nonlinear16", "system18" or "linear:a=..,b=..,p=.." (keys optional,
/// defaults a=1, b=1, p=1). Throws UnknownName / InvalidArgument.
NamedProblem problem_by_name(std::string_view spec);

}  // namespace wsrk
