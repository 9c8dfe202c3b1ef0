#include "wsrk/problems.hpp"

#include <charconv>
#include <cmath>

#include "wsrk/error.hpp"

namespace wsrk {

NamedProblem problem_nonlinear() {
    NamedProblem p;
    p.name = "nonlinear16";
    p.sde.dim = 1;
    p.sde.noise_dim = 1;
    p.sde.x0 = {0.0};
    p.sde.t0 = 0.0;
    p.sde.T = 2.0;
    p.sde.drift = [](double, std::span<const double> x, std::span<double> out) {
        out[0] = 0.5 * x[0] + std::sqrt(x[0] * x[0] + 1.0);
    };
    p.sde.diffusion_column = [](double, std::span<const double> x, std::size_t,
                                std::span<double> out) { out[0] = std::sqrt(x[0] * x[0] + 1.0); };
    p.sde.exact_functional = [](double t) { return t * t * t - 3.0 * t * t + 2.0 * t; };
    p.f = [](std::span<const double> x) {
        const double z = std::asinh(x[0]);
        return z * z * z - 6.0 * z * z + 8.0 * z;
    };
    p.f_description = "p(arsinh(x)), p(z) = z^3 - 6z^2 + 8z";
    p.t_eval = 2.0;
    return p;
}

NamedProblem problem_2d() {
    NamedProblem p;
    p.name = "system18";
    p.sde.dim = 2;
    p.sde.noise_dim = 2;
    p.sde.x0 = {1.0, 1.0};
    p.sde.t0 = 0.0;
    p.sde.T = 4.0;
    const double a11 = -273.0 / 512.0;
    const double a21 = -1.0 / 160.0;
    const double a22 = -785.0 / 512.0 + std::sqrt(2.0) / 8.0;
    p.sde.drift = [=](double, std::span<const double> x, std::span<double> out) {
        out[0] = a11 * x[0];
        out[1] = a21 * x[0] + a22 * x[1];
    };
    const double b21 = (1.0 - 2.0 * std::sqrt(2.0)) / 4.0;
    p.sde.diffusion_column = [=](double, std::span<const double> x, std::size_t j,
                                 std::span<double> out) {
        if (j == 0) {
            out[0] = 0.25 * x[0];
            out[1] = b21 * x[1];
        } else {
            out[0] = x[0] / 16.0;
            out[1] = x[0] / 10.0 + x[1] / 16.0;
        }
    };
    p.sde.exact_functional = [](double t) { return std::exp(-t); };
    p.f = [](std::span<const double> x) { return x[0] * x[0]; };
    p.f_description = "(x^1)^2";
    p.t_eval = 4.0;
    return p;
}

NamedProblem problem_linear(double a, double b, int power, double x0, double T) {
    if (power != 1 && power != 2) throw InvalidArgument("linear problem supports p = 1 or 2");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x0))
        throw InvalidArgument("linear problem coefficients must be finite");
    NamedProblem p;
    char buf[96];
    std::snprintf(buf, sizeof buf, "linear:a=%g,b=%g,p=%d", a, b, power);
    p.name = buf;
    p.sde.dim = 1;
    p.sde.noise_dim = 1;
    p.sde.x0 = {x0};
    p.sde.t0 = 0.0;
    p.sde.T = T;
    p.sde.drift = [a](double, std::span<const double> x, std::span<double> out) {
        out[0] = a * x[0];
    };
    p.sde.diffusion_column = [b](double, std::span<const double> x, std::size_t,
                                 std::span<double> out) { out[0] = b * x[0]; };
    if (power == 1) {
        p.sde.exact_functional = [a, x0](double t) { return x0 * std::exp(a * t); };
        p.f = [](std::span<const double> x) { return x[0]; };
        p.f_description = "x";
    } else {
        p.sde.exact_functional = [a, b, x0](double t) {
            return x0 * x0 * std::exp((2.0 * a + b * b) * t);
        };
        p.f = [](std::span<const double> x) { return x[0] * x[0]; };
        p.f_description = "x^2";
    }
    p.t_eval = T;
    return p;
}

namespace {

double parse_double(std::string_view text, std::string_view key) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw InvalidArgument("bad value for " + std::string(key) + ": \"" + std::string(text) +
                              "\"");
    return value;
}

}  // namespace

NamedProblem problem_by_name(std::string_view spec) {
    if (spec == "nonlinear16") return problem_nonlinear();
    if (spec == "system18") return problem_2d();
    if (spec == "linear" || spec.starts_with("linear:")) {
        double a = 1.0, b = 1.0, power = 1.0;
        std::string_view rest = spec.size() > 7 ? spec.substr(7) : std::string_view{};
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw InvalidArgument("expected key=value in \"" + std::string(item) + "\"");
            const std::string_view key = item.substr(0, eq);
            const double value = parse_double(item.substr(eq + 1), key);
            if (key == "a")
                a = value;
            else if (key == "b")
                b = value;
            else if (key == "p")
                power = value;
            else
                throw InvalidArgument("unknown linear problem key \"" + std::string(key) + "\"");
        }
        if (power != 1.0 && power != 2.0)
            throw InvalidArgument("linear problem supports p = 1 or 2");
        return problem_linear(a, b, static_cast<int>(power));
    }
    throw UnknownName("unknown problem \"" + std::string(spec) + "\"");
}

}  // namespace wsrk
