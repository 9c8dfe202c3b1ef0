#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsrk {

using Vector = std::vector<double>;

/// Dense square matrix, row-major. Stage counts are small (s <= 16).
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

// Vector helpers. Products of vectors are component-wise.
Vector ones(std::size_t n);
double dot(std::span<const double> a, std::span<const double> b);
Vector matvec(const Matrix& m, std::span<const double> v);
Vector hadamard(std::span<const double> a, std::span<const double> b);
Vector power(std::span<const double> v, int exponent);

/// Coefficients of an explicit s-stage SRK scheme.
///
/// A0/B0 drive the drift stages H^(0), A1/B1 the diffusion stages H^(k) and
/// A2/B2 the auxiliary stages Hhat^(k). The node vectors c0, c1, c2 are always
/// A^(q) e; `refresh_nodes()` restores that after editing a matrix.
struct Tableau {
    std::string name;
    std::size_t stages = 0;

    Vector alpha, beta1, beta2, beta3, beta4;
    Matrix A0, A1, A2, B0, B1, B2;
    Vector c0, c1, c2;

    /// Zero tableau with `s` stages and consistent nodes.
    static Tableau zero(std::size_t s, std::string name = {});

    void refresh_nodes();

    const Matrix& a_matrix(int q) const;
    const Matrix& b_matrix(int q) const;
    Matrix& a_matrix(int q);
    Matrix& b_matrix(int q);

    bool operator==(const Tableau&) const = default;
};

enum class ViolationKind { Shape, NonFinite, Explicitness, NodeMismatch };

/// One structural defect reported by `validate`. Indices are 1-based;
/// `matrix` is "A0".."B2" (or "c0".."c2" for node mismatches, a vector name
/// for shape/finite errors).
struct Violation {
    ViolationKind kind;
    std::string matrix;
    std::size_t row = 0;
    std::size_t col = 0;
    std::string message;
};

/// Deterministic and stochastic order (p_D, p_S).
struct OrderClaim {
    int deterministic = 0;
    int stochastic = 0;

    bool operator==(const OrderClaim&) const = default;
};

inline constexpr double kNodeTolerance = 1e-14;

std::vector<Violation> validate(const Tableau& t);

/// JSON text with keys "s", "alpha", "beta1".."beta4", "A0".."B2" and
/// optional "name". Node vectors are not written; they follow from A^(q).
std::string serialize(const Tableau& t);

/// Parses the JSON tableau format. Throws ParseError on malformed text, wrong
/// shapes, non-finite numbers, or structural violations. Optional "c0".."c2"
/// keys are checked against A^(q) e and otherwise ignored.
Tableau deserialize(std::string_view text);

}  // namespace wsrk
