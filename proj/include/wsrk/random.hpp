#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "wsrk/tableau.hpp"

namespace wsrk {

/// Counter-based random stream: the n-th output is a fixed function of
/// (key, n), so a stream is fully described by its key and position.
/// Streams for different trajectories are derived from (master seed, index)
/// and never share state. Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t key) noexcept : key_(key) {}

    /// Stream number `index` of the family identified by `seed`.
    static RandomStream derive(std::uint64_t seed, std::uint64_t index) noexcept;

    /// Independent child stream; distinct tags give distinct streams.
    RandomStream split(std::uint64_t tag) const noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Number of 64-bit outputs consumed so far.
    std::uint64_t draws() const noexcept { return counter_; }
    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Random variables of one step: three-point Ihat_(k) and two-point V^{k,l}.
/// The double integrals are Ihat_(k,l) = (Ihat_(k) Ihat_(l) + V^{k,l}) / 2.
struct WeakIncrementBatch {
    double h = 0.0;
    Vector ihat;        // Ihat_(k), k = 0..m-1
    Matrix v;           // V^{k,l}; diagonal is -h, antisymmetric off the diagonal
    bool pairs = true;  // off-diagonal V drawn

    std::size_t noise_dim() const noexcept { return ihat.size(); }

    /// Ihat_(k,l), 0-based. Off-diagonal entries need `pairs`.
    double pair(std::size_t k, std::size_t l) const;
};

/// Draws a batch. With `with_pairs == false` only the m values Ihat_(k) are
/// drawn; V keeps its diagonal -h and zero elsewhere, and off-diagonal
/// `pair()` calls throw. Draw order is Ihat_(1..m) then V^{k,l}, l < k, row
/// by row.
void draw_into(WeakIncrementBatch& batch, std::size_t m, double h, RandomStream& stream,
               bool with_pairs = true);
WeakIncrementBatch draw(std::size_t m, double h, RandomStream& stream, bool with_pairs = true);

/// Gaussian Ihat_(k) ~ N(0, h) for schemes that never read Ihat_(k,l)
/// (Euler-Maruyama with normal increments).
void draw_gaussian_into(WeakIncrementBatch& batch, std::size_t m, double h, RandomStream& stream);

struct SupportAtom {
    WeakIncrementBatch batch;
    double probability = 0.0;
};

inline constexpr std::size_t kMaxEnumerationNoiseDim = 4;

/// Full joint support of one step's random variables, 3^m * 2^(m(m-1)/2)
/// atoms. Throws InvalidArgument for m > 4.
std::vector<SupportAtom> enumerate_support(std::size_t m, double h);

}  // namespace wsrk
