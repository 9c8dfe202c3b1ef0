#include "wsrk/random.hpp"

#include <cmath>
#include <random>

#include "wsrk/error.hpp"

namespace wsrk {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t index) noexcept {
    return RandomStream(mix64(mix64(seed) ^ mix64(index * kGamma + 0x632be59bd9b4e019ULL)));
}

RandomStream RandomStream::split(std::uint64_t tag) const noexcept {
    return RandomStream(mix64(key_ ^ mix64((tag + 1) * 0xd1b54a32d192ed03ULL)));
}

RandomStream::result_type RandomStream::operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

double WeakIncrementBatch::pair(std::size_t k, std::size_t l) const {
    if (k != l && !pairs) throw InvalidArgument("off-diagonal double integrals were not drawn");
    return 0.5 * (ihat[k] * ihat[l] + v(k, l));
}

void draw_into(WeakIncrementBatch& batch, std::size_t m, double h, RandomStream& stream,
               bool with_pairs) {
    if (batch.ihat.size() != m) {
        batch.ihat.assign(m, 0.0);
        batch.v = Matrix(m);
    }
    batch.h = h;
    batch.pairs = with_pairs;
    const double jump = std::sqrt(3.0 * h);
    for (std::size_t k = 0; k < m; ++k) {
        const double u = stream.uniform();
        batch.ihat[k] = u < 1.0 / 6.0 ? -jump : (u < 5.0 / 6.0 ? 0.0 : jump);
    }
    for (std::size_t k = 0; k < m; ++k) {
        batch.v(k, k) = -h;
        for (std::size_t l = 0; l < k; ++l) {
            const double x = with_pairs ? (stream.uniform() < 0.5 ? -h : h) : 0.0;
            batch.v(k, l) = x;
            batch.v(l, k) = -x;
        }
    }
}

WeakIncrementBatch draw(std::size_t m, double h, RandomStream& stream, bool with_pairs) {
    WeakIncrementBatch batch;
    draw_into(batch, m, h, stream, with_pairs);
    return batch;
}

void draw_gaussian_into(WeakIncrementBatch& batch, std::size_t m, double h,
                        RandomStream& stream) {
    if (batch.ihat.size() != m) {
        batch.ihat.assign(m, 0.0);
        batch.v = Matrix(m);
    }
    batch.h = h;
    batch.pairs = false;
    std::normal_distribution<double> normal(0.0, std::sqrt(h));
    for (std::size_t k = 0; k < m; ++k) {
        batch.ihat[k] = normal(stream);
        batch.v(k, k) = -h;
    }
}

std::vector<SupportAtom> enumerate_support(std::size_t m, double h) {
    if (m == 0) throw InvalidArgument("noise dimension must be at least 1");
    if (m > kMaxEnumerationNoiseDim)
        throw InvalidArgument("exact enumeration supports noise dimension up to 4");
    if (!(h > 0.0)) throw InvalidArgument("step size must be positive");

    const double jump = std::sqrt(3.0 * h);
    const double values[3] = {-jump, 0.0, jump};
    const double probs[3] = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
    const std::size_t n_pairs = m * (m - 1) / 2;

    std::size_t n_ihat = 1;
    for (std::size_t k = 0; k < m; ++k) n_ihat *= 3;
    const std::size_t n_signs = std::size_t{1} << n_pairs;

    std::vector<SupportAtom> atoms;
    atoms.reserve(n_ihat * n_signs);
    for (std::size_t a = 0; a < n_ihat; ++a) {
        for (std::size_t sgn = 0; sgn < n_signs; ++sgn) {
            SupportAtom atom;
            atom.batch.h = h;
            atom.batch.ihat.assign(m, 0.0);
            atom.batch.v = Matrix(m);
            double p = 1.0;
            std::size_t code = a;
            for (std::size_t k = 0; k < m; ++k) {
                atom.batch.ihat[k] = values[code % 3];
                p *= probs[code % 3];
                code /= 3;
            }
            std::size_t bit = 0;
            for (std::size_t k = 0; k < m; ++k) {
                atom.batch.v(k, k) = -h;
                for (std::size_t l = 0; l < k; ++l, ++bit) {
                    const double x = (sgn >> bit) & 1U ? h : -h;
                    atom.batch.v(k, l) = x;
                    atom.batch.v(l, k) = -x;
                    p *= 0.5;
                }
            }
            atom.probability = p;
            atoms.push_back(std::move(atom));
        }
    }
    return atoms;
}

}  // namespace wsrk
