#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "wsrk/error.hpp"
#include "wsrk/random.hpp"

using namespace wsrk;

namespace {

double rel_err(double got, double want) {
    return want == 0.0 ? std::fabs(got) : std::fabs(got - want) / std::fabs(want);
}

}  // namespace

TEST(RandomStream, SameKeySameSequence) {
    RandomStream a = RandomStream::derive(42, 7), b = RandomStream::derive(42, 7);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
    EXPECT_EQ(a.draws(), 1000u);
}

TEST(RandomStream, DerivedAndSplitStreamsDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t i = 0; i < 1000; ++i) firsts.insert(RandomStream::derive(1, i)());
    for (std::uint64_t s = 0; s < 1000; ++s) firsts.insert(RandomStream::derive(s + 2, 0)());
    const RandomStream parent = RandomStream::derive(1, 0);
    for (std::uint64_t tag = 0; tag < 1000; ++tag) firsts.insert(parent.split(tag)());
    EXPECT_EQ(firsts.size(), 3000u);
    EXPECT_NE(parent.split(0).key(), parent.key());
}

TEST(RandomStream, UniformRangeAndMean) {
    RandomStream r(123);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Draw, SingleNoiseBatch) {
    RandomStream r(5);
    for (double h : {1.0, 0.01}) {
        const WeakIncrementBatch b = draw(1, h, r);
        EXPECT_EQ(b.v(0, 0), -h);
        EXPECT_DOUBLE_EQ(b.pair(0, 0), 0.5 * (b.ihat[0] * b.ihat[0] - h));
    }
}

TEST(Draw, BatchInvariants) {
    RandomStream r(77);
    for (std::size_t m = 1; m <= 5; ++m) {
        for (int trial = 0; trial < 2000; ++trial) {
            const double h = 0.25;
            const WeakIncrementBatch b = draw(m, h, r);
            ASSERT_EQ(b.noise_dim(), m);
            const double a = std::sqrt(3.0 * h);
            for (std::size_t k = 0; k < m; ++k) {
                ASSERT_TRUE(b.ihat[k] == 0.0 || b.ihat[k] == a || b.ihat[k] == -a);
                ASSERT_EQ(b.v(k, k), -h);
                for (std::size_t l = 0; l < m; ++l) {
                    if (l == k) continue;
                    ASSERT_TRUE(b.v(k, l) == h || b.v(k, l) == -h);
                    ASSERT_EQ(b.v(k, l), -b.v(l, k));
                    ASSERT_DOUBLE_EQ(b.pair(k, l), 0.5 * (b.ihat[k] * b.ihat[l] + b.v(k, l)));
                }
            }
        }
    }
}

TEST(Draw, DrawOrderAndCounterUse) {
    RandomStream r(9);
    const WeakIncrementBatch b = draw(3, 1.0, r);
    (void)b;
    EXPECT_EQ(r.draws(), 3u + 3u);
    RandomStream q(9);
    draw(3, 1.0, q, false);
    EXPECT_EQ(q.draws(), 3u);
}

TEST(Draw, WithoutPairsOffDiagonalIsUnavailable) {
    RandomStream r(11);
    const WeakIncrementBatch b = draw(2, 1.0, r, false);
    EXPECT_FALSE(b.pairs);
    EXPECT_NO_THROW(b.pair(1, 1));
    EXPECT_THROW(b.pair(0, 1), InvalidArgument);
}

TEST(Draw, Reproducible) {
    RandomStream a = RandomStream::derive(3, 3), b = RandomStream::derive(3, 3);
    for (int i = 0; i < 100; ++i) {
        const WeakIncrementBatch x = draw(3, 0.5, a), y = draw(3, 0.5, b);
        EXPECT_EQ(x.ihat, y.ihat);
        EXPECT_EQ(x.v, y.v);
    }
}

TEST(Draw, EmpiricalMoments) {
    RandomStream r(2024);
    const int n = 1000000;
    double s1 = 0.0, s2 = 0.0, v = 0.0;
    std::map<double, int> counts;
    WeakIncrementBatch b;
    for (int i = 0; i < n; ++i) {
        draw_into(b, 2, 1.0, r);
        s1 += b.ihat[0];
        s2 += b.ihat[0] * b.ihat[0];
        v += b.v(1, 0);
        ++counts[b.ihat[0]];
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.005);
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
    EXPECT_NEAR(v / n, 0.0, 0.005);
    ASSERT_EQ(counts.size(), 3u);
    EXPECT_NEAR(counts[0.0] / double(n), 2.0 / 3.0, 0.003);
    EXPECT_NEAR(counts[std::sqrt(3.0)] / double(n), 1.0 / 6.0, 0.003);
}

TEST(Draw, GaussianIncrements) {
    RandomStream r(31);
    const int n = 400000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    WeakIncrementBatch b;
    for (int i = 0; i < n; ++i) {
        draw_gaussian_into(b, 1, 0.5, r);
        const double x = b.ihat[0];
        s1 += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    EXPECT_NEAR(s1 / n, 0.0, 5.0 * std::sqrt(0.5 / n));
    EXPECT_NEAR(s2 / n, 0.5, 5.0 * std::sqrt(2.0 * 0.25 / n));
    EXPECT_NEAR(s4 / n, 3.0 * 0.25, 0.02);
    EXPECT_EQ(b.v(0, 0), -0.5);
}

TEST(Enumerate, SupportSizesAndProbabilities) {
    const auto one = enumerate_support(1, 1.0);
    ASSERT_EQ(one.size(), 3u);
    std::multiset<double> probs;
    for (const auto& a : one) probs.insert(a.probability);
    EXPECT_EQ(probs, (std::multiset<double>{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}));

    const std::size_t expected[] = {0, 3, 18, 216, 5184};
    for (std::size_t m = 1; m <= 4; ++m) {
        const auto atoms = enumerate_support(m, 0.3);
        EXPECT_EQ(atoms.size(), expected[m]);
        double total = 0.0;
        for (const auto& a : atoms) {
            EXPECT_GT(a.probability, 0.0);
            EXPECT_LE(a.probability, 1.0);
            total += a.probability;
        }
        // Naive summation error grows with the atom count.
        EXPECT_NEAR(total, 1.0, 1e-16 * static_cast<double>(atoms.size()));
    }
}

TEST(Enumerate, AtomsAreDistinctOutcomes) {
    const auto atoms = enumerate_support(3, 1.0);
    std::set<std::vector<double>> seen;
    for (const auto& a : atoms) {
        std::vector<double> key = a.batch.ihat;
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t l = 0; l < k; ++l) key.push_back(a.batch.v(k, l));
        seen.insert(key);
    }
    EXPECT_EQ(seen.size(), atoms.size());
}

TEST(Enumerate, ExactMoments) {
    for (std::size_t m = 1; m <= 3; ++m) {
        for (double h : {1.0, 0.01, 0.37}) {
            const auto atoms = enumerate_support(m, h);
            for (std::size_t k = 0; k < m; ++k) {
                double e[6] = {0, 0, 0, 0, 0, 0};
                for (const auto& a : atoms)
                    for (int p = 1; p <= 5; ++p) e[p] += a.probability * std::pow(a.batch.ihat[k], p);
                EXPECT_LE(std::fabs(e[1]), 1e-14 * std::sqrt(h));
                EXPECT_LE(rel_err(e[2], h), 1e-14);
                EXPECT_LE(std::fabs(e[3]), 1e-14 * std::pow(h, 1.5));
                EXPECT_LE(rel_err(e[4], 3.0 * h * h), 1e-14);
                EXPECT_LE(std::fabs(e[5]), 1e-14 * std::pow(h, 2.5));
                for (std::size_t l = 0; l < m; ++l) {
                    double mean = 0.0, second = 0.0;
                    for (const auto& a : atoms) {
                        const double x = a.batch.pair(k, l);
                        mean += a.probability * x;
                        second += a.probability * x * x;
                    }
                    EXPECT_LE(std::fabs(mean), 1e-14 * h) << m << " " << k << " " << l;
                    if (k != l) EXPECT_LE(rel_err(second, h * h / 2.0), 1e-14);
                }
            }
        }
    }
}

TEST(Enumerate, DiagonalDoubleIntegralHasZeroMean) {
    double sum = 0.0;
    for (const auto& a : enumerate_support(1, 1.0))
        sum += a.probability * 0.5 * (a.batch.ihat[0] * a.batch.ihat[0] - 1.0);
    EXPECT_NEAR(sum, 0.0, 1e-16);
}

TEST(Enumerate, RejectsBadArguments) {
    EXPECT_THROW(enumerate_support(5, 1.0), InvalidArgument);
    EXPECT_THROW(enumerate_support(0, 1.0), InvalidArgument);
    EXPECT_THROW(enumerate_support(1, 0.0), InvalidArgument);
}
