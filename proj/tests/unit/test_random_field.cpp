#include "lstmsv/errors.hpp"
#include "lstmsv/math.hpp"
#include "lstmsv/random_field.hpp"
#include "lstmsv/resample.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

using namespace lstmsv;
using namespace lstmsv::filter;

namespace {

bool rows_equal(const RandomField& a, const RandomField& b, std::size_t t) {
    auto pa = a.proposal(t), pb = b.proposal(t);
    if (!std::equal(pa.begin(), pa.end(), pb.begin())) return false;
    if (t + 1 < a.steps()) {
        auto ra = a.resample_normals(t), rb = b.resample_normals(t);
        if (!std::equal(ra.begin(), ra.end(), rb.begin())) return false;
    }
    return true;
}

}  // namespace

TEST(RandomField, BlocksAreContiguousAndBalanced) {
    Rng rng(1);
    for (std::size_t T : {1u, 7u, 30u, 500u, 1001u}) {
        for (std::size_t G : {1u, 3u, 7u, 200u}) {
            const RandomField f(T, 4, G, rng);
            EXPECT_EQ(f.block_count(), std::min(G, T));
            std::size_t smallest = T, largest = 0, covered = 0;
            for (std::size_t b = 0; b < f.block_count(); ++b) {
                const std::size_t len = f.block_end(b) - f.block_begin(b);
                smallest = std::min(smallest, len);
                largest = std::max(largest, len);
                if (b > 0) EXPECT_EQ(f.block_begin(b), f.block_end(b - 1));
                for (std::size_t t = f.block_begin(b); t < f.block_end(b); ++t) EXPECT_EQ(f.block_of(t), b);
                covered += len;
            }
            EXPECT_EQ(covered, T);
            EXPECT_GE(smallest, 1u);
            EXPECT_LE(largest - smallest, 1u);
        }
    }
}

TEST(RandomField, BlockFormula) {
    Rng rng(2);
    const RandomField f(10, 1, 4, rng);
    // ⌈t·4/10⌉ for t = 1..10 → 1 1 2 2 2 3 3 4 4 4.
    const std::vector<std::size_t> expect{0, 0, 1, 1, 1, 2, 2, 3, 3, 3};
    for (std::size_t t = 0; t < 10; ++t) EXPECT_EQ(f.block_of(t), expect[t]);
}

TEST(RandomField, CachesMatchDraws) {
    Rng rng(3);
    RandomField f(20, 50, 5, rng);
    f.refresh_block(2, rng);
    for (std::size_t t = 0; t + 1 < f.steps(); ++t) {
        const auto r = f.resample_normals(t);
        const auto u = f.uniforms(t);
        const auto ord = f.uniform_order(t);
        for (std::size_t k = 0; k < f.particles(); ++k) EXPECT_DOUBLE_EQ(u[k], normal_cdf(r[k]));
        for (std::size_t k = 1; k < f.particles(); ++k) EXPECT_LE(u[ord[k - 1]], u[ord[k]]);
    }
}

TEST(RandomField, RefreshTouchesExactlyOneBlock) {
    Rng rng(4);
    RandomField f(50, 8, 10, rng);
    const RandomField before = f;
    Rng r2(99);
    f.refresh_block(6, r2);
    for (std::size_t t = 0; t < 50; ++t) EXPECT_EQ(rows_equal(f, before, t), f.block_of(t) != 6) << t;
    f.restore();
    for (std::size_t t = 0; t < 50; ++t) EXPECT_TRUE(rows_equal(f, before, t));
    for (std::size_t t = 0; t + 1 < 50; ++t) {
        auto a = f.uniform_order(t), b = before.uniform_order(t);
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
    }
}

TEST(RandomField, CommitMakesRestoreANoOp) {
    Rng rng(5);
    RandomField f(12, 3, 4, rng);
    f.refresh_block(3, rng);
    const RandomField after = f;
    f.commit();
    f.restore();
    for (std::size_t t = 0; t < 12; ++t) EXPECT_TRUE(rows_equal(f, after, t));
}

TEST(RandomField, Errors) {
    Rng rng(6);
    EXPECT_THROW(RandomField(0, 1, 1, rng), SizeError);
    EXPECT_THROW(RandomField(5, 0, 1, rng), SizeError);
    EXPECT_THROW(RandomField(5, 1, 0, rng), SizeError);
    RandomField f(5, 2, 2, rng);
    EXPECT_THROW(f.refresh_block(2, rng), SizeError);
}

TEST(Resample, EqualWeightsMidpointUniforms) {
    const std::size_t n = 9;
    const std::vector<double> z{3.0, -1.0, 7.0, 0.5, 2.0, -4.0, 6.0, 1.0, 5.0};
    const std::vector<double> w(n, 1.0 / n);
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = (k + 0.5) / n;
    const auto anc = sorted_multinomial_resample(z, w, u);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return z[a] < z[b]; });
    EXPECT_EQ(anc, order);
}

TEST(Resample, DegenerateWeight) {
    const std::vector<double> z{0.3, 0.1, 0.2, 0.4};
    const std::vector<double> w{0.0, 0.0, 1.0, 0.0};
    const std::vector<double> u{1e-9, 0.3, 0.7, 1.0 - 1e-12};
    for (auto a : sorted_multinomial_resample(z, w, u)) EXPECT_EQ(a, 2u);
}

TEST(Resample, MultinomialLawChiSquare) {
    const std::vector<double> z{0.2, -1.0, 3.0};
    const std::vector<double> w{0.5, 0.3, 0.2};
    const std::size_t n = 100000;
    std::vector<double> zz(n), ww(n, 0.0), u(n);
    Rng rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // Spread the three particles over n slots so one call draws n ancestors.
    for (std::size_t k = 0; k < n; ++k) {
        zz[k] = z[k % 3] + 1e-12 * static_cast<double>(k);
        u[k] = unif(rng);
    }
    ww[0] = w[0];
    ww[1] = w[1];
    ww[2] = w[2];
    const auto anc = sorted_multinomial_resample(zz, ww, u);
    std::array<double, 3> count{};
    for (auto a : anc) count[a] += 1.0;
    double chi2 = 0.0;
    for (int j = 0; j < 3; ++j) chi2 += std::pow(count[j] - w[j] * n, 2) / (w[j] * n);
    EXPECT_LT(chi2, 9.21);  // χ²₂ 99% quantile
}

TEST(Resample, MergeAgreesWithBinarySearch) {
    Rng rng(8);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rep % 37;
        std::vector<double> z(n), w(n), u(n);
        double total = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            z[k] = normal(rng);
            w[k] = unif(rng) < 0.2 ? 0.0 : unif(rng);
            total += w[k];
            u[k] = unif(rng);
        }
        if (total == 0.0) w[0] = total = 1.0;
        std::vector<double> wn(n);
        for (std::size_t k = 0; k < n; ++k) wn[k] = w[k] / total;
        const auto ref = sorted_multinomial_resample(z, wn, u);

        std::vector<std::uint32_t> order(n), uorder(n), anc(n);
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return z[a] < z[b]; });
        std::iota(uorder.begin(), uorder.end(), 0u);
        std::sort(uorder.begin(), uorder.end(), [&](auto a, auto b) { return u[a] < u[b]; });
        filter::detail::inverse_cdf_merge(order, w, total, u, uorder, anc);
        for (std::size_t k = 0; k < n; ++k) {
            EXPECT_EQ(anc[k], ref[k]);
            EXPECT_GT(w[anc[k]], 0.0);
        }
    }
}

TEST(Resample, Errors) {
    const std::vector<double> z{1, 2};
    EXPECT_THROW((void)sorted_multinomial_resample(z, std::vector<double>{0.5, 0.6}, std::vector<double>{0.1, 0.2}),
                 DomainError);
    EXPECT_THROW((void)sorted_multinomial_resample(z, std::vector<double>{1.5, -0.5}, std::vector<double>{0.1, 0.2}),
                 DomainError);
    EXPECT_THROW((void)sorted_multinomial_resample(z, std::vector<double>{1.0}, std::vector<double>{0.1, 0.2}),
                 SizeError);
    EXPECT_THROW((void)sorted_multinomial_resample(z, std::vector<double>{0.5, 0.5}, std::vector<double>{0.0, 0.2}),
                 DomainError);
}
