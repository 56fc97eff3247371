// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <splatpose/error.hpp>
#include <splatpose/spectrum.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace splatpose;
using namespace splatpose::spectrum;
using splatpose::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

// d/du of the alignment loss from pairwise Gaussian cross-correlations.
double
closed_form_gradient(const GaussianMixture1D &f, double u, double sigma) {
    double g = 0.0;
    for (const auto &a : f.components) {
        for (const auto &b : f.components) {
            const double d = a.mean - b.mean + u;
            const double v = a.stddev * a.stddev + b.stddev * b.stddev + 2.0 * sigma * sigma;
            g += 2.0 * a.amplitude * b.amplitude * d / v * std::exp(-d * d / (2.0 * v)) /
                 std::sqrt(2.0 * kPi * v);
        }
    }
    return g;
}

GaussianMixture1D
single(double s) {
    return GaussianMixture1D{{{1.0, 0.0, s}}};
}

GaussianMixture1D
random_mixture(Gen &gen) {
    GaussianMixture1D f;
    const int n = gen.integer(1, 6);
    for (int i = 0; i < n; ++i) {
        f.components.push_back(
            {gen.uniform(-1.0, 1.0), gen.uniform(-0.3, 0.3), gen.uniform(0.03, 0.15)});
    }
    return f;
}

} // namespace

TEST(Kernel, WorkedExamples) {
    EXPECT_EQ(kernel_H(0.0, 3.7), 0.0);
    EXPECT_NEAR(kernel_H(0.25, 1.0), 4.0 * kPi, 1e-14);
    EXPECT_NEAR(smoothed_kernel(0.25, 1.0, 1.0), 8.993959843337729e-17, 1e-30);
    Gen gen(1);
    for (int i = 0; i < 100; ++i) {
        const double u = gen.uniform(-1, 1), k = gen.uniform(0, 20);
        EXPECT_EQ(kernel_H(-u, k), -kernel_H(u, k));
        EXPECT_EQ(smoothed_kernel(u, k, 0.0), kernel_H(u, k));
        EXPECT_EQ(smoothed_kernel(u, 0.0, gen.uniform(0, 2)), 0.0);
    }
}

TEST(Kernel, SmoothingVanishesForLargeSigma) {
    for (double k : {0.5, 1.0, 5.0}) {
        double last = std::abs(smoothed_kernel(0.1, k, 0.0));
        for (double s : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
            const double v = std::abs(smoothed_kernel(0.1, k, s));
            EXPECT_LE(v, last);
            last = v;
        }
        EXPECT_LT(last, 1e-10);
    }
}

TEST(Mixture, ParseAndValidate) {
    const GaussianMixture1D f = GaussianMixture1D::parse("1:0:0.05, -0.5:0.2:0.1");
    ASSERT_EQ(f.components.size(), 2u);
    EXPECT_EQ(f.components[1].amplitude, -0.5);
    EXPECT_EQ(f.components[1].mean, 0.2);
    EXPECT_EQ(f.components[1].stddev, 0.1);
    EXPECT_THROW(GaussianMixture1D::parse(""), InvalidInput);
    EXPECT_THROW(GaussianMixture1D::parse("1:0"), InvalidInput);
    EXPECT_THROW(GaussianMixture1D::parse("1:0:0"), InvalidInput);
    EXPECT_THROW(GaussianMixture1D::parse("1:0:x"), InvalidInput);
    EXPECT_THROW(GaussianMixture1D::parse("nan:0:1"), InvalidInput);
}

TEST(Mixture, BlurAddsVariance) {
    const GaussianMixture1D f = single(0.3);
    const GaussianMixture1D g = single(0.5);
    for (double x : {-0.4, 0.0, 0.7}) {
        EXPECT_NEAR(f.evaluate(x, 0.4), g.evaluate(x), 1e-14);
    }
    EXPECT_NEAR(f.power_spectrum(0.0), 1.0, 1e-15);
    EXPECT_NEAR(f.power_spectrum(1.3, 0.4), g.power_spectrum(1.3), 1e-15);
    EXPECT_NEAR(f.min_stddev(0.4), 0.5, 1e-15);
}

TEST(SpectralGradient, SingleComponentMatchesOracles) {
    const GaussianMixture1D f = single(0.05);
    const SpectralGrid grid{40.0, 4096};
    const double spectral = spectral_alignment_gradient(f, 0.1, 0.0, grid);
    const double spatial = spatial_gradient_oracle(f, 0.1, 0.0);
    EXPECT_NEAR(spectral, 83.02149948411894, 83.02149948411894 * 1e-6);
    EXPECT_LT(std::abs(spectral - spatial) / std::abs(spatial), 1e-3);
}

TEST(SpectralGradient, TwoComponentBlurredValue) {
    const GaussianMixture1D f = GaussianMixture1D::parse("1:0:0.05,-0.5:0.2:0.1");
    const double v = spectral_alignment_gradient(f, 0.05, 0.02, resolve_grid(f, 0.05, 0.02));
    EXPECT_NEAR(v, 86.47809372462065, 86.47809372462065 * 1e-6);
}

TEST(SpectralGradient, ZeroAtZeroOffsetAndOddInOffset) {
    Gen gen(2);
    for (int i = 0; i < 20; ++i) {
        const GaussianMixture1D f = random_mixture(gen);
        const double s = gen.uniform(0.0, 0.1);
        const double u = gen.uniform(0.01, 0.3);
        EXPECT_NEAR(spectral_alignment_gradient(f, 0.0, s, resolve_grid(f, 0.0, s)), 0.0, 1e-10);
        const SpectralGrid grid = resolve_grid(f, u, s);
        EXPECT_NEAR(spectral_alignment_gradient(f, u, s, grid),
                    -spectral_alignment_gradient(f, -u, s, grid), 1e-10);
        EXPECT_NEAR(spatial_gradient_oracle(f, 0.0, s), 0.0, 1e-8);
    }
}

TEST(SpectralGradient, AgreesWithClosedFormOnRandomMixtures) {
    Gen gen(3);
    for (int i = 0; i < 30; ++i) {
        const GaussianMixture1D f = random_mixture(gen);
        for (double s : {0.0, 0.02, 0.1}) {
            for (double u : {-0.2, 0.05}) {
                const double expect = closed_form_gradient(f, u, s);
                const double got = spectral_alignment_gradient(f, u, s, resolve_grid(f, u, s));
                EXPECT_NEAR(got, expect, std::max(1e-8, 1e-6 * std::abs(expect)));
            }
        }
    }
}

TEST(SpectralGradient, RejectsUnderResolvedGrids) {
    const GaussianMixture1D f = single(0.05);
    EXPECT_THROW(spectral_alignment_gradient(f, 0.1, 0.0, SpectralGrid{5.0, 4096}),
                 PreconditionError);
    EXPECT_THROW(spectral_alignment_gradient(f, 0.1, 0.0, SpectralGrid{40.0, 16}),
                 PreconditionError);
    EXPECT_THROW(spectral_alignment_gradient(f, 50.0, 0.0, SpectralGrid{40.0, 4096}),
                 PreconditionError);
    EXPECT_THROW((SpectralGrid{40.0, 8}.validate()), InvalidInput);
}

TEST(SpatialOracle, MatchesClosedForm) {
    Gen gen(4);
    for (int i = 0; i < 10; ++i) {
        const GaussianMixture1D f = random_mixture(gen);
        const double u = gen.uniform(-0.2, 0.2);
        const double expect = closed_form_gradient(f, u, 0.02);
        EXPECT_NEAR(spatial_gradient_oracle(f, u, 0.02), expect,
                    std::max(1e-8, 1e-4 * std::abs(expect)));
        EXPECT_NEAR(spatial_alignment_loss(f, 0.0, 0.02), 0.0, 1e-14);
    }
}

TEST(Oscillation, WideGaussianIsQuasiConvex) {
    EXPECT_EQ(oscillation_count(single(0.3), -0.5, 0.5, 0.0), 1);
}

TEST(Oscillation, CombOscillatesUntilSmoothed) {
    const GaussianMixture1D comb = high_frequency_comb();
    ASSERT_EQ(comb.components.size(), 20u);
    EXPECT_GT(oscillation_count(comb, -0.5, 0.5, 0.0), 5);
    EXPECT_EQ(oscillation_count(comb, -0.5, 0.5, 0.1), 1);
}
