// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace splatpose::spectrum {

/// H(u, k) = 4 pi k sin(2 pi k u).
double kernel_H(double u, double k);

/// exp(-4 pi^2 k^2 sigma^2) * H(u, k): the kernel weighted by the squared
/// transform of a unit-integral Gaussian of standard deviation sigma.
double smoothed_kernel(double u, double k, double sigma);

struct MixtureComponent {
    double amplitude = 1.0;
    double mean = 0.0;
    double stddev = 1.0;
};

/// f(x) = sum_i a_i N(x; m_i, s_i^2) with unit-integral components.
struct GaussianMixture1D {
    std::vector<MixtureComponent> components;

    /// Throws InvalidInput on an empty mixture, non-positive stddev or
    /// non-finite values.
    void validate() const;

    /// f blurred by N(0, sigma^2), evaluated at x.
    double evaluate(double x, double sigma = 0.0) const;

    /// |F[f_sigma](k)|^2 with F[g](k) = integral g(x) exp(-2 pi i k x) dx.
    double power_spectrum(double k, double sigma = 0.0) const;

    /// Smallest blurred stddev sqrt(s_i^2 + sigma^2).
    double min_stddev(double sigma) const;
    double max_stddev(double sigma) const;

    /// Width of the interval holding every component to +-8 blurred stddevs.
    double support_width(double sigma) const;

    /// Parses "a:m:s,a:m:s,..." and validates. Throws InvalidInput.
    static GaussianMixture1D parse(const std::string &text);
};

/// Uniform samples 0, dk, ..., k_max on the non-negative wavenumber axis.
struct SpectralGrid {
    double k_max = 40.0;
    int n_samples = 4096;

    double
    spacing() const {
        return k_max / static_cast<double>(n_samples - 1);
    }
    void validate() const;
};

/// A grid that satisfies the resolution preconditions of
/// spectral_alignment_gradient for this mixture, offset and blur.
SpectralGrid resolve_grid(const GaussianMixture1D &f, double u, double sigma,
                          int min_samples = 4096);

/// d/du of the L2 alignment loss integral (f_sigma(x - u) - f_sigma(x))^2 dx,
/// computed in the frequency domain as 2 * integral_0^k_max |F_sigma|^2 H(u,k) dk
/// with the trapezoidal rule. Throws PreconditionError when the grid spacing
/// exceeds 1 / (8 * footprint) or k_max leaves more than exp(-36) of the
/// spectral weight of the narrowest component, or when |u| exceeds the
/// support width.
double spectral_alignment_gradient(const GaussianMixture1D &f, double u, double sigma,
                                   const SpectralGrid &grid);

struct SpatialOracleOptions {
    int samples = 1 << 14;
    double step = 1e-6;
    double support_sigmas = 8.0;
};

/// L2 alignment loss by dense trapezoidal quadrature in x.
double spatial_alignment_loss(const GaussianMixture1D &f, double u, double sigma,
                              const SpatialOracleOptions &opts = {});

/// Central difference of spatial_alignment_loss in u. The two loss values are
/// subtracted under the integral sign, which keeps the difference free of
/// cancellation between two large totals.
double spatial_gradient_oracle(const GaussianMixture1D &f, double u, double sigma,
                               const SpatialOracleOptions &opts = {});

/// Sign changes of spatial_gradient_oracle over samples uniformly spaced
/// points in [u_lo, u_hi]. Exact zeros do not count as a sign.
int oscillation_count(const GaussianMixture1D &f, double u_lo, double u_hi, double sigma,
                      int samples = 512, const SpatialOracleOptions &opts = {});

/// The 20-component comb used by the oscillation experiments: equal
/// amplitudes 1/20, spacing 0.05, stddev 0.01, centered on 0.
GaussianMixture1D high_frequency_comb();

} // namespace splatpose::spectrum
