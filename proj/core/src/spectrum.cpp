// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/spectrum.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace splatpose::spectrum {

namespace {

constexpr double kPi = std::numbers::pi;
// exp(-36) of the spectral weight may remain beyond k_max.
constexpr double kTailExponent = 36.0;
// Beyond 12 stddevs a normal density is below 1e-31 of its peak.
constexpr double kEvalCutoff = 12.0;

double
blurred_stddev(const MixtureComponent &c, double sigma) {
    return std::sqrt(c.stddev * c.stddev + sigma * sigma);
}

// Components with the blur folded in, ready for repeated evaluation.
class BlurredMixture {
  public:
    BlurredMixture(const GaussianMixture1D &f, double sigma) {
        terms_.reserve(f.components.size());
        for (const auto &c : f.components) {
            const double s = blurred_stddev(c, sigma);
            terms_.push_back({c.amplitude / (s * std::sqrt(2.0 * kPi)), c.mean, 1.0 / s,
                              kEvalCutoff * s});
        }
    }

    double
    operator()(double x) const {
        double v = 0.0;
        for (const auto &t : terms_) {
            const double d = x - t.mean;
            if (std::abs(d) <= t.reach) {
                const double z = d * t.inv_stddev;
                v += t.weight * std::exp(-0.5 * z * z);
            }
        }
        return v;
    }

  private:
    struct Term {
        double weight;
        double mean;
        double inv_stddev;
        double reach;
    };
    std::vector<Term> terms_;
};

struct Interval {
    double lo;
    double hi;
};

Interval
support(const GaussianMixture1D &f, double sigma, double n_sigmas) {
    Interval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto &c : f.components) {
        const double s = blurred_stddev(c, sigma);
        out.lo = std::min(out.lo, c.mean - n_sigmas * s);
        out.hi = std::max(out.hi, c.mean + n_sigmas * s);
    }
    return out;
}

} // namespace

double
kernel_H(double u, double k) {
    return 4.0 * kPi * k * std::sin(2.0 * kPi * k * u);
}

double
smoothed_kernel(double u, double k, double sigma) {
    return std::exp(-4.0 * kPi * kPi * k * k * sigma * sigma) * kernel_H(u, k);
}

void
GaussianMixture1D::validate() const {
    if (components.empty()) {
        throw InvalidInput("mixture has no components");
    }
    for (const auto &c : components) {
        if (!std::isfinite(c.amplitude) || !std::isfinite(c.mean) || !std::isfinite(c.stddev)) {
            throw InvalidInput("mixture component is not finite");
        }
        if (c.stddev <= 0.0) {
            throw InvalidInput("mixture stddev must be positive");
        }
    }
}

double
GaussianMixture1D::evaluate(double x, double sigma) const {
    return BlurredMixture(*this, sigma)(x);
}

double
GaussianMixture1D::power_spectrum(double k, double sigma) const {
    double re = 0.0;
    double im = 0.0;
    for (const auto &c : components) {
        const double s = blurred_stddev(c, sigma);
        const double mag = c.amplitude * std::exp(-2.0 * kPi * kPi * k * k * s * s);
        const double phase = 2.0 * kPi * k * c.mean;
        re += mag * std::cos(phase);
        im -= mag * std::sin(phase);
    }
    return re * re + im * im;
}

double
GaussianMixture1D::min_stddev(double sigma) const {
    double s = std::numeric_limits<double>::infinity();
    for (const auto &c : components) {
        s = std::min(s, blurred_stddev(c, sigma));
    }
    return s;
}

double
GaussianMixture1D::max_stddev(double sigma) const {
    double s = 0.0;
    for (const auto &c : components) {
        s = std::max(s, blurred_stddev(c, sigma));
    }
    return s;
}

double
GaussianMixture1D::support_width(double sigma) const {
    const Interval iv = support(*this, sigma, 8.0);
    return iv.hi - iv.lo;
}

GaussianMixture1D
GaussianMixture1D::parse(const std::string &text) {
    GaussianMixture1D f;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        MixtureComponent c;
        char sep1 = 0;
        char sep2 = 0;
        std::istringstream is(item);
        std::string rest;
        if (!(is >> c.amplitude >> sep1 >> c.mean >> sep2 >> c.stddev) || sep1 != ':' ||
            sep2 != ':' || (is >> rest)) {
            throw InvalidInput("malformed mixture component '" + item +
                               "' (expected amplitude:mean:stddev)");
        }
        f.components.push_back(c);
    }
    f.validate();
    return f;
}

void
SpectralGrid::validate() const {
    if (!(k_max > 0.0) || !std::isfinite(k_max)) {
        throw InvalidInput("spectral grid k_max must be positive");
    }
    if (n_samples < 16) {
        throw InvalidInput("spectral grid needs at least 16 samples");
    }
}

namespace {

double
footprint(const GaussianMixture1D &f, double u, double sigma) {
    return f.support_width(sigma) + std::abs(u);
}

double
required_k_max(const GaussianMixture1D &f, double sigma) {
    return std::sqrt(kTailExponent) / (2.0 * kPi * f.min_stddev(sigma));
}

} // namespace

SpectralGrid
resolve_grid(const GaussianMixture1D &f, double u, double sigma, int min_samples) {
    f.validate();
    SpectralGrid g;
    g.k_max = 1.25 * required_k_max(f, sigma);
    const double dk = 1.0 / (8.0 * footprint(f, u, sigma));
    const double n = std::ceil(g.k_max / dk) + 1.0;
    g.n_samples = std::max(min_samples, static_cast<int>(n));
    return g;
}

double
spectral_alignment_gradient(const GaussianMixture1D &f, double u, double sigma,
                            const SpectralGrid &grid) {
    f.validate();
    grid.validate();
    if (sigma < 0.0) {
        throw InvalidInput("sigma must be non-negative");
    }
    if (std::abs(u) > f.support_width(sigma)) {
        throw PreconditionError("offset lies outside the signal support");
    }
    const double dk = grid.spacing();
    if (dk > 1.0 / (8.0 * footprint(f, u, sigma))) {
        throw PreconditionError("spectral grid spacing does not resolve the mixture footprint");
    }
    if (grid.k_max < required_k_max(f, sigma)) {
        throw PreconditionError("spectral grid k_max truncates the mixture spectrum");
    }
    // The integrand is even in k, so the full-line integral is twice the
    // half-line one. H(u, 0) = 0, so only the far endpoint carries weight 1/2.
    double sum = 0.0;
    for (int i = 1; i < grid.n_samples; ++i) {
        const double k = dk * i;
        const double w = (i == grid.n_samples - 1) ? 0.5 : 1.0;
        sum += w * f.power_spectrum(k, sigma) * kernel_H(u, k);
    }
    return 2.0 * dk * sum;
}

namespace {

struct SpatialGrid {
    double lo;
    double dx;
    int n;
};

SpatialGrid
spatial_grid(const GaussianMixture1D &f, double reach, double sigma,
             const SpatialOracleOptions &opts) {
    if (opts.samples < 2) {
        throw InvalidInput("spatial oracle needs at least 2 samples");
    }
    const Interval iv = support(f, sigma, opts.support_sigmas);
    const double lo = iv.lo - reach;
    const double hi = iv.hi + reach;
    const double min_dx = f.min_stddev(sigma) / 8.0;
    const int n = std::max(opts.samples, static_cast<int>(std::ceil((hi - lo) / min_dx)) + 1);
    return {lo, (hi - lo) / (n - 1), n};
}

} // namespace

double
spatial_alignment_loss(const GaussianMixture1D &f, double u, double sigma,
                       const SpatialOracleOptions &opts) {
    f.validate();
    const SpatialGrid g = spatial_grid(f, std::abs(u), sigma, opts);
    const BlurredMixture fs(f, sigma);
    double sum = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double x = g.lo + g.dx * i;
        const double w = (i == 0 || i == g.n - 1) ? 0.5 : 1.0;
        const double d = fs(x - u) - fs(x);
        sum += w * d * d;
    }
    return sum * g.dx;
}

namespace {

// L(u+h) - L(u-h) = integral (p - m)(p + m - 2 f) dx with
// p = f(x-u-h), m = f(x-u+h).
double
factored_difference(const BlurredMixture &fs, double u, double h, const SpatialGrid &g,
                    const std::vector<double> &center) {
    double sum = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double x = g.lo + g.dx * i;
        const double w = (i == 0 || i == g.n - 1) ? 0.5 : 1.0;
        const double p = fs(x - u - h);
        const double m = fs(x - u + h);
        sum += w * (p - m) * (p + m - 2.0 * center[i]);
    }
    return sum * g.dx / (2.0 * h);
}

std::vector<double>
sample_on(const BlurredMixture &fs, const SpatialGrid &g) {
    std::vector<double> out(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) {
        out[i] = fs(g.lo + g.dx * i);
    }
    return out;
}

} // namespace

double
spatial_gradient_oracle(const GaussianMixture1D &f, double u, double sigma,
                        const SpatialOracleOptions &opts) {
    f.validate();
    const SpatialGrid g = spatial_grid(f, std::abs(u) + opts.step, sigma, opts);
    const BlurredMixture fs(f, sigma);
    return factored_difference(fs, u, opts.step, g, sample_on(fs, g));
}

int
oscillation_count(const GaussianMixture1D &f, double u_lo, double u_hi, double sigma, int samples,
                  const SpatialOracleOptions &opts) {
    f.validate();
    if (samples < 2 || !(u_hi > u_lo)) {
        throw InvalidInput("oscillation_count needs an increasing range and >= 2 samples");
    }
    const double reach = std::max(std::abs(u_lo), std::abs(u_hi)) + opts.step;
    const SpatialGrid g = spatial_grid(f, reach, sigma, opts);
    const BlurredMixture fs(f, sigma);
    const std::vector<double> center = sample_on(fs, g);
    int changes = 0;
    int last_sign = 0;
    for (int i = 0; i < samples; ++i) {
        const double u = u_lo + (u_hi - u_lo) * i / (samples - 1);
        const double grad = factored_difference(fs, u, opts.step, g, center);
        const int sign = (grad > 0.0) - (grad < 0.0);
        if (sign == 0) {
            continue;
        }
        if (last_sign != 0 && sign != last_sign) {
            ++changes;
        }
        last_sign = sign;
    }
    return changes;
}

GaussianMixture1D
high_frequency_comb() {
    GaussianMixture1D f;
    constexpr int n = 20;
    constexpr double spacing = 0.05;
    for (int i = 0; i < n; ++i) {
        f.components.push_back({1.0 / n, (i - 0.5 * (n - 1)) * spacing, 0.01});
    }
    return f;
}

} // namespace splatpose::spectrum
