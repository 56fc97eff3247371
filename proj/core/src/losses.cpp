// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/losses.hpp>

#include <algorithm>
#include <cmath>

namespace splatpose {

namespace {

inline int
reflect(int i, int n) {
    if (i < 0) {
        return -i;
    }
    if (i >= n) {
        return 2 * (n - 1) - i;
    }
    return i;
}

// Separable correlation with reflect padding on one channel plane (H x W).
struct Filter {
    std::vector<double> taps;
    int half = 0;
    int width = 0;
    int height = 0;

    void
    apply(const std::vector<double> &in, std::vector<double> &out,
          std::vector<double> &tmp) const {
        tmp.resize(in.size());
        out.assign(in.size(), 0.0);
        std::vector<double> padded(static_cast<std::size_t>(width + 2 * half));
        for (int y = 0; y < height; ++y) {
            const double *row = in.data() + static_cast<std::size_t>(y) * width;
            for (int x = -half; x < width + half; ++x) {
                padded[x + half] = row[reflect(x, width)];
            }
            double *dst = tmp.data() + static_cast<std::size_t>(y) * width;
            std::fill(dst, dst + width, 0.0);
            for (int k = 0; k < 2 * half + 1; ++k) {
                const double w = taps[k];
                const double *src = padded.data() + k;
                for (int x = 0; x < width; ++x) {
                    dst[x] += w * src[x];
                }
            }
        }
        for (int y = 0; y < height; ++y) {
            double *dst = out.data() + static_cast<std::size_t>(y) * width;
            for (int k = -half; k <= half; ++k) {
                const double w = taps[k + half];
                const double *src =
                    tmp.data() + static_cast<std::size_t>(reflect(y + k, height)) * width;
                for (int x = 0; x < width; ++x) {
                    dst[x] += w * src[x];
                }
            }
        }
    }

    // Adjoint of apply.
    void
    apply_transpose(const std::vector<double> &in, std::vector<double> &out,
                    std::vector<double> &tmp) const {
        tmp.assign(in.size(), 0.0);
        out.resize(in.size());
        for (int y = 0; y < height; ++y) {
            const double *src = in.data() + static_cast<std::size_t>(y) * width;
            for (int k = -half; k <= half; ++k) {
                const double w = taps[k + half];
                double *dst = tmp.data() + static_cast<std::size_t>(reflect(y + k, height)) * width;
                for (int x = 0; x < width; ++x) {
                    dst[x] += w * src[x];
                }
            }
        }
        std::vector<double> padded(static_cast<std::size_t>(width + 2 * half));
        for (int y = 0; y < height; ++y) {
            const double *row = tmp.data() + static_cast<std::size_t>(y) * width;
            std::fill(padded.begin(), padded.end(), 0.0);
            for (int k = 0; k < 2 * half + 1; ++k) {
                const double w = taps[k];
                double *dst = padded.data() + k;
                for (int x = 0; x < width; ++x) {
                    dst[x] += w * row[x];
                }
            }
            double *dst = out.data() + static_cast<std::size_t>(y) * width;
            for (int x = 0; x < width; ++x) {
                dst[x] = 0.0;
            }
            for (int x = -half; x < width + half; ++x) {
                dst[reflect(x, width)] += padded[x + half];
            }
        }
    }
};

void
check_same_shape(const Image &a, const Image &b) {
    if (!a.same_shape(b)) {
        throw InvalidInput("image dimensions differ");
    }
}

double
ssim_impl(const Image &a, const Image &b, const LossConfig &cfg, Image *grad_a) {
    check_same_shape(a, b);
    if (cfg.ssim_window < 1 || cfg.ssim_window % 2 == 0) {
        throw InvalidInput("SSIM window must be odd and positive");
    }
    if (a.width() < cfg.ssim_window || a.height() < cfg.ssim_window) {
        throw InvalidInput("image is smaller than the SSIM window");
    }
    Filter f{gaussian_window(cfg.ssim_window, cfg.ssim_sigma), cfg.ssim_window / 2, a.width(),
             a.height()};
    const std::size_t n = a.pixel_count();
    const double norm = 1.0 / (static_cast<double>(n) * Image::kChannels);

    std::vector<double> xa(n), xb(n), sq(n), tmp;
    std::vector<double> mu_a, mu_b, e_aa, e_bb, e_ab;
    std::vector<double> dmu(n), dvar(n), dcov(n), t0, t1, t2;
    if (grad_a) {
        *grad_a = Image(a.width(), a.height());
    }
    double total = 0.0;
    for (int c = 0; c < Image::kChannels; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            xa[i] = a.data()[i * 3 + c];
            xb[i] = b.data()[i * 3 + c];
        }
        f.apply(xa, mu_a, tmp);
        f.apply(xb, mu_b, tmp);
        for (std::size_t i = 0; i < n; ++i) {
            sq[i] = xa[i] * xa[i];
        }
        f.apply(sq, e_aa, tmp);
        for (std::size_t i = 0; i < n; ++i) {
            sq[i] = xb[i] * xb[i];
        }
        f.apply(sq, e_bb, tmp);
        for (std::size_t i = 0; i < n; ++i) {
            sq[i] = xa[i] * xb[i];
        }
        f.apply(sq, e_ab, tmp);

        for (std::size_t i = 0; i < n; ++i) {
            const double ma = mu_a[i], mb = mu_b[i];
            const double var_a = e_aa[i] - ma * ma;
            const double var_b = e_bb[i] - mb * mb;
            const double cov = e_ab[i] - ma * mb;
            const double n1 = 2.0 * ma * mb + cfg.c1;
            const double n2 = 2.0 * cov + cfg.c2;
            const double d1 = ma * ma + mb * mb + cfg.c1;
            const double d2 = var_a + var_b + cfg.c2;
            const double s = (n1 * n2) / (d1 * d2);
            total += s;
            if (grad_a) {
                // Partials of s with respect to mu_a, var_a, cov_ab.
                const double ds_dmu = (2.0 * mb * n2) / (d1 * d2) - s * 2.0 * ma / d1;
                const double ds_dvar = -s / d2;
                const double ds_dcov = 2.0 * n1 / (d1 * d2);
                dmu[i] = (ds_dmu - 2.0 * ds_dvar * ma - ds_dcov * mb) * norm;
                dvar[i] = ds_dvar * norm;
                dcov[i] = ds_dcov * norm;
            }
        }
        if (grad_a) {
            f.apply_transpose(dmu, t0, tmp);
            f.apply_transpose(dvar, t1, tmp);
            f.apply_transpose(dcov, t2, tmp);
            for (std::size_t i = 0; i < n; ++i) {
                grad_a->data()[i * 3 + c] = t0[i] + 2.0 * xa[i] * t1[i] + xb[i] * t2[i];
            }
        }
    }
    return total * norm;
}

} // namespace

void
LossConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw InvalidInput("loss lambda must lie in [0, 1]");
    }
    if (!(aniso_weight >= 0.0)) {
        throw InvalidInput("aniso_weight must be non-negative");
    }
    if (!(aniso_ratio >= 1.0)) {
        throw InvalidInput("aniso_ratio must be at least 1");
    }
    if (ssim_window < 1 || ssim_window % 2 == 0 || !(ssim_sigma > 0.0)) {
        throw InvalidInput("invalid SSIM window");
    }
}

std::vector<double>
gaussian_window(int size, double sigma) {
    std::vector<double> taps(size);
    const int half = size / 2;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - half;
        taps[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += taps[i];
    }
    for (double &t : taps) {
        t /= sum;
    }
    return taps;
}

double
ssim(const Image &a, const Image &b, const LossConfig &cfg) {
    return ssim_impl(a, b, cfg, nullptr);
}

double
ssim_with_gradient(const Image &a, const Image &b, const LossConfig &cfg, Image &grad_a) {
    return ssim_impl(a, b, cfg, &grad_a);
}

PhotometricLoss
photometric_loss(const Image &rendered, const Image &target, const LossConfig &cfg) {
    check_same_shape(rendered, target);
    PhotometricLoss out;
    const std::size_t n = rendered.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double w_l1 = 1.0 - cfg.lambda;

    out.gradient = Image(rendered.width(), rendered.height());
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = rendered.data()[i] - target.data()[i];
        l1 += std::abs(d);
        const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
        out.gradient.data()[i] = w_l1 * sign * inv_n;
    }
    out.l1 = l1 * inv_n;

    if (cfg.lambda > 0.0) {
        Image grad_ssim;
        const double s = ssim_with_gradient(rendered, target, cfg, grad_ssim);
        out.dssim = 0.5 * (1.0 - s);
        for (std::size_t i = 0; i < n; ++i) {
            out.gradient.data()[i] -= 0.5 * cfg.lambda * grad_ssim.data()[i];
        }
    }
    out.total = w_l1 * out.l1 + cfg.lambda * out.dssim;
    return out;
}

AnisotropyLoss
anisotropy_loss(const SceneModel &scene, double ratio) {
    if (!(ratio >= 1.0)) {
        throw InvalidInput("anisotropy ratio must be at least 1");
    }
    AnisotropyLoss out;
    out.scale_gradient.assign(scene.size(), Vec3::Zero());
    if (scene.empty()) {
        return out;
    }
    const double inv_n = 1.0 / static_cast<double>(scene.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < scene.size(); ++i) {
        const Vec3 s = scene[i].scales();
        int imax = 0, imin = 0;
        for (int k = 1; k < 3; ++k) {
            if (s[k] > s[imax]) {
                imax = k;
            }
            if (s[k] < s[imin]) {
                imin = k;
            }
        }
        const double r = s[imax] / s[imin];
        if (r > ratio) {
            sum += r - ratio;
            out.scale_gradient[i][imax] += inv_n / s[imin];
            out.scale_gradient[i][imin] -= inv_n * s[imax] / (s[imin] * s[imin]);
        }
    }
    out.value = sum * inv_n;
    return out;
}

double
psnr(const Image &a, const Image &b) {
    check_same_shape(a, b);
    double se = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        se += d * d;
    }
    const double mse = se / static_cast<double>(a.size());
    if (mse < 1e-10) {
        return kPsnrCap;
    }
    return 10.0 * std::log10(1.0 / mse);
}

} // namespace splatpose
