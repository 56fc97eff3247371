// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/config.hpp>
#include <splatpose/error.hpp>

#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace splatpose {

namespace {

struct Binding {
    std::string table;
    std::string key;
    std::string doc;
    std::function<void(RunConfig &, const toml::Value &, const std::string &)> set;
    std::function<std::string(const RunConfig &)> get;
};

std::string
format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEin") == std::string::npos) {
        s += ".0";
    }
    return s;
}

double
as_double(const toml::Value &v, const std::string &what) {
    if (const auto *d = std::get_if<double>(&v)) {
        return *d;
    }
    if (const auto *i = std::get_if<long long>(&v)) {
        return static_cast<double>(*i);
    }
    throw InvalidInput(what + " must be a number");
}

long long
as_integer(const toml::Value &v, const std::string &what) {
    if (const auto *i = std::get_if<long long>(&v)) {
        return *i;
    }
    throw InvalidInput(what + " must be an integer");
}

template <typename Access>
Binding
real(std::string table, std::string key, std::string doc, Access access) {
    return {table, key, doc,
            [access](RunConfig &c, const toml::Value &v, const std::string &w) {
                access(c) = as_double(v, w);
            },
            [access](const RunConfig &c) {
                return format_double(access(const_cast<RunConfig &>(c)));
            }};
}

template <typename Access>
Binding
integer(std::string table, std::string key, std::string doc, Access access) {
    using T = std::remove_reference_t<decltype(access(std::declval<RunConfig &>()))>;
    return {table, key, doc,
            [access](RunConfig &c, const toml::Value &v, const std::string &w) {
                const long long x = as_integer(v, w);
                if constexpr (std::is_unsigned_v<T>) {
                    if (x < 0) {
                        throw InvalidInput(w + " must be non-negative");
                    }
                }
                if (static_cast<long double>(x) >
                        static_cast<long double>(std::numeric_limits<T>::max()) ||
                    static_cast<long double>(x) <
                        static_cast<long double>(std::numeric_limits<T>::lowest())) {
                    throw InvalidInput(w + " is out of range");
                }
                access(c) = static_cast<T>(x);
            },
            [access](const RunConfig &c) {
                return std::to_string(access(const_cast<RunConfig &>(c)));
            }};
}

template <typename Access>
Binding
boolean(std::string table, std::string key, std::string doc, Access access) {
    return {table, key, doc,
            [access](RunConfig &c, const toml::Value &v, const std::string &w) {
                const auto *b = std::get_if<bool>(&v);
                if (b == nullptr) {
                    throw InvalidInput(w + " must be true or false");
                }
                access(c) = *b;
            },
            [access](const RunConfig &c) {
                return std::string(access(const_cast<RunConfig &>(c)) ? "true" : "false");
            }};
}

template <typename Access>
Binding
text(std::string table, std::string key, std::string doc, Access access) {
    return {table, key, doc,
            [access](RunConfig &c, const toml::Value &v, const std::string &w) {
                const auto *s = std::get_if<std::string>(&v);
                if (s == nullptr) {
                    throw InvalidInput(w + " must be a string");
                }
                access(c) = *s;
            },
            [access](const RunConfig &c) {
                std::string out = "\"";
                for (const char ch : access(const_cast<RunConfig &>(c))) {
                    if (ch == '"' || ch == '\\') {
                        out.push_back('\\');
                    }
                    out.push_back(ch);
                }
                return out + "\"";
            }};
}

template <typename Access>
Binding
vec3(std::string table, std::string key, std::string doc, Access access) {
    return {table, key, doc,
            [access](RunConfig &c, const toml::Value &v, const std::string &w) {
                const auto *a = std::get_if<std::vector<double>>(&v);
                if (a == nullptr || a->size() != 3) {
                    throw InvalidInput(w + " must be an array of 3 numbers");
                }
                access(c) = Vec3((*a)[0], (*a)[1], (*a)[2]);
            },
            [access](const RunConfig &c) {
                const Vec3 &x = access(const_cast<RunConfig &>(c));
                return "[" + format_double(x[0]) + ", " + format_double(x[1]) + ", " +
                       format_double(x[2]) + "]";
            }};
}

const std::vector<Binding> &
bindings() {
    static const std::vector<Binding> all = {
        text("paths", "run_dir", "input run directory",
             [](RunConfig &c) -> std::string & { return c.run_dir; }),
        text("paths", "output", "checkpoint output directory",
             [](RunConfig &c) -> std::string & { return c.output; }),
        integer("keyframes", "interval", "keep every N-th frame as a keyframe",
                [](RunConfig &c) -> std::size_t & { return c.keyframe_interval; }),

        integer("train", "total_iters", "optimization iterations, one frame each",
                [](RunConfig &c) -> long & { return c.train.total_iters; }),
        real("train", "lr_position", "initial position rate, times scene extent",
             [](RunConfig &c) -> double & { return c.train.lr_position; }),
        real("train", "lr_position_final", "final position rate, times scene extent",
             [](RunConfig &c) -> double & { return c.train.lr_position_final; }),
        real("train", "lr_scales", "log-scale rate",
             [](RunConfig &c) -> double & { return c.train.lr_scales; }),
        real("train", "lr_rotation", "quaternion rate",
             [](RunConfig &c) -> double & { return c.train.lr_rotation; }),
        real("train", "lr_opacity", "opacity logit rate",
             [](RunConfig &c) -> double & { return c.train.lr_opacity; }),
        real("train", "lr_color", "color logit rate",
             [](RunConfig &c) -> double & { return c.train.lr_color; }),
        real("train", "lr_pose_omega", "initial pose rotation rate, radians",
             [](RunConfig &c) -> double & { return c.train.lr_pose_omega; }),
        real("train", "lr_pose_omega_final", "final pose rotation rate, radians",
             [](RunConfig &c) -> double & { return c.train.lr_pose_omega_final; }),
        real("train", "lr_pose_tau", "initial pose translation rate, times scene extent",
             [](RunConfig &c) -> double & { return c.train.lr_pose_tau; }),
        real("train", "lr_pose_tau_final", "final pose translation rate, times scene extent",
             [](RunConfig &c) -> double & { return c.train.lr_pose_tau_final; }),
        real("train", "adam_beta1", "first moment decay",
             [](RunConfig &c) -> double & { return c.train.adam.beta1; }),
        real("train", "adam_beta2", "second moment decay",
             [](RunConfig &c) -> double & { return c.train.adam.beta2; }),
        real("train", "adam_epsilon", "denominator offset",
             [](RunConfig &c) -> double & { return c.train.adam.epsilon; }),
        boolean("train", "pose_refinement", "optimize one pose correction per frame",
                [](RunConfig &c) -> bool & { return c.train.pose_refinement; }),
        boolean("train", "c2f", "coarse-to-fine screen-space blur schedule",
                [](RunConfig &c) -> bool & { return c.train.c2f; }),
        boolean("train", "aniso", "anisotropy regularization",
                [](RunConfig &c) -> bool & { return c.train.aniso; }),
        integer("train", "seed", "random seed",
                [](RunConfig &c) -> std::uint64_t & { return c.train.seed; }),
        integer("train", "threads", "render worker threads",
                [](RunConfig &c) -> int & { return c.train.threads; }),
        vec3("train", "background", "background RGB",
             [](RunConfig &c) -> Vec3 & { return c.train.background; }),
        integer("train", "log_interval", "iterations between metrics rows",
                [](RunConfig &c) -> int & { return c.train.log_interval; }),

        real("schedule", "sigma_max", "initial blur, pixels",
             [](RunConfig &c) -> double & { return c.schedule.sigma_max; }),
        real("schedule", "end_fraction", "fraction of training after which the blur is 0",
             [](RunConfig &c) -> double & { return c.schedule.end_fraction; }),

        integer("densify", "interval", "iterations between densification steps",
                [](RunConfig &c) -> int & { return c.densify.interval; }),
        integer("densify", "start", "first densification iteration",
                [](RunConfig &c) -> int & { return c.densify.start; }),
        real("densify", "stop_fraction", "fraction of training after which densification stops",
             [](RunConfig &c) -> double & { return c.densify.stop_fraction; }),
        real("densify", "abs_grad_threshold", "split/clone threshold on the absolute gradient",
             [](RunConfig &c) -> double & { return c.densify.abs_grad_threshold; }),
        real("densify", "grad_threshold", "split/clone threshold on the plain gradient",
             [](RunConfig &c) -> double & { return c.densify.grad_threshold; }),
        boolean("densify", "use_abs_grad", "use the absolute gradient statistic",
                [](RunConfig &c) -> bool & { return c.densify.use_abs_grad; }),
        real("densify", "split_scale_fraction", "split above this max scale, times scene extent",
             [](RunConfig &c) -> double & { return c.densify.split_scale_fraction; }),
        real("densify", "opacity_cull", "remove Gaussians below this opacity",
             [](RunConfig &c) -> double & { return c.densify.opacity_cull; }),
        integer("densify", "opacity_reset_interval", "iterations between opacity resets",
                [](RunConfig &c) -> int & { return c.densify.opacity_reset_interval; }),
        integer("densify", "max_gaussians", "upper bound on the Gaussian count",
                [](RunConfig &c) -> std::size_t & { return c.densify.max_gaussians; }),

        real("loss", "lambda", "D-SSIM weight",
             [](RunConfig &c) -> double & { return c.loss.lambda; }),
        real("loss", "aniso_weight", "anisotropy loss weight",
             [](RunConfig &c) -> double & { return c.loss.aniso_weight; }),
        real("loss", "aniso_ratio", "tolerated max/min scale ratio",
             [](RunConfig &c) -> double & { return c.loss.aniso_ratio; }),
        integer("loss", "ssim_window", "SSIM window size, pixels",
                [](RunConfig &c) -> int & { return c.loss.ssim_window; }),
        real("loss", "ssim_sigma", "SSIM window stddev, pixels",
             [](RunConfig &c) -> double & { return c.loss.ssim_sigma; }),
        real("loss", "c1", "SSIM luminance constant",
             [](RunConfig &c) -> double & { return c.loss.c1; }),
        real("loss", "c2", "SSIM contrast constant",
             [](RunConfig &c) -> double & { return c.loss.c2; }),

        integer("heldout", "iters", "test-time pose fitting iterations",
                [](RunConfig &c) -> int & { return c.heldout.iters; }),
        real("heldout", "lr_omega", "initial rotation rate",
             [](RunConfig &c) -> double & { return c.heldout.lr_omega; }),
        real("heldout", "lr_omega_final", "final rotation rate",
             [](RunConfig &c) -> double & { return c.heldout.lr_omega_final; }),
        real("heldout", "lr_tau", "initial translation rate, times scene extent",
             [](RunConfig &c) -> double & { return c.heldout.lr_tau; }),
        real("heldout", "lr_tau_final", "final translation rate, times scene extent",
             [](RunConfig &c) -> double & { return c.heldout.lr_tau_final; }),
    };
    return all;
}

} // namespace

void
RunConfig::validate() const {
    train.validate();
    schedule.validate();
    densify.validate();
    loss.validate();
    if (keyframe_interval < 1) {
        throw InvalidInput("keyframes.interval must be at least 1");
    }
    if (heldout.iters < 0 || !(heldout.lr_omega > 0.0) || !(heldout.lr_tau > 0.0) ||
        !(heldout.lr_omega_final > 0.0) || !(heldout.lr_tau_final > 0.0)) {
        throw InvalidInput("heldout settings must be positive");
    }
}

void
RunConfig::apply(const toml::Document &doc) {
    for (const auto &[name, entry] : doc.entries) {
        const Binding *found = nullptr;
        for (const Binding &b : bindings()) {
            if (b.table + "." + b.key == name) {
                found = &b;
                break;
            }
        }
        if (found == nullptr) {
            throw ParseError(doc.source, entry.line, "unknown key '" + name + "'");
        }
        try {
            found->set(*this, entry.value, name);
        } catch (const InvalidInput &e) {
            throw ParseError(doc.source, entry.line, e.what());
        }
    }
    // Shared settings follow the training section.
    heldout.loss = loss;
    heldout.adam = train.adam;
    heldout.threads = train.threads;
}

std::string
RunConfig::to_toml() const {
    std::ostringstream out;
    std::string table;
    for (const Binding &b : bindings()) {
        if (b.table != table) {
            if (!table.empty()) {
                out << "\n";
            }
            table = b.table;
            out << "[" << table << "]\n";
        }
        out << b.key << " = " << b.get(*this) << "  # " << b.doc << "\n";
    }
    return out.str();
}

std::vector<RunConfig::KeyDoc>
RunConfig::describe() {
    std::vector<KeyDoc> out;
    for (const Binding &b : bindings()) {
        out.push_back({b.table + "." + b.key, b.doc});
    }
    return out;
}

RunConfig
load_config(const std::filesystem::path &path) {
    RunConfig cfg;
    cfg.apply(toml::parse_file(path));
    return cfg;
}

} // namespace splatpose
