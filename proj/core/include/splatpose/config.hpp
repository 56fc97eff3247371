// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/losses.hpp>
#include <splatpose/novel_view.hpp>
#include <splatpose/toml_lite.hpp>
#include <splatpose/trainer.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace splatpose {

/// Every tunable of a run. Serialized as TOML with one documented key per
/// field; see RunConfig::describe().
struct RunConfig {
    TrainConfig train;
    FilterSchedule schedule;
    DensifyConfig densify;
    LossConfig loss;
    PoseFitConfig heldout;
    std::size_t keyframe_interval = kDefaultKeyframeInterval;
    std::string run_dir;
    std::string output;

    /// Validates every section. Throws InvalidInput.
    void validate() const;

    /// Applies the entries of doc on top of this config. Unknown keys and
    /// ill-typed values throw ParseError with the line number.
    void apply(const toml::Document &doc);

    /// Full TOML snapshot, every key documented by a comment.
    std::string to_toml() const;

    struct KeyDoc {
        std::string key;
        std::string doc;
    };
    static std::vector<KeyDoc> describe();
};

RunConfig load_config(const std::filesystem::path &path);

} // namespace splatpose
