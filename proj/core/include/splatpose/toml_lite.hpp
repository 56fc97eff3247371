// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

/// The subset of TOML used by configuration files: [table] headers, bare
/// keys, and values that are booleans, integers, floats, basic strings or
/// flat arrays of numbers. Comments start with '#'.
namespace splatpose::toml {

using Value = std::variant<bool, long long, double, std::string, std::vector<double>>;

struct Entry {
    Value value;
    int line = 0;
};

struct Document {
    std::string source;
    /// Keyed by "table.key", or "key" for the root table.
    std::map<std::string, Entry> entries;
};

/// Throws ParseError with the source name and line number.
Document parse(std::istream &in, const std::string &source = "<config>");
Document parse_file(const std::filesystem::path &path);

} // namespace splatpose::toml
