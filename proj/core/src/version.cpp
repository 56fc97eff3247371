// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/version.hpp>

#ifndef SPLATPOSE_VERSION_STRING
#define SPLATPOSE_VERSION_STRING "0.0.0"
#endif
#ifndef SPLATPOSE_BUILD_TYPE
#define SPLATPOSE_BUILD_TYPE "unspecified"
#endif

namespace splatpose {

const char *
version() {
    return SPLATPOSE_VERSION_STRING;
}

std::string
build_identifier() {
    std::string compiler;
#if defined(__clang__)
    compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
    compiler = "gcc " __VERSION__;
#else
    compiler = "unknown compiler";
#endif
    return std::string("splatpose ") + version() + " (" + compiler + ", " SPLATPOSE_BUILD_TYPE ")";
}

} // namespace splatpose
