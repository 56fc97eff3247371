// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace splatpose {

/// "splatpose <version> (<compiler>, <build type>)".
std::string build_identifier();
const char *version();

} // namespace splatpose
