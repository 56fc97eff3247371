// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace splatpose {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// A file could not be read or did not follow its format.
class ParseError : public Error {
  public:
    ParseError(const std::string &file, int line, const std::string &what)
        : Error(format(file, line, what)), file_(file), line_(line) {}

    const std::string &
    file() const noexcept {
        return file_;
    }
    /// 1-based line number, 0 when the error is not tied to a line.
    int
    line() const noexcept {
        return line_;
    }

  private:
    static std::string
    format(const std::string &file, int line, const std::string &what) {
        std::string out = file;
        if (line > 0) {
            out += ":" + std::to_string(line);
        }
        return out + ": " + what;
    }

    std::string file_;
    int line_ = 0;
};

/// Trajectory alignment is ill-posed for the given inputs.
class AlignmentError : public Error {
  public:
    using Error::Error;
};

/// render_backward was handed buffers produced with different arguments.
class ArgumentMismatch : public Error {
  public:
    using Error::Error;
};

/// Spectral quadrature grid does not resolve the signal.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// A numerical quantity became non-finite during optimization.
class NumericFailure : public Error {
  public:
    using Error::Error;
};

} // namespace splatpose
