#pragma once

#include <stdexcept>
#include <string>

namespace gp3d {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPositiveDepth : Error { using Error::Error; };
struct NonPositiveHeight : Error { using Error::Error; };
struct NonPositiveDimension : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct ImplausiblePlane : Error { using Error::Error; };
struct ImageTooSmall : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct AboveHorizon : Error { using Error::Error; };
struct WrongArity : Error { using Error::Error; };
struct DegenerateFront : Error { using Error::Error; };
struct BehindCamera : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct TruncatedPayload : Error { using Error::Error; };
struct MissingP2 : Error { using Error::Error; };

/// Malformed text input. Carries the 1-based line number and, when it
/// applies, the 1-based index of the offending field on that line.
struct ParseError : Error {
  int line = 0;
  int field = 0;

  ParseError(const std::string& msg, int line_, int field_ = 0)
      : Error("line " + std::to_string(line_) +
              (field_ > 0 ? ", field " + std::to_string(field_) : std::string()) +
              ": " + msg),
        line(line_),
        field(field_) {}
};

}  // namespace gp3d
