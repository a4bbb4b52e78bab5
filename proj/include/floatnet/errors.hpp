#pragma once

#include <stdexcept>
#include <string>

namespace floatnet {

// Base class for all library errors. Subclasses mirror the failure modes of
// the public operations so callers can catch precisely what they care about.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConstraintViolation : Error { using Error::Error; };
struct FormatMismatch : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct NotRepresentable : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct DuplicateInput : Error { using Error::Error; };
struct InputOutOfRange : Error { using Error::Error; };
struct DimensionTooLarge : Error { using Error::Error; };
struct ThresholdOutOfRange : Error { using Error::Error; };
struct OracleFailure : Error { using Error::Error; };
struct RequiresFiniteDomain : Error { using Error::Error; };
struct UnboundedEnumeration : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace floatnet
