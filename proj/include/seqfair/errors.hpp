#pragma once

#include <stdexcept>
#include <string>

namespace seqfair {

// Base of every error raised by the library. Each concrete error names one
// failure class so callers (and the CLI) can branch on the type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SEQFAIR_DEFINE_ERROR(Name)            \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

// distributions
SEQFAIR_DEFINE_ERROR(EmptySample);
SEQFAIR_DEFINE_ERROR(InvalidValue);
SEQFAIR_DEFINE_ERROR(InvalidProbability);

// projection
SEQFAIR_DEFINE_ERROR(ShapeError);
SEQFAIR_DEFINE_ERROR(InvalidEpsilon);
SEQFAIR_DEFINE_ERROR(UnknownGroup);
SEQFAIR_DEFINE_ERROR(DegenerateGroup);
SEQFAIR_DEFINE_ERROR(VersionError);

// metrics
SEQFAIR_DEFINE_ERROR(InvalidLabel);

// configuration, dataio
SEQFAIR_DEFINE_ERROR(InvalidConfig);
SEQFAIR_DEFINE_ERROR(SchemaError);
SEQFAIR_DEFINE_ERROR(MissingValue);
SEQFAIR_DEFINE_ERROR(IoError);

#undef SEQFAIR_DEFINE_ERROR

// Malformed input. Carries a human-readable location (byte offset, row and
// column, or JSON path) separately from the message.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string location)
      : Error(what + " (at " + location + ")"), message_(what), location_(std::move(location)) {}

  const std::string& message() const noexcept { return message_; }
  const std::string& location() const noexcept { return location_; }

 private:
  std::string message_;
  std::string location_;
};

}  // namespace seqfair
