#pragma once

#include <stdexcept>
#include <string>

namespace modlie {

enum class ErrorCode {
    InvalidArgument,
    DivisionByZero,
    DimensionMismatch,
    Containment,
    DegenerateAlgebra,
    Validation,
    ResourceLimit,
    Parse,
    Io,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& w) : Error(ErrorCode::InvalidArgument, w) {}
};
struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& w = "division by zero in GF(p)")
        : Error(ErrorCode::DivisionByZero, w) {}
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& w) : Error(ErrorCode::DimensionMismatch, w) {}
};
struct ContainmentError : Error {
    explicit ContainmentError(const std::string& w) : Error(ErrorCode::Containment, w) {}
};
struct DegenerateAlgebra : Error {
    explicit DegenerateAlgebra(const std::string& w) : Error(ErrorCode::DegenerateAlgebra, w) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& w) : Error(ErrorCode::Validation, w) {}
};
struct ResourceLimitExceeded : Error {
    explicit ResourceLimitExceeded(const std::string& w) : Error(ErrorCode::ResourceLimit, w) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error(ErrorCode::Parse, w) {}
};
struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorCode::Io, w) {}
};

}  // namespace modlie
