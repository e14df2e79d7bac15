#pragma once

#include <stdexcept>
#include <string>

namespace mabhet {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A parameter object was built with a value outside its validity range.
class InvalidParameter : public Error
{
  public:
    InvalidParameter(std::string field, const std::string& what)
        : Error(field + ": " + what),
          field_(std::move(field))
    {
    }

    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// Cache (or circuit) power leaves no budget for transmission.
class NonPositiveTxPower : public Error
{
  public:
    using Error::Error;
};

class IndexOutOfLibrary : public Error
{
  public:
    using Error::Error;
};

class NegativeDistance : public Error
{
  public:
    using Error::Error;
};

class ZeroDistance : public Error
{
  public:
    using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureFailure : public Error
{
  public:
    using Error::Error;
};

/// Rejection sampling accepted too few candidates to be trusted.
class RejectionStarvation : public Error
{
  public:
    using Error::Error;
};

} // namespace mabhet
