#ifndef EQSEP_ERRORS_HPP
#define EQSEP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eqsep {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different ambient spaces.
class DimensionError : public Error
{
public:
  using Error::Error;
};

class InvalidSubgroupError : public Error
{
public:
  using Error::Error;
};

/// A group, action, layer or architecture violates a structural precondition.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// A configured resource cap (union members, block size, enumeration size)
/// would be exceeded. `partial` carries whatever statistics were collected
/// before the abort, serialized as JSON text.
class ResourceError : public Error
{
public:
  ResourceError(std::string const &what, std::string partial = "{}")
  : Error(what), partial_(std::move(partial))
  {}

  std::string const &partial() const noexcept
  { return partial_; }

private:
  std::string partial_;
};

/// Malformed user input (group grammar, config schema, vectors).
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// The Monte Carlo oracle discarded too many samples to be trusted.
class OracleUnreliableError : public Error
{
public:
  using Error::Error;
};

} // namespace eqsep

#endif // EQSEP_ERRORS_HPP
