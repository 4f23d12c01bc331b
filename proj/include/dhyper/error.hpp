#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dhyper {

/// Largest set size (q^m) that enumeration-based operations will walk.
inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input: bad polynomial text, reducible place
/// generator, even characteristic where odd is required, etc.
class ValidationError : public Error
{
  public:
    using Error::Error;
};

/// A computation would exceed kEnumerationLimit or another size guard.
class ResourceError : public Error
{
  public:
    using Error::Error;
};

/// Internal contradiction: non-integral genus, non-integral L-polynomial
/// coefficient, two canonical involutions.  Always a bug or a misuse.
class InconsistencyError : public Error
{
  public:
    using Error::Error;
};

} // namespace dhyper
