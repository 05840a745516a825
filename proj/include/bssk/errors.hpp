#pragma once

#include <stdexcept>
#include <string>

namespace bssk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct SolverError : Error { using Error::Error; };
struct RegimeError : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };
struct ExpansionError : Error { using Error::Error; };
struct EvaluationError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// z_c <= mu_1 in the high-temperature regime: the high-probability event failed.
struct RareEventError : Error { using Error::Error; };

}  // namespace bssk
