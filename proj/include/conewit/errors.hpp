#pragma once

#include <stdexcept>
#include <string>

namespace conewit {

/// Error categories shared by the whole library. Every throwing operation
/// raises `Error` with one of these codes so callers can branch on the
/// failure kind without parsing messages.
enum class Errc {
  NonFinite,
  DimensionTooLarge,
  ShapeMismatch,
  EmptyRegion,
  NotExterior,
  NoSeparator,
  Unsupported,
  TotalOrder,
  BudgetExhausted,
  NotInCone,
  NotPositiveFunctional,
  NotAutomorphism,
  PreconditionViolated,
  BadEndpoints,
  NoExtremalWithPositivePairing,
  NotNonnegative,
  Singular,
  ParseError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::EmptyRegion: return "EmptyRegion";
    case Errc::NotExterior: return "NotExterior";
    case Errc::NoSeparator: return "NoSeparator";
    case Errc::Unsupported: return "Unsupported";
    case Errc::TotalOrder: return "TotalOrder";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::NotInCone: return "NotInCone";
    case Errc::NotPositiveFunctional: return "NotPositiveFunctional";
    case Errc::NotAutomorphism: return "NotAutomorphism";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::BadEndpoints: return "BadEndpoints";
    case Errc::NoExtremalWithPositivePairing: return "NoExtremalWithPositivePairing";
    case Errc::NotNonnegative: return "NotNonnegative";
    case Errc::Singular: return "Singular";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace conewit
