#pragma once

#include <stdexcept>
#include <string>

namespace cmvlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation at z = 0 of something with negative-degree terms.
struct ZeroArgument : Error {
  using Error::Error;
};

// A window operation would leave no trusted entries.
struct HorizonExhausted : Error {
  using Error::Error;
};

// Truncated moment matrix is not positive definite.
struct GramNotPositive : Error {
  using Error::Error;
};

// Operand does not commute with the CMV matrix.
struct NotInCentralizer : Error {
  using Error::Error;
};

// Recovered symbol does not reproduce the operand.
struct ReconstructionMismatch : Error {
  using Error::Error;
};

// Conjugated ad image is not proportional to the identity.
struct NotConstantMultiple : Error {
  using Error::Error;
};

// Float-backend singular values straddle the rank threshold.
struct RankAmbiguous : Error {
  using Error::Error;
};

// Too few trusted equations for the requested unknown pattern.
struct WindowTooSmall : Error {
  using Error::Error;
};

// Operator recovery failed validation.
struct NoSolution : Error {
  using Error::Error;
};

// Scenario configuration rejected.
struct ConfigInvalid : Error {
  using Error::Error;
};

inline const char* error_name(const Error& e) {
  if (dynamic_cast<const ZeroArgument*>(&e)) return "ZeroArgument";
  if (dynamic_cast<const HorizonExhausted*>(&e)) return "HorizonExhausted";
  if (dynamic_cast<const GramNotPositive*>(&e)) return "GramNotPositive";
  if (dynamic_cast<const NotInCentralizer*>(&e)) return "NotInCentralizer";
  if (dynamic_cast<const ReconstructionMismatch*>(&e)) return "ReconstructionMismatch";
  if (dynamic_cast<const NotConstantMultiple*>(&e)) return "NotConstantMultiple";
  if (dynamic_cast<const RankAmbiguous*>(&e)) return "RankAmbiguous";
  if (dynamic_cast<const WindowTooSmall*>(&e)) return "WindowTooSmall";
  if (dynamic_cast<const NoSolution*>(&e)) return "NoSolution";
  if (dynamic_cast<const ConfigInvalid*>(&e)) return "ConfigInvalid";
  return "Error";
}

}  // namespace cmvlab
