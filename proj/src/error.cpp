#include "conecalc/error.hpp"

namespace conecalc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NonLinearAction: return "NonLinearAction";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::EmptyCone: return "EmptyCone";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::BadLevel: return "BadLevel";
    case ErrorCode::NotRightCPInvariant: return "NotRightCPInvariant";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::UnregisteredPair: return "UnregisteredPair";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimError: return "DimError";
    case ErrorCode::UnknownCone: return "UnknownCone";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
  }
  return "Error";
}

}  // namespace conecalc
