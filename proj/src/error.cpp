#include "qsci/error.hpp"

#include "qsci/eigensolver.hpp"

namespace qsci {

int exit_code(const std::exception& e) noexcept {
  if (dynamic_cast<const IoError*>(&e)) return 3;
  if (dynamic_cast<const FormatError*>(&e)) return 4;
  if (dynamic_cast<const CapabilityError*>(&e)) return 5;
  if (dynamic_cast<const ConvergenceError*>(&e)) return 6;
  if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const InputError*>(&e) ||
      dynamic_cast<const DimensionError*>(&e))
    return 2;
  return 1;
}

const char* error_kind(const std::exception& e) noexcept {
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const FormatError*>(&e)) return "format";
  if (dynamic_cast<const CapabilityError*>(&e)) return "capability";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
  if (dynamic_cast<const ParameterError*>(&e)) return "parameter";
  if (dynamic_cast<const InputError*>(&e)) return "input";
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension";
  if (dynamic_cast<const SingularFitError*>(&e)) return "singular_fit";
  if (dynamic_cast<const InvalidExcitation*>(&e)) return "invalid_excitation";
  return "internal";
}

}  // namespace qsci
