#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace exunit {

enum class Errc {
  NotMonic,
  Reducible,
  ZeroDegree,
  DimensionMismatch,
  ZeroIdeal,
  NotFullRank,
  InvalidHNF,
  UnitIdeal,
  FactorCapExceeded,
  FactorizationMismatch,
  NotIrreducibleFactor,
  NotAUnit,
  NotPrime,
  EvenCharacteristic,
  SyntaxError,
  UnknownVariable,
  ExponentTooLarge,
  InvalidVariety,
  EnumerationCapExceeded,
  CapExceeded,
  ConstantPolynomial,
  BadReduction,
  NotQSqrtMinus5,
  BadModulus,
  InvalidConfig,
};

inline std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::NotMonic: return "NotMonic";
    case Errc::Reducible: return "Reducible";
    case Errc::ZeroDegree: return "ZeroDegree";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroIdeal: return "ZeroIdeal";
    case Errc::NotFullRank: return "NotFullRank";
    case Errc::InvalidHNF: return "InvalidHNF";
    case Errc::UnitIdeal: return "UnitIdeal";
    case Errc::FactorCapExceeded: return "FactorCapExceeded";
    case Errc::FactorizationMismatch: return "FactorizationMismatch";
    case Errc::NotIrreducibleFactor: return "NotIrreducibleFactor";
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::NotPrime: return "NotPrime";
    case Errc::EvenCharacteristic: return "EvenCharacteristic";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::ExponentTooLarge: return "ExponentTooLarge";
    case Errc::InvalidVariety: return "InvalidVariety";
    case Errc::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::ConstantPolynomial: return "ConstantPolynomial";
    case Errc::BadReduction: return "BadReduction";
    case Errc::NotQSqrtMinus5: return "NotQSqrtMinus5";
    case Errc::BadModulus: return "BadModulus";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the Errc codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parser failure with the byte offset of the offending character.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t offset, const std::string& what)
      : Error(code, what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace exunit
