#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace capforge {

// Every failure the library can report. The CLI maps these onto exit codes.
enum class Errc {
  CompositeCharacteristic,
  EvenCharacteristic,
  ReducibleModulus,
  BadModulus,
  OrderTooLarge,
  NotPrimePower,
  DivisionByZero,
  ZeroToNegativePower,
  NonDivisorM,
  ZeroInput,
  NoSuchElement,
  ForeignElement,
  DuplicatePoints,
  NotCollinear,
  MixedDimensions,
  UnsupportedCharacteristic,
  ZeroParam,
  NotOnCubic,
  SingularPoint,
  BadIndex,
  BadGcd,
  BadDivisibility,
  NotThreeIndependent,
  NotFound,
  PreconditionNotMet,
  OnCubicPoint,
  BadCosetPair,
  NotAnArc,
  NotACap,
  TooLarge,
  BadDimension,
  MalformedInput,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::CompositeCharacteristic: return "CompositeCharacteristic";
    case Errc::EvenCharacteristic: return "EvenCharacteristic";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::BadModulus: return "BadModulus";
    case Errc::OrderTooLarge: return "OrderTooLarge";
    case Errc::NotPrimePower: return "NotPrimePower";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::ZeroToNegativePower: return "ZeroToNegativePower";
    case Errc::NonDivisorM: return "NonDivisorM";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::NoSuchElement: return "NoSuchElement";
    case Errc::ForeignElement: return "ForeignElement";
    case Errc::DuplicatePoints: return "DuplicatePoints";
    case Errc::NotCollinear: return "NotCollinear";
    case Errc::MixedDimensions: return "MixedDimensions";
    case Errc::UnsupportedCharacteristic: return "UnsupportedCharacteristic";
    case Errc::ZeroParam: return "ZeroParam";
    case Errc::NotOnCubic: return "NotOnCubic";
    case Errc::SingularPoint: return "SingularPoint";
    case Errc::BadIndex: return "BadIndex";
    case Errc::BadGcd: return "BadGcd";
    case Errc::BadDivisibility: return "BadDivisibility";
    case Errc::NotThreeIndependent: return "NotThreeIndependent";
    case Errc::NotFound: return "NotFound";
    case Errc::PreconditionNotMet: return "PreconditionNotMet";
    case Errc::OnCubicPoint: return "OnCubicPoint";
    case Errc::BadCosetPair: return "BadCosetPair";
    case Errc::NotAnArc: return "NotAnArc";
    case Errc::NotACap: return "NotACap";
    case Errc::TooLarge: return "TooLarge";
    case Errc::BadDimension: return "BadDimension";
    case Errc::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace capforge
