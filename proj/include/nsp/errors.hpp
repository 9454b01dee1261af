#pragma once

#include <stdexcept>
#include <string>

namespace nsp {

enum class Errc {
  FullRank,
  NonFinite,
  BadK,
  BadAlpha,
  BadArg,
  ZeroInput,
  NonSymmetric,
  NoConvergence,
  TooLarge,
  BadX,
  DegenerateX,
  OutOfRegime,
  NoIdentityDirection,
  IterCap,
  Infeasible,
  Io,
  Parse,
};

/// Library-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::FullRank: return "FullRank";
    case Errc::NonFinite: return "NonFinite";
    case Errc::BadK: return "BadK";
    case Errc::BadAlpha: return "BadAlpha";
    case Errc::BadArg: return "BadArg";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::NonSymmetric: return "NonSymmetric";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::TooLarge: return "TooLarge";
    case Errc::BadX: return "BadX";
    case Errc::DegenerateX: return "DegenerateX";
    case Errc::OutOfRegime: return "OutOfRegime";
    case Errc::NoIdentityDirection: return "NoIdentityDirection";
    case Errc::IterCap: return "IterCap";
    case Errc::Infeasible: return "Infeasible";
    case Errc::Io: return "Io";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace nsp
