#pragma once

#include <stdexcept>
#include <string>

namespace coseg {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct DegenerateGeometry : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct IsolatedVertex : Error {
  using Error::Error;
};
struct MissingPaletteEntry : Error {
  using Error::Error;
};
struct EmptyKernelRow : Error {
  using Error::Error;
};
struct ConvergenceFailure : Error {
  using Error::Error;
};
struct KTooLarge : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct BasisMismatch : Error {
  using Error::Error;
};
struct DisconnectedMesh : Error {
  using Error::Error;
};
struct TooFewPoints : Error {
  using Error::Error;
};
struct ConfigMismatch : Error {
  using Error::Error;
};
struct SingularSystem : Error {
  using Error::Error;
};
struct EmptySet : Error {
  using Error::Error;
};
struct EmptyPart : Error {
  using Error::Error;
};
struct MissingMap : Error {
  using Error::Error;
};
struct TooFewParts : Error {
  using Error::Error;
};
struct CountMismatch : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace coseg
