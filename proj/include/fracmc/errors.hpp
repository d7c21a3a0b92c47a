#pragma once

#include <stdexcept>
#include <string>

namespace fracmc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateFacetError : Error {
  using Error::Error;
};
struct SelfIntersectionError : Error {
  using Error::Error;
};
struct NonOrientableError : Error {
  using Error::Error;
};
struct NonManifoldEdgeError : Error {
  using Error::Error;
};
struct PointNotOnSurfaceError : Error {
  using Error::Error;
};
struct BoundaryPointError : Error {
  using Error::Error;
};
struct NonConvergentError : Error {
  using Error::Error;
};
struct NotContainedError : Error {
  using Error::Error;
};
struct NotSmoothError : Error {
  using Error::Error;
};
struct InvalidStateError : Error {
  using Error::Error;
};
struct StepRejectedError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace fracmc
