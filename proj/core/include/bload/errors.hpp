#pragma once

#include <stdexcept>
#include <string>

namespace bload {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Manifest parsing or validation failure (malformed line, duplicate id,
// non-positive frame count, empty input). Maps to exit code 2 in the CLI.
class ManifestError : public Error {
 public:
  using Error::Error;
};

// A packing or simulation request that cannot be satisfied by the given
// data (sequence longer than the block capacity, no packable sequences,
// infeasible synthetic spec, no complete round). Maps to exit code 3.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A plan file or in-memory plan violating the block invariants.
class PlanError : public Error {
 public:
  using Error::Error;
};

}  // namespace bload
