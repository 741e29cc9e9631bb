#pragma once

#include <stdexcept>
#include <string>

namespace sliceprio {

// Error taxonomy mirrored by the CLI exit codes:
//   DataError    -> 1 (inputs parse but violate a data invariant)
//   ParseError   -> 2 (a document cannot be read or decoded)
//   ComputeError -> 3 (an operation is undefined for the given inputs)
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public Error {
public:
  explicit DataError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

class ComputeError : public Error {
public:
  explicit ComputeError(const std::string& what) : Error(what) {}
};

}  // namespace sliceprio
