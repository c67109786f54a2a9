#pragma once

#include <stdexcept>
#include <string>

namespace gspkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad ids, dimension mismatch, invalid graph.
class DataError : public Error {
 public:
  using Error::Error;
};

// The inputs are well-formed but the requested computation is singular,
// rank deficient or otherwise numerically undefined.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gspkit
