#pragma once

#include <stdexcept>
#include <string>

namespace causaltree {

// Data errors map to exit code 3, numerical errors to exit code 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public DataError {
 public:
  using DataError::DataError;
};

class InvalidModel : public DataError {
 public:
  using DataError::DataError;
};

class NotStrictlyCausal : public InvalidModel {
 public:
  using InvalidModel::InvalidModel;
};

class InvalidTree : public DataError {
 public:
  using DataError::DataError;
};

class KindMismatch : public DataError {
 public:
  using DataError::DataError;
};

class TooLarge : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// An information quantity came out more negative than rounding can explain.
class NumericalInconsistency : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace causaltree
