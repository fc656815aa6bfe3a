#pragma once

#include <stdexcept>
#include <string>

namespace choicelab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A collection that is not a subset of its menu, or a mask outside the universe.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class MenuAbsentError : public Error {
 public:
  using Error::Error;
};

class IncompleteDatasetError : public Error {
 public:
  using Error::Error;
};

class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

class MissingWeightError : public Error {
 public:
  using Error::Error;
};

class WrongVariantError : public Error {
 public:
  using Error::Error;
};

class MissingBinaryMenuError : public Error {
 public:
  using Error::Error;
};

/// Exact evaluation requested for something that needs floating point.
class ModeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InfeasibleStructureError : public Error {
 public:
  using Error::Error;
};

/// Positivity-2 needs exogenous attributes and none were supplied.
class MissingAttributesError : public Error {
 public:
  using Error::Error;
};

}  // namespace choicelab
