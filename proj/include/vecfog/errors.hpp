#pragma once

#include <stdexcept>
#include <string>

namespace vecfog {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A device or processor was asked to carry more than its rated capacity.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

// Activation flags disagree with the loads they are supposed to describe.
class InconsistentAssignment : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

// Instance too large for an exhaustive method.
class SizeLimit : public Error {
 public:
  using Error::Error;
};

class MismatchedRecords : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace vecfog
