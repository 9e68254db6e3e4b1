#pragma once

#include <stdexcept>
#include <string>

namespace vroad {

/// Base of every domain error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class DuplicateLabel : public Error {
 public:
  explicit DuplicateLabel(const std::string& label) : Error("duplicate PoI label: " + label) {}
};

class TooFarFromRoad : public Error {
 public:
  using Error::Error;
};

/// Graph or map contents that violate a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(const std::string& id) : Error("unknown node: " + id) {}
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(const std::string& label) : Error("unknown label: " + label) {}
};

class NoPath : public Error {
 public:
  NoPath(const std::string& from, const std::string& to)
      : Error("no path from " + from + " to " + to) {}
};

/// Malformed document; the message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vroad
