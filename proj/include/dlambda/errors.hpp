#pragma once

#include <stdexcept>
#include <string>

namespace dlambda {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VarTableMismatch : public Error {
 public:
  VarTableMismatch() : Error("operands use different variable tables") {}
};

class UnknownVariable : public Error {
 public:
  explicit UnknownVariable(const std::string& name) : Error("unknown variable '" + name + "'") {}
};

class NotACoordinate : public Error {
 public:
  explicit NotACoordinate(const std::string& name)
      : Error("'" + name + "' is a parameter and cannot be differentiated") {}
};

class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(const std::string& what = "division by zero") : Error(what) {}
};

class ExponentOverflow : public Error {
 public:
  ExponentOverflow() : Error("monomial exponent exceeds 255") {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error("parse error at offset " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

class ChartMismatch : public Error {
 public:
  ChartMismatch(const std::string& a, const std::string& b)
      : Error("operators live on different charts: '" + a + "' vs '" + b + "'") {}
};

class SingularMap : public Error {
 public:
  explicit SingularMap(const std::string& what) : Error("chart map is not invertible: " + what) {}
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dlambda
