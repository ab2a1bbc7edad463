#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tvcs {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// An angle fell outside a tabulated element pattern.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// The augmented Lagrangian became non-finite.
class SolverDiverged : public Error {
 public:
  explicit SolverDiverged(int iteration)
      : Error("solver diverged at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}

  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

}  // namespace tvcs
