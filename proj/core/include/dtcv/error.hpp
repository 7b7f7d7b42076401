#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtcv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-formed network, vacuous model, or a run-time range violation.
class ModelError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

/// Resource limit reached before the state space was exhausted. Never a verdict.
class InconclusiveError : public Error {
 public:
  InconclusiveError(const std::string& what, std::size_t explored, std::size_t frontier,
                    std::size_t depth)
      : Error(what), explored_(explored), frontier_(frontier), depth_(depth) {}

  std::size_t states_explored() const noexcept { return explored_; }
  std::size_t frontier_size() const noexcept { return frontier_; }
  std::size_t depth() const noexcept { return depth_; }

 private:
  std::size_t explored_;
  std::size_t frontier_;
  std::size_t depth_;
};

class TraceError : public Error {
 public:
  TraceError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace dtcv
