#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Raised by the factorization when a pivot drops below tolerance.
class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, std::size_t pivot_index)
      : Error(what), pivot_index_(pivot_index) {}
  std::size_t pivot_index() const noexcept { return pivot_index_; }

 private:
  std::size_t pivot_index_;
};

// A randomized search ran out of budget. achieved() is how far it got.
class SamplerExhausted : public Error {
 public:
  SamplerExhausted(const std::string& what, std::size_t achieved,
                   std::size_t requested)
      : Error(what), achieved_(achieved), requested_(requested) {}
  std::size_t achieved() const noexcept { return achieved_; }
  std::size_t requested() const noexcept { return requested_; }

 private:
  std::size_t achieved_;
  std::size_t requested_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace kt
