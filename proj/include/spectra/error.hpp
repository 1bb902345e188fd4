#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two numeric facts about the same quantity have disjoint intervals.
class EmptyIntersection : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

class NotComparable : public Error {
 public:
  using Error::Error;
};

class InvalidPoset : public Error {
 public:
  using Error::Error;
};

class PosetTooLarge : public InvalidPoset {
 public:
  using InvalidPoset::InvalidPoset;
};

class InvalidExpr : public Error {
 public:
  using Error::Error;
};

class UnknownSubject : public Error {
 public:
  using Error::Error;
};

class NotATensor : public Error {
 public:
  using Error::Error;
};

class NoDerivation : public Error {
 public:
  using Error::Error;
};

class MissingLabel : public Error {
 public:
  explicit MissingLabel(std::string label, const std::string& what)
      : Error(what), label_(std::move(label)) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class IncompletePoset : public Error {
 public:
  using Error::Error;
};

class NonAF : public Error {
 public:
  using Error::Error;
};

class UnknownFixture : public Error {
 public:
  using Error::Error;
};

class InvalidFixture : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string expected,
             const std::string& what)
      : Error(what), line_(line), column_(column), expected_(std::move(expected)) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

}  // namespace spectra
