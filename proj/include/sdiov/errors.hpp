#pragma once

#include <stdexcept>
#include <string>

namespace sdiov {

// Every failure the library reports derives from Error so callers can catch
// one type at the process boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoActivePm : public Error {
 public:
  NoActivePm() : Error("no active physical machine") {}
};

class NoPath : public Error {
 public:
  explicit NoPath(const std::string& what) : Error("no path: " + what) {}
};

class NothingToDo : public Error {
 public:
  NothingToDo() : Error("consolidation needs at least two active machines") {}
};

class NoStandbyPm : public Error {
 public:
  NoStandbyPm() : Error("standby pool exhausted") {}
};

class EmptyRun : public Error {
 public:
  EmptyRun() : Error("cannot summarize an empty run") {}
};

class MismatchedScenarios : public Error {
 public:
  explicit MismatchedScenarios(const std::string& what)
      : Error("summaries are not comparable: " + what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at byte " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& constraint)
      : Error("invalid value for '" + field + "': " + constraint), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("i/o error: " + what) {}
};

}  // namespace sdiov
