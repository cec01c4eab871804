#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cohsplit {

// Maps onto the CLI exit-status contract: parse -> 2, precondition -> 3,
// internal -> 4.
enum class ErrorCategory { parse, precondition, internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string name, const std::string& detail)
      : std::runtime_error(name + ": " + detail),
        category_(category),
        name_(std::move(name)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& name() const noexcept { return name_; }

 private:
  ErrorCategory category_;
  std::string name_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& detail)
      : Error(ErrorCategory::parse, "ParseError", detail) {}
};

class MalformedPartition : public Error {
 public:
  explicit MalformedPartition(const std::string& detail)
      : Error(ErrorCategory::precondition, "MalformedPartition", detail) {}
};

class UnassignedPoint : public Error {
 public:
  explicit UnassignedPoint(const std::string& point)
      : Error(ErrorCategory::precondition, "UnassignedPoint", point) {}
};

class DuplicateElement : public Error {
 public:
  explicit DuplicateElement(const std::string& detail)
      : Error(ErrorCategory::precondition, "DuplicateElement", detail) {}
};

class EmptyElement : public Error {
 public:
  EmptyElement()
      : Error(ErrorCategory::precondition, "EmptyElement",
              "the zero element cannot be split") {}
};

class EmptyInput : public Error {
 public:
  EmptyInput()
      : Error(ErrorCategory::precondition, "EmptyInput", "no elements to process") {}
};

// No element of the available prefix can meet a Hit goal.
class NoWitness : public Error {
 public:
  NoWitness(std::size_t goal_index, const std::string& detail)
      : Error(ErrorCategory::precondition, "NoWitness",
              "goal " + std::to_string(goal_index) + ": " + detail),
        goal_index_(goal_index) {}

  std::size_t goal_index() const noexcept { return goal_index_; }

 private:
  std::size_t goal_index_;
};

class IncoherentResult : public Error {
 public:
  explicit IncoherentResult(const std::string& detail)
      : Error(ErrorCategory::internal, "IncoherentResult", detail) {}
};

class MissingTarget : public Error {
 public:
  explicit MissingTarget(const std::string& detail)
      : Error(ErrorCategory::precondition, "MissingTarget", detail) {}
};

class ConfigExhausted : public Error {
 public:
  explicit ConfigExhausted(const std::string& detail)
      : Error(ErrorCategory::precondition, "ConfigExhausted", detail) {}
};

class NotFaithfullyIndexed : public Error {
 public:
  explicit NotFaithfullyIndexed(const std::string& detail)
      : Error(ErrorCategory::precondition, "NotFaithfullyIndexed", detail) {}
};

class InconsistentFamily : public Error {
 public:
  explicit InconsistentFamily(const std::string& detail)
      : Error(ErrorCategory::precondition, "InconsistentFamily", detail) {}
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& detail)
      : Error(ErrorCategory::internal, "InvariantViolation", detail) {}
};

}  // namespace cohsplit
