#pragma once

#include <stdexcept>
#include <string>

namespace argus {

// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `where` names the offending line or JSON field.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error("parse error at " + where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// A value is out of its documented range. `field` names it.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyGraphError : public Error {
 public:
  using Error::Error;
};

class NoPathError : public Error {
 public:
  using Error::Error;
};

// Requested time budget is below the fastest achievable traversal.
class InfeasibleBudgetError : public NoPathError {
 public:
  InfeasibleBudgetError(double budget_s, double min_time_s)
      : NoPathError("time budget " + std::to_string(budget_s) +
                    " s is below the minimum achievable time T_min = " +
                    std::to_string(min_time_s) + " s"),
        budget_s_(budget_s),
        min_time_s_(min_time_s) {}
  double budget_s() const noexcept { return budget_s_; }
  double min_time_s() const noexcept { return min_time_s_; }

 private:
  double budget_s_;
  double min_time_s_;
};

// Timeout or expansion limit hit before any feasible path was found.
class ResourceExhaustedError : public Error {
 public:
  using Error::Error;
};

}  // namespace argus
