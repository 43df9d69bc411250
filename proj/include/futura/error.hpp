#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace futura {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error("syntax error at " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A formula is outside the fragment an operation requires.
class FragmentError : public Error {
public:
  using Error::Error;
};

/// Evaluation would need to look past the depth of the truncated model.
class HorizonExceeded : public Error {
public:
  using Error::Error;
};

class TimelineMismatch : public Error {
public:
  using Error::Error;
};

class UnknownNode : public Error {
public:
  using Error::Error;
};

class RestrictionError : public Error {
public:
  using Error::Error;
};

class SerialityError : public Error {
public:
  using Error::Error;
};

/// A model description violates the tree-model invariants.
class ModelError : public Error {
public:
  explicit ModelError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid model";
    for (std::size_t k = 0; k < items.size(); ++k)
      out += (k == 0 ? ": " : "; ") + items[k];
    return out;
  }

  std::vector<std::string> violations_;
};

class ScaleError : public Error {
public:
  using Error::Error;
};

/// Normal-form conversion exceeded its node budget.
class NormalFormTooLarge : public Error {
public:
  using Error::Error;
};

} // namespace futura
