#pragma once

#include <stdexcept>
#include <string>

namespace wgfd {

// Information matrix is singular where an inverse-based criterion needs it.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite feature values, eigensolver failure, and similar.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The simple-eigenvalue E gradient was requested at a repeated lambda_min.
class MultiplicityError : public std::runtime_error {
 public:
  explicit MultiplicityError(int multiplicity)
      : std::runtime_error("lambda_min has multiplicity " + std::to_string(multiplicity) +
                           "; use the steepest-ascent direction instead"),
        multiplicity_(multiplicity) {}

  int multiplicity() const { return multiplicity_; }

 private:
  int multiplicity_;
};

}  // namespace wgfd
