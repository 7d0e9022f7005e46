#ifndef PELLABEL_ERRORS_HPP
#define PELLABEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pellabel {

/// Base class for all library errors. The `code()` string is stable and
/// machine-readable; the what() text is for humans.
class error : public std::runtime_error {
 public:
  error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Invalid input data (ordering violations, malformed combs, bad degrees).
class validation_error : public error {
 public:
  validation_error(const std::string& msg) : error("invalid_input", msg) {}
};

/// A quadrature did not converge below its tolerance at the node cap.
class quadrature_error : public error {
 public:
  quadrature_error(const std::string& msg, double achieved)
      : error("quadrature_nonconvergence", msg), achieved_tol_(achieved) {}
  double achieved_tol() const noexcept { return achieved_tol_; }

 private:
  double achieved_tol_;
};

/// Linear algebra failure (singular system, rank-deficient fit).
class linalg_error : public error {
 public:
  linalg_error(const std::string& msg) : error("linear_algebra", msg) {}
};

/// Nonlinear solver failure (Newton stagnation, ordering collapse).
class solver_error : public error {
 public:
  solver_error(std::string code, const std::string& msg, double best_residual,
               int iterations)
      : error(std::move(code), msg),
        best_residual_(best_residual),
        iterations_(iterations) {}
  double best_residual() const noexcept { return best_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  int iterations_;
};

}  // namespace pellabel

#endif
