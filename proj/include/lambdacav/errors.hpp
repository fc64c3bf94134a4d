#pragma once

#include <stdexcept>
#include <string>

#include "lambdacav/density_matrix.hpp"

namespace lambdacav {

/// Base class for steady-state solver failures.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* code() const noexcept { return "SolverError"; }
};

class NonUniqueSteadyState : public SolverError {
 public:
  using SolverError::SolverError;
  const char* code() const noexcept override { return "NonUniqueSteadyState"; }
};

/// Post-processed state violates positivity or the residual bound.
class InvalidSteadyState : public SolverError {
 public:
  using SolverError::SolverError;
  const char* code() const noexcept override { return "InvalidSteadyState"; }
};

class TimedOut : public SolverError {
 public:
  TimedOut(const std::string& what, DensityMatrix last)
      : SolverError(what), last_(std::move(last)) {}
  const char* code() const noexcept override { return "TimedOut"; }
  const DensityMatrix& last_state() const { return last_; }

 private:
  DensityMatrix last_;
};

class TruncationNotConverged : public SolverError {
 public:
  TruncationNotConverged(const std::string& what, DensityMatrix best, double rel_change,
                         double tail)
      : SolverError(what), best_(std::move(best)), rel_change_(rel_change), tail_(tail) {}
  const char* code() const noexcept override { return "TruncationNotConverged"; }
  const DensityMatrix& best_state() const { return best_; }
  double relative_change() const { return rel_change_; }
  double tail_population() const { return tail_; }

 private:
  DensityMatrix best_;
  double rel_change_;
  double tail_;
};

}  // namespace lambdacav
