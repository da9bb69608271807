#pragma once

#include <stdexcept>
#include <string>

namespace superlase {

enum class ErrorCode {
  Domain,
  Config,
  Spec,
  Singular,
  NoMinimum,
  Bracket,
  Stiffness,
  Divergence,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class SpecError : public Error {
 public:
  explicit SpecError(const std::string& what) : Error(ErrorCode::Spec, what) {}
};

// Raised at the locus gamma*v == detuning*u where the critical coupling diverges.
class SingularPointError : public Error {
 public:
  SingularPointError(const std::string& what, double detuning)
      : Error(ErrorCode::Singular, what), detuning_(detuning) {}
  double detuning() const noexcept { return detuning_; }

 private:
  double detuning_;
};

class NoMinimumError : public Error {
 public:
  explicit NoMinimumError(const std::string& what) : Error(ErrorCode::NoMinimum, what) {}
};

class BracketError : public Error {
 public:
  BracketError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
      : Error(ErrorCode::Bracket, what), lo_(lo), hi_(hi), f_lo_(f_lo), f_hi_(f_hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double f_lo() const noexcept { return f_lo_; }
  double f_hi() const noexcept { return f_hi_; }

 private:
  double lo_, hi_, f_lo_, f_hi_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line, std::string key)
      : Error(ErrorCode::Config, what), line_(line), key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double last_good_time)
      : Error(ErrorCode::Stiffness, what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time)
      : Error(ErrorCode::Divergence, what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace superlase
