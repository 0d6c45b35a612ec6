#pragma once

#include <stdexcept>
#include <string>

namespace otkit {

// Error categories map onto the CLI exit codes: input 2, infeasible 3,
// internal invariant violation 4.

class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require_input(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

inline void require_internal(bool cond, const std::string& msg) {
  if (!cond) throw InternalError(msg);
}

}  // namespace otkit
