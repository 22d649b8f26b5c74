#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slicing {

enum class ErrorKind {
  invalid_argument,
  infeasible_latency,
  infeasible,
  undefined_interference_limited,
  table_exhausted,
  out_of_model,
  io,
  missing_table,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::infeasible_latency: return "infeasible-latency";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::undefined_interference_limited: return "undefined-IL";
    case ErrorKind::table_exhausted: return "table-exhausted";
    case ErrorKind::out_of_model: return "out-of-model";
    case ErrorKind::io: return "io";
    case ErrorKind::missing_table: return "missing-table";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::invalid_argument, what);
}

}  // namespace slicing
