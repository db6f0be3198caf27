#pragma once

#include <stdexcept>
#include <string>

namespace stabtrace {

enum class ErrorKind {
  inconsistent_gluing,
  disconnected,
  non_orientable,
  non_integer_genus,
  unknown_edge,
  unknown_dart,
  invalid_path,
  budget_exhausted,
  needs_refinement,
  invalid_diagram,
  wrong_endpoints,
  beta_not_disjoint,
  alpha_crosses_other_arc,
  arc_search_failed,
  syntax_error,
  semantics_error,
  no_case_matches,
  bound_violated,
  pattern_mismatch,
  would_disconnect,
  disconnected_surface,
  script_failed,
  io_error,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace stabtrace
