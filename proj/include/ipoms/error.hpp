#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ipoms {

enum class Errc {
  exactly_one_violation,
  non_minimal_source,
  non_maximal_target,
  evord_cycle,
  not_interval,
  interface_mismatch,
  not_coherent,
  not_dense,
  length_mismatch,
  not_subsumed,
  bound_exceeded,
  face_type_mismatch,
  precubical_identity_violation,
  dangling_start_accept,
  invalid_path,
  width_exceeded,
  unbound_variable,
  alphabet_mismatch,
  capacity,
  parse_error,
  invalid_argument,
};

// Upper-case diagnostic name, e.g. "EXACTLY_ONE_VIOLATION".
std::string_view errc_name(Errc code);

struct Diagnostic {
  Errc code;
  std::string message;
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  explicit Error(std::vector<Diagnostic> diagnostics);

  Errc code() const { return diagnostics_.front().code; }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  bool has(Errc code) const;

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace ipoms
