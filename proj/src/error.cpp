#include "ipoms/error.hpp"

#include <algorithm>

namespace ipoms {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::exactly_one_violation: return "EXACTLY_ONE_VIOLATION";
    case Errc::non_minimal_source: return "NON_MINIMAL_SOURCE";
    case Errc::non_maximal_target: return "NON_MAXIMAL_TARGET";
    case Errc::evord_cycle: return "EVORD_CYCLE";
    case Errc::not_interval: return "NOT_INTERVAL";
    case Errc::interface_mismatch: return "INTERFACE_MISMATCH";
    case Errc::not_coherent: return "NOT_COHERENT";
    case Errc::not_dense: return "NOT_DENSE";
    case Errc::length_mismatch: return "LENGTH_MISMATCH";
    case Errc::not_subsumed: return "NOT_SUBSUMED";
    case Errc::bound_exceeded: return "BOUND_EXCEEDED";
    case Errc::face_type_mismatch: return "FACE_TYPE_MISMATCH";
    case Errc::precubical_identity_violation: return "PRECUBICAL_IDENTITY_VIOLATION";
    case Errc::dangling_start_accept: return "DANGLING_START_ACCEPT";
    case Errc::invalid_path: return "INVALID_PATH";
    case Errc::width_exceeded: return "WIDTH_EXCEEDED";
    case Errc::unbound_variable: return "UNBOUND_VARIABLE";
    case Errc::alphabet_mismatch: return "ALPHABET_MISMATCH";
    case Errc::capacity: return "CAPACITY";
    case Errc::parse_error: return "PARSE_ERROR";
    case Errc::invalid_argument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

namespace {

std::string render(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += "; ";
    out += errc_name(d.code);
    if (!d.message.empty()) {
      out += ": ";
      out += d.message;
    }
  }
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message)
    : Error(std::vector<Diagnostic>{{code, message}}) {}

Error::Error(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(render(diagnostics)), diagnostics_(std::move(diagnostics)) {}

bool Error::has(Errc code) const {
  return std::any_of(diagnostics_.begin(), diagnostics_.end(),
                     [code](const Diagnostic& d) { return d.code == code; });
}

}  // namespace ipoms
