#include "riskalloc/error.hpp"

namespace riskalloc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::Input: return "input error";
    case ErrorKind::Model: return "model error";
    case ErrorKind::Convergence: return "convergence error";
    case ErrorKind::Config: return "configuration error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace riskalloc
