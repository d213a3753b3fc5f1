#include "imm/errors.hpp"

namespace imm {

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::parse: return "parse";
    case ErrorKind::degenerate_immersion: return "degenerate_immersion";
    case ErrorKind::frame_construction: return "frame_construction";
    case ErrorKind::non_flat_bundle: return "non_flat_bundle";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::weight: return "weight";
    case ErrorKind::oracle: return "oracle";
    case ErrorKind::domain: return "domain";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace imm
