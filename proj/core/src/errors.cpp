#include "varcert/errors.hpp"

namespace varcert {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput:
      return "input";
    case ErrorKind::kCapability:
      return "capability";
    case ErrorKind::kPrecondition:
      return "precondition";
    case ErrorKind::kNonSmooth:
      return "non-smooth";
  }
  return "unknown";
}

}  // namespace varcert
