#include "fibrank/errors.hpp"

namespace fibrank {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::bad_prime: return "BadPrime";
    case Errc::malformed_config: return "MalformedConfig";
    case Errc::degenerate_family: return "DegenerateFamily";
    case Errc::singular_fiber: return "SingularFiber";
    case Errc::parity_violation: return "ParityViolation";
    case Errc::out_of_order_prime: return "OutOfOrderPrime";
    case Errc::insufficient_data: return "InsufficientData";
    case Errc::hypothesis_not_asserted: return "HypothesisNotAsserted";
    case Errc::inconsistent_ledger: return "InconsistentLedger";
    case Errc::over_determined: return "OverDetermined";
    case Errc::mismatch_bug: return "MismatchBug";
    case Errc::corrupt_artifact: return "CorruptArtifact";
    case Errc::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

}  // namespace fibrank
