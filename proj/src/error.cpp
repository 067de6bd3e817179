#include "autoreg/error.hpp"

namespace autoreg {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::DecompositionFailure: return "decomposition-failure";
        case ErrorKind::Singular: return "singular";
        case ErrorKind::DegenerateData: return "degenerate-data";
        case ErrorKind::IllPosed: return "ill-posed";
        case ErrorKind::NonFinite: return "non-finite";
    }
    return "unknown";
}

}  // namespace autoreg
