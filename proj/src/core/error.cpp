#include "twistxxz/error.hpp"

namespace twistxxz {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid argument";
        case ErrorKind::capacity: return "capacity exceeded";
        case ErrorKind::degenerate_anisotropy: return "degenerate anisotropy";
        case ErrorKind::singular_configuration: return "singular root configuration";
        case ErrorKind::singular_matrix: return "singular matrix";
        case ErrorKind::precondition: return "precondition violated";
        case ErrorKind::non_physical: return "non-physical root set";
        case ErrorKind::degeneracy_resolution: return "degeneracy resolution failed";
        case ErrorKind::inconsistent_zero_set: return "inconsistent zero set";
        case ErrorKind::consistency: return "consistency check failed";
        case ErrorKind::io: return "i/o error";
    }
    return "unknown error";
}

void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace twistxxz
