#include "pilotlim/error.hpp"

namespace pilotlim {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid_argument";
        case ErrorKind::degenerate_field: return "degenerate_field";
        case ErrorKind::needs_interior_time: return "needs_interior_time";
        case ErrorKind::time_resolution: return "time_resolution";
        case ErrorKind::no_path: return "no_path";
        case ErrorKind::multivalued: return "multivalued";
        case ErrorKind::undefined_wavelength: return "undefined_wavelength";
        case ErrorKind::io: return "io";
        case ErrorKind::validation: return "validation";
    }
    return "unknown";
}

}  // namespace pilotlim
