#include "dpg/error.hpp"

namespace dpg {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::Unsupported: return "unsupported";
        case ErrorCode::Parse: return "parse";
        case ErrorCode::NonManifold: return "non-manifold";
        case ErrorCode::InvertedElement: return "inverted-element";
        case ErrorCode::Singular: return "singular";
        case ErrorCode::NotSpd: return "not-spd";
        case ErrorCode::NotConverged: return "not-converged";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

}  // namespace dpg
