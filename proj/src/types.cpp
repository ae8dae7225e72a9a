#include "revdis/types.hpp"

#include <cstdlib>
#include <string>

#include "revdis/errors.hpp"

namespace revdis {

int HilbertDims::joint_dim_limit() {
    const char* s = std::getenv("REVDIS_MAX_DIM");
    if (s == nullptr || *s == '\0') return 4096;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v < 4) {
        throw ConfigError("REVDIS_MAX_DIM must be an integer >= 4, got '" +
                          std::string(s) + "'");
    }
    return static_cast<int>(v);
}

void HilbertDims::validate() const {
    if (n_cav < 2 || n_mech < 2) {
        throw DimensionError("joint model needs n_cav >= 2 and n_mech >= 2, got " +
                             std::to_string(n_cav) + " x " + std::to_string(n_mech));
    }
    const long long joint_dim = 1LL * n_cav * n_mech;
    const int limit = joint_dim_limit();
    if (joint_dim > limit) {
        throw DimensionError("joint dimension " + std::to_string(joint_dim) +
                             " exceeds the limit " + std::to_string(limit) +
                             " (set REVDIS_MAX_DIM to raise it)");
    }
}

void HilbertDims::validate_cavity_only() const {
    if (n_cav < 2 || n_mech != 1) {
        throw DimensionError("cavity-only model needs n_cav >= 2 and n_mech == 1, got " +
                             std::to_string(n_cav) + " x " + std::to_string(n_mech));
    }
    if (n_cav > joint_dim_limit()) {
        throw DimensionError("cavity dimension " + std::to_string(n_cav) +
                             " exceeds the limit " + std::to_string(joint_dim_limit()) +
                             " (set REVDIS_MAX_DIM to raise it)");
    }
}

}  // namespace revdis
