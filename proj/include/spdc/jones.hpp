// Jones matrices for the polarization elements of the setup.

#pragma once

#include <cmath>

#include "spdc/common.hpp"

namespace spdc {

enum class JonesKind { unitary, projector };

struct JonesElement {
    Mat2c m;
    JonesKind kind = JonesKind::unitary;
};

inline Mat2c rotation(double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return {c, -s, s, c};
}

// Rank-1 projector onto (cos theta, sin theta): a Glan prism at theta.
inline JonesElement polarizer(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {{c * c, c * s, s * c, s * s}, JonesKind::projector};
}

// Half-wave plate with fast axis at alpha: R(a) diag(1,-1) R(-a),
// no extra global phase.
inline JonesElement hwp(double alpha) {
    const double c2 = std::cos(2.0 * alpha), s2 = std::sin(2.0 * alpha);
    return {{c2, s2, s2, -c2}, JonesKind::unitary};
}

// Quarter-wave plate with fast axis at alpha: R(a) diag(1,i) R(-a).
inline JonesElement qwp(double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    const cplx i(0.0, 1.0);
    const cplx off = (1.0 - i) * (c * s);
    return {{c * c + i * s * s, off, off, s * s + i * c * c}, JonesKind::unitary};
}

inline double unitarity_defect(const Mat2c& m) {
    return max_entry_distance(m.adjoint() * m, Mat2c::identity());
}

inline double projector_defect(const Mat2c& m) {
    return std::max(max_entry_distance(m * m, m), max_entry_distance(m.adjoint(), m));
}

}  // namespace spdc
