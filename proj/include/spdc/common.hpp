// Shared scalar types and the 2x2 complex matrix used for the
// polarization degree of freedom (basis order: H, V).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>

namespace spdc {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

// Fixed number formatting for every emitted byte: 9 significant digits,
// C locale, so equal inputs give equal output files.
inline std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string fmt_u64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    return buf;
}

// sin(x)/x with the removable singularity at x = 0.
inline double sinc_amplitude(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

// 2x2 complex matrix over {H, V}. Row index = first argument
// (polarization of the photon at +Omega), column index = second.
struct Mat2c {
    cplx hh{}, hv{}, vh{}, vv{};

    friend Mat2c operator+(const Mat2c& a, const Mat2c& b) {
        return {a.hh + b.hh, a.hv + b.hv, a.vh + b.vh, a.vv + b.vv};
    }
    friend Mat2c operator-(const Mat2c& a, const Mat2c& b) {
        return {a.hh - b.hh, a.hv - b.hv, a.vh - b.vh, a.vv - b.vv};
    }
    friend Mat2c operator*(const cplx& s, const Mat2c& a) {
        return {s * a.hh, s * a.hv, s * a.vh, s * a.vv};
    }
    friend Mat2c operator*(const Mat2c& a, const Mat2c& b) {
        return {a.hh * b.hh + a.hv * b.vh, a.hh * b.hv + a.hv * b.vv,
                a.vh * b.hh + a.vv * b.vh, a.vh * b.hv + a.vv * b.vv};
    }

    Mat2c transpose() const { return {hh, vh, hv, vv}; }
    Mat2c adjoint() const {
        return {std::conj(hh), std::conj(vh), std::conj(hv), std::conj(vv)};
    }

    // Sum of squared moduli of the entries (squared Frobenius norm).
    double norm_sq() const {
        return std::norm(hh) + std::norm(hv) + std::norm(vh) + std::norm(vv);
    }

    static Mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

// v1^T A v2 with v_i = (cos theta_i, sin theta_i): the two-photon
// amplitude for both photons passing linear analyzers at theta1, theta2.
inline cplx analyzer_amplitude(const Mat2c& a, double theta1, double theta2) {
    const double c1 = std::cos(theta1), s1 = std::sin(theta1);
    const double c2 = std::cos(theta2), s2 = std::sin(theta2);
    return c1 * (a.hh * c2 + a.hv * s2) + s1 * (a.vh * c2 + a.vv * s2);
}

inline double max_entry_distance(const Mat2c& a, const Mat2c& b) {
    return std::max(std::max(std::abs(a.hh - b.hh), std::abs(a.hv - b.hv)),
                    std::max(std::abs(a.vh - b.vh), std::abs(a.vv - b.vv)));
}

}  // namespace spdc
