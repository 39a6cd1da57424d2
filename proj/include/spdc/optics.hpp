// Optical elements acting on a BiphotonAmplitude: common-path retardation
// plates, birefringent compensators, and the beamsplitter + analyzer
// coincidence projection.

#pragma once

#include <cmath>
#include <stdexcept>

#include "spdc/jones.hpp"
#include "spdc/state.hpp"

namespace spdc {

// Element placed before the beamsplitter, where both photons share one
// spatial mode: A(Omega) <- u A(Omega) u^T. Norm and exchange symmetry
// are preserved; projectors are not part of the modeled setup here.
inline BiphotonAmplitude apply_common_path(const BiphotonAmplitude& state,
                                           const JonesElement& u) {
    if (u.kind != JonesKind::unitary)
        throw std::invalid_argument("apply_common_path: element must be unitary");
    const Mat2c ut = u.m.transpose();
    return state.map([&](double, const Mat2c& a) { return u.m * a * ut; });
}

// Birefringent plate adding a signed cross-polarization delay tau_c:
// A_HV <- A_HV e^{+i Omega tau_c}, A_VH <- A_VH e^{-i Omega tau_c};
// the co-polarized entries acquire no relative phase. tau_c = -tau0
// undoes the crystal delay, tau_c = +tau0 doubles it.
inline BiphotonAmplitude compensator(const BiphotonAmplitude& state, double tau_c) {
    return state.map([&](double omega, const Mat2c& a) {
        const double phi = omega * tau_c;
        const cplx phase(std::cos(phi), std::sin(phi));
        Mat2c out = a;
        out.hv = a.hv * phase;
        out.vh = a.vh * std::conj(phase);
        return out;
    });
}

// Coincidence rate behind an ideal 50/50 non-polarizing beamsplitter,
// post-selected on one photon per port, with Glan prisms at theta1 (the
// frequency-selected port, omega0+Omega) and theta2 (omega0-Omega):
// |v1^T A(Omega) v2|^2, normalized so the uncompensated source at
// Omega = 0, theta1 = theta2 = 45 deg gives 1.
inline double coincidence_projection(const BiphotonAmplitude& state, double theta1,
                                     double theta2, double omega) {
    const cplx amp = analyzer_amplitude(state.at(omega), theta1, theta2);
    return std::norm(amp) / (state.peak_density() / 2.0);
}

}  // namespace spdc
