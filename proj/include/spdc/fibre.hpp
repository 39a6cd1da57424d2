// Dispersive-fibre propagation: group-velocity dispersion maps the spectral
// density onto the photon arrival-time-difference density via the linear
// asymptotic mapping Omega -> tau = 2 k'' z Omega.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spdc/optics.hpp"
#include "spdc/state.hpp"

namespace spdc {

struct FibreParams {
    double k2 = 3.2e-26;  // s^2/m, GVD coefficient k''
    double z = 1000.0;    // m

    // Signed time-map scale, seconds^2.
    double time_scale() const { return 2.0 * k2 * z; }
    void validate() const {
        if (k2 * z == 0.0)
            throw std::invalid_argument("FibreParams: k2*z must be nonzero");
    }
};

// Arrival-time-difference density P(tau) = S(tau / 2k''z) / |2k''z|.
struct TimeAmplitudeCurve {
    std::vector<double> tau;      // s, ascending
    std::vector<double> density;  // 1/s
    double total = 0.0;           // trapezoid integral, equals the state norm
    double singlet_delay = 0.0;   // s, pi |k'' z| / tau0: the antisymmetric-state delay
    bool mirrored = false;        // k2*z < 0: axis reversed (anomalous dispersion)
    bool regime_ok = true;        // mapped spread >= 10x detector jitter
};

inline double singlet_delay(const FibreParams& f, double tau0) {
    return constants::pi * std::abs(f.k2 * f.z) / tau0;
}

// jitter_sigma (s) is used only for the mapping-regime validity flag: the
// linear map is meaningful when the mapped spectral spread dominates the
// detector timing jitter.
inline TimeAmplitudeCurve fibre_time_density(const BiphotonAmplitude& state,
                                             const FibreParams& f,
                                             double jitter_sigma = 0.0) {
    f.validate();
    const double scale = f.time_scale();
    const double a = std::abs(scale);
    const int n = state.grid().size();

    TimeAmplitudeCurve curve;
    curve.mirrored = scale < 0.0;
    curve.singlet_delay = singlet_delay(f, state.tau0());
    curve.tau.resize(static_cast<std::size_t>(n));
    curve.density.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        // tau/scale lands on the mirrored sample when the map flips the axis
        const int src = curve.mirrored ? n - 1 - k : k;
        curve.tau[static_cast<std::size_t>(k)] = a * state.grid().omega(k);
        curve.density[static_cast<std::size_t>(k)] = state.density(src) / a;
    }
    curve.total = total_pair_rate(state);

    const double spread = curve.tau.back() - curve.tau.front();
    curve.regime_ok = jitter_sigma <= 0.0 || spread >= 10.0 * jitter_sigma;
    return curve;
}

// Analyzer coincidence rate at a selected arrival-time difference:
// the projection oracle composed with the inverse time map.
inline double coincidence_projection_polarized_time(const BiphotonAmplitude& state,
                                                    double theta1, double theta2,
                                                    const FibreParams& f, double tau) {
    f.validate();
    return coincidence_projection(state, theta1, theta2, tau / f.time_scale());
}

}  // namespace spdc
