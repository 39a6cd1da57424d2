// Sampled (abscissa, rate) series shared by the analytic and Monte Carlo paths.

#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace spdc {

enum class Abscissa { omega, lambda, theta, tau };

inline const char* abscissa_unit(Abscissa a) {
    switch (a) {
        case Abscissa::omega: return "omega_rad_s";
        case Abscissa::lambda: return "lambda_nm";
        case Abscissa::theta: return "theta_deg";
        case Abscissa::tau: return "tau_ns";
    }
    return "?";
}

struct CoincidenceCurve {
    Abscissa kind = Abscissa::omega;
    std::vector<double> x;     // strictly increasing
    std::vector<double> rate;  // >= 0
    std::string label;
    std::string normalization;  // note on the scale convention

    double max_rate() const {
        double m = 0.0;
        for (double r : rate) m = std::max(m, r);
        return m;
    }
    double min_rate() const {
        if (rate.empty()) throw std::invalid_argument("empty curve");
        double m = rate.front();
        for (double r : rate) m = std::min(m, r);
        return m;
    }
};

// Scale a group of curves by the common maximum, preserving their
// relative heights (one figure family = one normalization constant).
inline void normalize_family(std::vector<CoincidenceCurve*> curves) {
    double peak = 0.0;
    for (auto* c : curves) peak = std::max(peak, c->max_rate());
    if (peak <= 0.0) return;
    for (auto* c : curves) {
        for (double& r : c->rate) r /= peak;
        c->normalization = "peak of curve family = 1";
    }
}

}  // namespace spdc
