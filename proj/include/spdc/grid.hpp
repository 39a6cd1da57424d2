// Symmetric frequency-offset grid on which two-photon amplitudes are sampled.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spdc {

// Uniform grid of frequency offsets Omega (rad/s), symmetric about 0 and
// containing 0 as a sample. Mirror samples are bit-identical negations,
// so exchange-symmetry checks can compare exact indices.
class FrequencyGrid {
public:
    // half_extent is dimensionless (maximum |Omega*tau0| covered);
    // tau0 (s) converts it to rad/s.
    static FrequencyGrid make(int n_points, double half_extent, double tau0) {
        if (n_points < 3 || n_points % 2 == 0)
            throw std::invalid_argument("FrequencyGrid: n_points must be odd and >= 3");
        if (!(half_extent > 0.0))
            throw std::invalid_argument("FrequencyGrid: half_extent must be > 0");
        if (!(tau0 > 0.0))
            throw std::invalid_argument("FrequencyGrid: tau0 must be > 0");
        FrequencyGrid g;
        g.n_points_ = n_points;
        g.half_extent_ = half_extent;
        const double omega_max = half_extent / tau0;
        const int mid = (n_points - 1) / 2;
        g.step_ = omega_max / mid;
        g.omega_.resize(n_points);
        for (int k = 0; k <= mid; ++k) {
            const double w = k * g.step_;
            g.omega_[mid + k] = w;
            g.omega_[mid - k] = -w;  // exact mirror
        }
        return g;
    }

    int size() const { return n_points_; }
    int center_index() const { return (n_points_ - 1) / 2; }
    double half_extent() const { return half_extent_; }
    double step() const { return step_; }
    double omega(int k) const { return omega_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& omegas() const { return omega_; }
    double omega_min() const { return omega_.front(); }
    double omega_max() const { return omega_.back(); }

    bool contains(double omega) const {
        const double slack = 1e-9 * (omega_max() - omega_min());
        return omega >= omega_min() - slack && omega <= omega_max() + slack;
    }

    // Index of the grid sample nearest to omega.
    int nearest_index(double omega) const {
        if (!contains(omega))
            throw std::out_of_range("FrequencyGrid: omega outside grid range");
        int k = static_cast<int>(std::lround((omega - omega_min()) / step_));
        if (k < 0) k = 0;
        if (k >= n_points_) k = n_points_ - 1;
        return k;
    }

    // Trapezoid quadrature weight of sample k.
    double weight(int k) const {
        return (k == 0 || k == n_points_ - 1) ? 0.5 * step_ : step_;
    }

private:
    int n_points_ = 0;
    double half_extent_ = 0.0;
    double step_ = 0.0;
    std::vector<double> omega_;
};

}  // namespace spdc
