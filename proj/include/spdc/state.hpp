// Two-photon polarization-frequency amplitude of collinear frequency-degenerate
// type-II parametric down-conversion, and its Bell-basis decomposition.
//
// The state is sampled on a FrequencyGrid as a 2x2 complex matrix A(Omega):
// A_pq is the amplitude for polarization p at omega0+Omega and q at omega0-Omega.
// The uncompensated source has A_HV = F(Omega) e^{+i Omega tau0},
// A_VH = F(Omega) e^{-i Omega tau0}, A_HH = A_VV = 0, with the crystal
// phase-matching amplitude F(Omega) = sinc(Omega tau0). The vacuum component
// never contributes to coincidences and is not represented; all rates are
// relative to the uncompensated source at Omega = 0.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spdc/common.hpp"
#include "spdc/curves.hpp"
#include "spdc/grid.hpp"

namespace spdc {

// Crystal/source configuration. tau0 = D*L/2 is the e-o group delay
// accumulated over the crystal; D = 1/u_V - 1/u_H, L the crystal length.
struct SourceParams {
    double lambda0 = 702e-9;  // m, degenerate wavelength (omega0 = pump/2)
    double tau0 = 63e-15;     // s

    static SourceParams from_tau0(double lambda0, double tau0) {
        SourceParams s{lambda0, tau0};
        s.validate();
        return s;
    }
    // D in s/m, L in m; tau0 = D*L/2 by construction.
    static SourceParams from_crystal(double lambda0, double D, double L) {
        SourceParams s{lambda0, D * L / 2.0};
        s.validate();
        return s;
    }
    void validate() const {
        if (!(lambda0 > 0.0)) throw std::invalid_argument("SourceParams: lambda0 must be > 0");
        if (!(tau0 > 0.0)) throw std::invalid_argument("SourceParams: tau0 must be > 0");
    }
    double omega0() const { return 2.0 * constants::pi * constants::speed_of_light / lambda0; }
};

// Fractions of the four Bell states in the polarization matrix at one offset,
// plus the pair rate relative to the source's Omega = 0 peak. When the pair
// rate vanishes the fractions are reported as the `undefined` sentinel.
struct BellWeights {
    static constexpr double undefined = -1.0;

    double w_phi_plus = undefined;
    double w_phi_minus = undefined;
    double w_psi_plus = undefined;
    double w_psi_minus = undefined;
    double pair_rate = 0.0;

    bool fractions_defined() const { return w_psi_minus >= 0.0; }
};

class BiphotonAmplitude {
public:
    BiphotonAmplitude(FrequencyGrid grid, std::vector<Mat2c> amps, double lambda0,
                      double tau0, double peak_density)
        : grid_(std::move(grid)), amps_(std::move(amps)), lambda0_(lambda0),
          tau0_(tau0), peak_density_(peak_density) {
        if (amps_.size() != static_cast<std::size_t>(grid_.size()))
            throw std::invalid_argument("BiphotonAmplitude: sample count mismatch");
    }

    const FrequencyGrid& grid() const { return grid_; }
    const Mat2c& sample(int k) const { return amps_[static_cast<std::size_t>(k)]; }
    double lambda0() const { return lambda0_; }
    double tau0() const { return tau0_; }

    // Reference spectral density: sum_pq |A_pq(0)|^2 of the originating
    // source, carried through optical elements so relative rates stay
    // anchored to the uncompensated Omega = 0 peak.
    double peak_density() const { return peak_density_; }

    // Complex amplitude at an arbitrary offset: exact at grid samples,
    // linear interpolation between them, out_of_range outside the grid.
    Mat2c at(double omega) const {
        if (!grid_.contains(omega))
            throw std::out_of_range("BiphotonAmplitude: omega outside grid range");
        const double pos = (omega - grid_.omega_min()) / grid_.step();
        int k = static_cast<int>(std::floor(pos));
        if (k < 0) k = 0;
        if (k >= grid_.size() - 1) k = grid_.size() - 2;
        const double t = pos - k;
        const Mat2c& a = amps_[static_cast<std::size_t>(k)];
        const Mat2c& b = amps_[static_cast<std::size_t>(k) + 1];
        return cplx(1.0 - t) * a + cplx(t) * b;
    }

    // Spectral density sum_pq |A_pq(Omega_k)|^2 at sample k.
    double density(int k) const { return amps_[static_cast<std::size_t>(k)].norm_sq(); }

    // Applies f: Mat2c -> Mat2c pointwise, keeping the carried metadata.
    template <typename F>
    BiphotonAmplitude map(F&& f) const {
        std::vector<Mat2c> out(amps_.size());
        for (int k = 0; k < grid_.size(); ++k)
            out[static_cast<std::size_t>(k)] = f(grid_.omega(k), amps_[static_cast<std::size_t>(k)]);
        return BiphotonAmplitude(grid_, std::move(out), lambda0_, tau0_, peak_density_);
    }

    // Largest violation of A_pq(Omega) = A_qp(-Omega) over the grid.
    double exchange_asymmetry() const {
        double worst = 0.0;
        for (int k = 0; k < grid_.size(); ++k) {
            const Mat2c& a = amps_[static_cast<std::size_t>(k)];
            const Mat2c m = amps_[static_cast<std::size_t>(grid_.size() - 1 - k)].transpose();
            worst = std::max(worst, max_entry_distance(a, m));
        }
        return worst;
    }

private:
    FrequencyGrid grid_;
    std::vector<Mat2c> amps_;
    double lambda0_;
    double tau0_;
    double peak_density_;
};

// Closed-form source amplitude at one offset (no grid, no interpolation).
inline Mat2c source_amplitude_at(const SourceParams& src, double omega) {
    const double x = omega * src.tau0;
    const double f = sinc_amplitude(x);
    const cplx phase(std::cos(x), std::sin(x));
    Mat2c a;
    a.hv = f * phase;
    a.vh = f * std::conj(phase);
    return a;
}

// Discretized norm: trapezoid quadrature of sum_pq |A_pq|^2 over the grid.
inline double total_pair_rate(const BiphotonAmplitude& state) {
    double total = 0.0;
    for (int k = 0; k < state.grid().size(); ++k)
        total += state.grid().weight(k) * state.density(k);
    return total;
}

// Builds the uncompensated source state on the given grid. With
// normalize = true the amplitudes are scaled so total_pair_rate == 1.
inline BiphotonAmplitude make_spdc_state(const SourceParams& src, const FrequencyGrid& grid,
                                         bool normalize = false) {
    src.validate();
    std::vector<Mat2c> amps(static_cast<std::size_t>(grid.size()));
    for (int k = 0; k < grid.size(); ++k)
        amps[static_cast<std::size_t>(k)] = source_amplitude_at(src, grid.omega(k));
    BiphotonAmplitude state(grid, std::move(amps), src.lambda0, src.tau0,
                            /*peak_density=*/2.0);
    if (normalize) {
        const double scale = 1.0 / std::sqrt(total_pair_rate(state));
        std::vector<Mat2c> scaled;
        scaled.reserve(static_cast<std::size_t>(grid.size()));
        for (int k = 0; k < grid.size(); ++k) scaled.push_back(cplx(scale) * state.sample(k));
        return BiphotonAmplitude(grid, std::move(scaled), src.lambda0, src.tau0,
                                 2.0 * scale * scale);
    }
    return state;
}

// Bell-operator decomposition of A(omega): Psi± from (A_HV ± A_VH)/sqrt(2),
// Phi± from (A_HH ± A_VV)/sqrt(2). Fractions are squared-magnitude shares;
// pair_rate is the spectral density relative to the source peak.
inline BellWeights bell_decompose(const BiphotonAmplitude& state, double omega) {
    const Mat2c a = state.at(omega);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const cplx c_phi_plus = (a.hh + a.vv) * inv_sqrt2;
    const cplx c_phi_minus = (a.hh - a.vv) * inv_sqrt2;
    const cplx c_psi_plus = (a.hv + a.vh) * inv_sqrt2;
    const cplx c_psi_minus = (a.hv - a.vh) * inv_sqrt2;

    const double density = std::norm(c_phi_plus) + std::norm(c_phi_minus) +
                           std::norm(c_psi_plus) + std::norm(c_psi_minus);
    BellWeights w;
    w.pair_rate = a.norm_sq() / state.peak_density();
    if (density < 1e-300) return w;  // spectral zero: fractions undefined
    w.w_phi_plus = std::norm(c_phi_plus) / density;
    w.w_phi_minus = std::norm(c_phi_minus) / density;
    w.w_psi_plus = std::norm(c_psi_plus) / density;
    w.w_psi_minus = std::norm(c_psi_minus) / density;
    return w;
}

// sum_pq |A_pq(Omega_k)|^2 versus Omega_k, peak-normalized to 1.
inline CoincidenceCurve pair_rate_spectrum(const BiphotonAmplitude& state) {
    CoincidenceCurve c;
    c.kind = Abscissa::omega;
    c.x.reserve(static_cast<std::size_t>(state.grid().size()));
    c.rate.reserve(static_cast<std::size_t>(state.grid().size()));
    double peak = 0.0;
    for (int k = 0; k < state.grid().size(); ++k) {
        c.x.push_back(state.grid().omega(k));
        c.rate.push_back(state.density(k));
        peak = std::max(peak, c.rate.back());
    }
    if (peak > 0.0)
        for (double& r : c.rate) r /= peak;
    c.label = "pair_rate";
    c.normalization = "peak = 1";
    return c;
}

}  // namespace spdc
