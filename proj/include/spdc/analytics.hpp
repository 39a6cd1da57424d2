// Closed-form coincidence curves and figures of merit: monochromator-swept
// spectra, polarization fringes, fringe visibility, and the wavelength <->
// frequency-offset conversion.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdc/curves.hpp"
#include "spdc/optics.hpp"
#include "spdc/state.hpp"

namespace spdc {

// Closed-form analyzer coincidence rate of the uncompensated source,
// x = Omega * tau0:
//   sinc^2(x) [ sin^2(t1+t2) cos^2(x) + sin^2(t1-t2) sin^2(x) ].
inline double rc_closed_form(double omega_tau0, double theta1, double theta2) {
    const double f = sinc_amplitude(omega_tau0);
    const double c = std::cos(omega_tau0), s = std::sin(omega_tau0);
    const double sp = std::sin(theta1 + theta2), sm = std::sin(theta1 - theta2);
    return f * f * (sp * sp * c * c + sm * sm * s * s);
}

// Omega = 2 pi c (1/lambda - 1/lambda0).
inline double wavelength_to_offset(double lambda, double lambda0) {
    if (!(lambda > 0.0) || !(lambda0 > 0.0))
        throw std::domain_error("wavelength_to_offset: wavelength must be > 0");
    const double two_pi_c = 2.0 * constants::pi * constants::speed_of_light;
    return two_pi_c * (1.0 / lambda - 1.0 / lambda0);
}

inline double offset_to_wavelength(double omega, double lambda0) {
    if (!(lambda0 > 0.0))
        throw std::domain_error("offset_to_wavelength: lambda0 must be > 0");
    const double two_pi_c = 2.0 * constants::pi * constants::speed_of_light;
    const double inv = 1.0 / lambda0 + omega / two_pi_c;
    if (!(inv > 0.0))
        throw std::domain_error("offset_to_wavelength: offset beyond zero frequency");
    return 1.0 / inv;
}

enum class FilterShape { rectangular, gaussian };

// Monochromator / interference-filter passband in the wavelength domain.
struct SpectralFilter {
    double center_lambda = 702e-9;  // m
    double fwhm_lambda = 0.8e-9;    // m
    FilterShape shape = FilterShape::rectangular;

    void validate() const {
        if (!(fwhm_lambda > 0.0))
            throw std::invalid_argument("SpectralFilter: fwhm must be > 0");
        if (!(center_lambda > fwhm_lambda / 2.0))
            throw std::invalid_argument("SpectralFilter: passband reaches zero wavelength");
    }

    double transmission(double lambda) const {
        const double d = lambda - center_lambda;
        if (shape == FilterShape::rectangular)
            return std::abs(d) <= fwhm_lambda / 2.0 ? 1.0 : 0.0;
        const double ln2 = 0.6931471805599453;
        return std::exp(-4.0 * ln2 * d * d / (fwhm_lambda * fwhm_lambda));
    }
};

namespace detail {

// Trapezoid integral of rate(Omega) * T(lambda(Omega)) over [lo, hi],
// with exact linear clipping at the interval edges.
inline double band_integral(const BiphotonAmplitude& state, double theta1, double theta2,
                            double lo, double hi, const SpectralFilter* filter,
                            double center_lambda) {
    const FrequencyGrid& g = state.grid();
    auto rate_at = [&](double w) {
        double r = std::norm(analyzer_amplitude(state.at(w), theta1, theta2));
        if (filter && filter->shape == FilterShape::gaussian) {
            SpectralFilter moved = *filter;
            moved.center_lambda = center_lambda;
            r *= moved.transmission(offset_to_wavelength(w, state.lambda0()));
        }
        return r;
    };
    if (hi <= lo) return 0.0;
    double total = 0.0;
    int k0 = static_cast<int>(std::ceil((lo - g.omega_min()) / g.step()));
    int k1 = static_cast<int>(std::floor((hi - g.omega_min()) / g.step()));
    if (k0 < 0) k0 = 0;
    if (k1 > g.size() - 1) k1 = g.size() - 1;
    if (k0 > k1) return 0.5 * (hi - lo) * (rate_at(lo) + rate_at(hi));
    // edge slivers
    if (g.omega(k0) > lo)
        total += 0.5 * (g.omega(k0) - lo) * (rate_at(lo) + rate_at(g.omega(k0)));
    if (hi > g.omega(k1))
        total += 0.5 * (hi - g.omega(k1)) * (rate_at(g.omega(k1)) + rate_at(hi));
    for (int k = k0; k < k1; ++k)
        total += 0.5 * g.step() * (rate_at(g.omega(k)) + rate_at(g.omega(k + 1)));
    return total;
}

inline CoincidenceCurve coincidence_spectrum_raw(const BiphotonAmplitude& state,
                                                 double theta1, double theta2,
                                                 const std::optional<SpectralFilter>& filter) {
    const FrequencyGrid& g = state.grid();
    CoincidenceCurve c;
    c.kind = Abscissa::lambda;

    // Sweep in descending Omega so the wavelength abscissa ascends.
    for (int k = g.size() - 1; k >= 0; --k) {
        const double w = g.omega(k);
        const double lam = offset_to_wavelength(w, state.lambda0());
        double r;
        if (!filter) {
            r = std::norm(analyzer_amplitude(state.sample(k), theta1, theta2));
        } else {
            // passband edges in the offset domain; wavelength grows as offset
            // falls. Gaussian tails are truncated at 1.5 FWHM (0.2% level).
            const double half = filter->shape == FilterShape::rectangular
                                    ? 0.5 * filter->fwhm_lambda
                                    : 1.5 * filter->fwhm_lambda;
            const double lo = wavelength_to_offset(lam + half, state.lambda0());
            const double hi = wavelength_to_offset(lam - half, state.lambda0());
            if (lo < g.omega_min() || hi > g.omega_max()) continue;  // passband clipped
            r = band_integral(state, theta1, theta2, lo, hi,
                              filter->shape == FilterShape::gaussian ? &*filter : nullptr, lam);
        }
        c.x.push_back(lam);
        c.rate.push_back(r);
    }
    if (c.x.empty())
        throw std::domain_error("coincidence_spectrum: filter passband outside grid");
    return c;
}

}  // namespace detail

// Monochromator-swept coincidence spectrum: the analyzer rate convolved with
// the filter passband at every sweep position inside the grid, reported
// against the selected wavelength and peak-normalized. Without a filter the
// per-offset rate itself is returned (ideal monochromator).
inline CoincidenceCurve coincidence_spectrum(const BiphotonAmplitude& state, double theta1,
                                             double theta2,
                                             const std::optional<SpectralFilter>& filter = {}) {
    if (filter) filter->validate();
    CoincidenceCurve c = detail::coincidence_spectrum_raw(state, theta1, theta2, filter);
    normalize_family({&c});
    return c;
}

// Coincidence rate versus the second analyzer angle at a fixed offset.
inline CoincidenceCurve polarization_fringe(const BiphotonAmplitude& state, double theta1_fixed,
                                            const std::vector<double>& theta2_sweep,
                                            double omega) {
    CoincidenceCurve c;
    c.kind = Abscissa::theta;
    for (double t2 : theta2_sweep) {
        c.x.push_back(t2);
        c.rate.push_back(coincidence_projection(state, theta1_fixed, t2, omega));
    }
    c.normalization = "source Omega=0 rate at (45,45) = 1";
    return c;
}

// (max - min) / (max + min); empty-of-signal curves have no visibility.
inline std::optional<double> visibility(const CoincidenceCurve& curve) {
    if (curve.rate.size() < 2)
        throw std::invalid_argument("visibility: need at least 2 samples");
    const double hi = curve.max_rate(), lo = curve.min_rate();
    if (hi + lo <= 0.0) return std::nullopt;
    return (hi - lo) / (hi + lo);
}

// Spectra for several analyzer pairs under one normalization constant, so
// the curves keep their relative heights and crossing points.
inline std::vector<CoincidenceCurve> coincidence_spectrum_family(
    const BiphotonAmplitude& state, const std::vector<std::pair<double, double>>& analyzer_pairs,
    const std::optional<SpectralFilter>& filter = {}) {
    if (filter) filter->validate();
    std::vector<CoincidenceCurve> family;
    family.reserve(analyzer_pairs.size());
    for (const auto& [t1, t2] : analyzer_pairs) {
        CoincidenceCurve c = detail::coincidence_spectrum_raw(state, t1, t2, filter);
        c.label = "theta1=" + fmt_g9(t1 * 180.0 / constants::pi) +
                  "_theta2=" + fmt_g9(t2 * 180.0 / constants::pi);
        family.push_back(std::move(c));
    }
    std::vector<CoincidenceCurve*> ptrs;
    for (auto& c : family) ptrs.push_back(&c);
    normalize_family(ptrs);
    return family;
}

// One spectrum per half-wave-plate angle applied in the common path before
// the beamsplitter; the whole family shares one normalization constant, so
// the curves keep their crossing points (the antisymmetric-state wavelengths).
inline std::vector<CoincidenceCurve> hwp_scan_family(const BiphotonAmplitude& state,
                                                     const std::vector<double>& alphas,
                                                     double theta1, double theta2,
                                                     const std::optional<SpectralFilter>& filter = {}) {
    if (filter) filter->validate();
    std::vector<CoincidenceCurve> family;
    family.reserve(alphas.size());
    for (double alpha : alphas) {
        const BiphotonAmplitude rotated = apply_common_path(state, hwp(alpha));
        CoincidenceCurve c = detail::coincidence_spectrum_raw(rotated, theta1, theta2, filter);
        c.label = "hwp_deg=" + fmt_g9(alpha * 180.0 / constants::pi);
        family.push_back(std::move(c));
    }
    std::vector<CoincidenceCurve*> ptrs;
    for (auto& c : family) ptrs.push_back(&c);
    normalize_family(ptrs);
    return family;
}

}  // namespace spdc
