// Event-level stochastic simulation: photon pairs drawn from the spectral
// density, routed through the beamsplitter and analyzers, detected with
// configurable imperfections, and histogrammed TAC/MCA style.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spdc/analytics.hpp"
#include "spdc/errors.hpp"
#include "spdc/fibre.hpp"
#include "spdc/rng.hpp"
#include "spdc/state.hpp"

namespace spdc {

struct DetectionParams {
    double eta1 = 1.0;                  // detection efficiency, port 1
    double eta2 = 1.0;                  // detection efficiency, port 2
    double jitter_sigma = 0.0;          // s, per-detector Gaussian timing jitter
    double accidental_fraction = 0.0;   // accidental / true-coincidence ratio
    double coincidence_window = 10e-9;  // s, TAC half-range (accidental delays fill it)

    void validate() const {
        if (!(eta1 > 0.0 && eta1 <= 1.0 && eta2 > 0.0 && eta2 <= 1.0))
            throw std::invalid_argument("DetectionParams: efficiencies must be in (0,1]");
        if (jitter_sigma < 0.0 || accidental_fraction < 0.0)
            throw std::invalid_argument("DetectionParams: negative parameter");
        if (!(coincidence_window > 0.0))
            throw std::invalid_argument("DetectionParams: coincidence_window must be > 0");
    }
};

// One registered pair. pass flags combine analyzer transmission with
// detection success; the latent omega is for diagnostics only and must not
// feed estimators.
struct EventRecord {
    double t1 = 0.0;  // s, detection timestamp at port 1
    double t2 = 0.0;  // s, detection timestamp at port 2
    bool pass1 = false;
    bool pass2 = false;
    double omega = 0.0;  // rad/s, latent truth
    bool accidental = false;
};

struct McSetup {
    // Glan prism angles (radians). Absent = prisms removed: pass flags
    // reduce to detection success.
    std::optional<std::pair<double, double>> analyzers;
    std::optional<SpectralFilter> filter;   // restricts the sampled offsets
    std::optional<FibreParams> fibre;       // maps offsets onto arrival-time delays
    std::optional<double> fixed_omega;      // delta monochromator: condition on one offset
};

struct MCAHistogram {
    double bin_width = 0.0;  // s
    double origin = 0.0;     // s, left edge of bin 0
    std::vector<std::uint64_t> counts;

    double bin_center(std::size_t i) const {
        return origin + (static_cast<double>(i) + 0.5) * bin_width;
    }
    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

namespace detail {

// Piecewise-linear inverse-CDF sampler over the grid density.
class OffsetSampler {
public:
    OffsetSampler(const BiphotonAmplitude& state, const std::optional<SpectralFilter>& filter) {
        const FrequencyGrid& g = state.grid();
        dens_.resize(static_cast<std::size_t>(g.size()));
        for (int k = 0; k < g.size(); ++k) {
            double d = state.density(k);
            if (filter)
                d *= filter->transmission(offset_to_wavelength(g.omega(k), state.lambda0()));
            dens_[static_cast<std::size_t>(k)] = d;
        }
        cum_.resize(dens_.size());
        double run = 0.0;
        for (std::size_t k = 0; k + 1 < dens_.size(); ++k) {
            run += 0.5 * g.step() * (dens_[k] + dens_[k + 1]);
            cum_[k] = run;
        }
        total_ = run;
        if (!(total_ > 0.0))
            throw std::runtime_error("sample_pairs: spectral density vanishes in the sampled band");
        omega_min_ = g.omega_min();
        step_ = g.step();
    }

    double draw(SplitMix64& rng) const {
        const double target = rng.uniform01() * total_;
        // first cell whose cumulative mass exceeds target
        std::size_t lo = 0, hi = cum_.size() - 2;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cum_[mid] <= target) lo = mid + 1; else hi = mid;
        }
        const double prev = lo == 0 ? 0.0 : cum_[lo - 1];
        const double u = target - prev;  // mass into this cell
        const double f0 = dens_[lo], f1 = dens_[lo + 1];
        const double slope = (f1 - f0) / step_;
        double t;  // position within the cell, [0, step]
        if (std::abs(f1 - f0) < 1e-12 * (f0 + f1 + 1e-300)) {
            t = f0 > 0.0 ? u / f0 : 0.5 * step_;
        } else {
            // invert f0*t + slope*t^2/2 = u
            const double disc = f0 * f0 + 2.0 * slope * u;
            t = (std::sqrt(std::max(disc, 0.0)) - f0) / slope;
        }
        if (t < 0.0) t = 0.0;
        if (t > step_) t = step_;
        return omega_min_ + static_cast<double>(lo) * step_ + t;
    }

private:
    std::vector<double> dens_;
    std::vector<double> cum_;  // cumulative mass up to the end of cell k
    double total_ = 0.0;
    double omega_min_ = 0.0;
    double step_ = 0.0;
};

}  // namespace detail

// Draws n pump decays and registers the split, analyzed and detected pairs.
// Deterministic for a fixed (seed, configuration): work is cut into fixed
// 2^16-pair chunks with per-chunk sub-streams SplitMix64::for_chunk(seed, i),
// merged in chunk order.
inline std::vector<EventRecord> sample_pairs(const BiphotonAmplitude& state, std::uint64_t n,
                                             const McSetup& setup, const DetectionParams& det,
                                             std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_pairs: n must be >= 1");
    det.validate();
    if (setup.fibre) setup.fibre->validate();
    if (setup.filter) setup.filter->validate();
    if (setup.fixed_omega && !state.grid().contains(*setup.fixed_omega))
        throw std::out_of_range("sample_pairs: fixed_omega outside grid");

    std::optional<detail::OffsetSampler> sampler;
    if (!setup.fixed_omega) sampler.emplace(state, setup.filter);

    const double time_scale = setup.fibre ? setup.fibre->time_scale() : 0.0;
    const double p_accidental =
        det.accidental_fraction * det.eta1 * det.eta2 / 2.0;

    double c1 = 0.0, s1 = 0.0, c2 = 0.0, s2 = 0.0;
    if (setup.analyzers) {
        c1 = std::cos(setup.analyzers->first);
        s1 = std::sin(setup.analyzers->first);
        c2 = std::cos(setup.analyzers->second);
        s2 = std::sin(setup.analyzers->second);
    }

    std::vector<EventRecord> events;
    events.reserve(static_cast<std::size_t>(n / 2 + 16));

    constexpr std::uint64_t chunk_size = 1 << 16;
    const std::uint64_t n_chunks = (n + chunk_size - 1) / chunk_size;
    for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
        SplitMix64 rng = SplitMix64::for_chunk(seed, chunk);
        const std::uint64_t count = std::min(chunk_size, n - chunk * chunk_size);
        for (std::uint64_t i = 0; i < count; ++i) {
            if (!rng.bernoulli(0.5)) continue;  // both photons left by one port

            const double omega = setup.fixed_omega ? *setup.fixed_omega : sampler->draw(rng);

            bool glan1 = true, glan2 = true;
            if (setup.analyzers) {
                const Mat2c a = state.at(omega);
                const double density = a.norm_sq();
                if (density < 1e-300)
                    throw std::runtime_error(
                        "sample_pairs: spectral density underflow at omega = " +
                        std::to_string(omega));
                // joint analyzer outcomes from the normalized two-photon state
                const cplx a_tt = c1 * (a.hh * c2 + a.hv * s2) + s1 * (a.vh * c2 + a.vv * s2);
                const cplx a_tf = c1 * (-a.hh * s2 + a.hv * c2) + s1 * (-a.vh * s2 + a.vv * c2);
                const cplx a_ft = -s1 * (a.hh * c2 + a.hv * s2) + c1 * (a.vh * c2 + a.vv * s2);
                const cplx a_ff = -s1 * (-a.hh * s2 + a.hv * c2) + c1 * (-a.vh * s2 + a.vv * c2);
                const double p_tt = std::norm(a_tt) / density;
                const double p_tf = std::norm(a_tf) / density;
                const double p_ft = std::norm(a_ft) / density;
                const double p_ff = std::norm(a_ff) / density;
                const double total = p_tt + p_tf + p_ft + p_ff;
                if (!(total > 0.999999) || !(total < 1.000001))
                    throw std::runtime_error("sample_pairs: invalid joint outcome probabilities");
                const double u = rng.uniform01() * total;
                glan1 = u < p_tt + p_tf;
                glan2 = u < p_tt || (u >= p_tt + p_tf && u < p_tt + p_tf + p_ft);
            }

            EventRecord e;
            e.omega = omega;
            e.pass1 = glan1 && rng.bernoulli(det.eta1);
            e.pass2 = glan2 && rng.bernoulli(det.eta2);
            const double delay = setup.fibre ? time_scale * omega : 0.0;
            e.t1 = det.jitter_sigma > 0.0 ? det.jitter_sigma * rng.gaussian() : 0.0;
            e.t2 = delay + (det.jitter_sigma > 0.0 ? det.jitter_sigma * rng.gaussian() : 0.0);
            events.push_back(e);

            // cw accidentals: uniform in delay over the TAC range, at a rate
            // anchored to the Bell-fringe maximum (see visibility algebra)
            if (p_accidental > 0.0 && rng.bernoulli(p_accidental)) {
                EventRecord acc;
                acc.pass1 = acc.pass2 = true;
                acc.accidental = true;
                acc.t1 = 0.0;
                acc.t2 = rng.uniform(-det.coincidence_window, det.coincidence_window);
                events.push_back(acc);
            }
        }
    }
    return events;
}

inline bool is_coincidence(const EventRecord& e) { return e.pass1 && e.pass2; }

inline std::uint64_t count_coincidences(const std::vector<EventRecord>& events) {
    std::uint64_t c = 0;
    for (const auto& e : events) c += is_coincidence(e);
    return c;
}

// Histogram of t2 - t1 over passing coincidences with |t2 - t1| <= range.
inline MCAHistogram tac_histogram(const std::vector<EventRecord>& events, double bin_width,
                                  double range) {
    if (!(bin_width > 0.0) || !(range > 0.0))
        throw std::invalid_argument("tac_histogram: bin_width and range must be > 0");
    MCAHistogram h;
    h.bin_width = bin_width;
    h.origin = -range;
    const auto n_bins = static_cast<std::size_t>(std::ceil(2.0 * range / bin_width - 1e-9));
    h.counts.assign(n_bins, 0);
    for (const auto& e : events) {
        if (!is_coincidence(e)) continue;
        const double d = e.t2 - e.t1;
        if (d < -range || d > range) continue;
        auto idx = static_cast<std::size_t>((d - h.origin) / bin_width);
        if (idx >= n_bins) idx = n_bins - 1;  // right edge
        ++h.counts[idx];
    }
    return h;
}

// Keeps events whose delay lies within width/2 of tau_center.
inline std::vector<EventRecord> post_select_window(const std::vector<EventRecord>& events,
                                                   double tau_center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("post_select_window: width must be > 0");
    std::vector<EventRecord> kept;
    for (const auto& e : events)
        if (std::abs((e.t2 - e.t1) - tau_center) <= width / 2.0) kept.push_back(e);
    return kept;
}

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

namespace detail {
inline void require_statistics(const std::vector<EventRecord>& events) {
    if (events.size() < 100)
        throw low_statistics_error("estimator needs >= 100 events per setting, got " +
                                   std::to_string(events.size()));
}
}  // namespace detail

// Fringe visibility from coincidence counts across analyzer settings
// (one event list per setting). Poisson errors propagated through
// (max - min)/(max + min).
inline Estimate estimate_visibility(const std::vector<std::vector<EventRecord>>& per_setting) {
    if (per_setting.size() < 2)
        throw std::invalid_argument("estimate_visibility: need >= 2 settings");
    double cmax = -1.0, cmin = std::numeric_limits<double>::max();
    for (const auto& events : per_setting) {
        detail::require_statistics(events);
        const double c = static_cast<double>(count_coincidences(events));
        cmax = std::max(cmax, c);
        cmin = std::min(cmin, c);
    }
    Estimate est;
    const double sum = cmax + cmin;
    if (sum <= 0.0) {
        est.value = 0.0;
        est.std_error = 0.0;
        return est;
    }
    est.value = (cmax - cmin) / sum;
    est.std_error = 2.0 * std::sqrt(cmax * cmin / sum) / sum;
    return est;
}

// Antisymmetric-state share from the (45,45) vs (45,-45) coincidence counts:
// crossed / (parallel + crossed), binomial standard error.
inline Estimate estimate_singlet_fraction(const std::vector<EventRecord>& parallel_setting,
                                          const std::vector<EventRecord>& crossed_setting) {
    detail::require_statistics(parallel_setting);
    detail::require_statistics(crossed_setting);
    const double a = static_cast<double>(count_coincidences(parallel_setting));
    const double b = static_cast<double>(count_coincidences(crossed_setting));
    if (a + b < 1.0)
        throw low_statistics_error("estimate_singlet_fraction: no coincidences");
    Estimate est;
    est.value = b / (a + b);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / (a + b));
    return est;
}

}  // namespace spdc
