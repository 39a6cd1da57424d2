// Flat key-value scenario configuration: `section.key = value` lines,
// '#' comments, mandatory unit suffixes in key names, unknown keys rejected.
// Angles are degrees and times femtoseconds/picoseconds/nanoseconds at this
// boundary; everything is converted to SI on materialization.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spdc/analytics.hpp"
#include "spdc/csv.hpp"
#include "spdc/errors.hpp"
#include "spdc/fibre.hpp"
#include "spdc/jones.hpp"
#include "spdc/montecarlo.hpp"
#include "spdc/state.hpp"

namespace spdc {

struct ScenarioConfig {
    struct Source {
        double lambda0_nm = 702.0;
        std::optional<double> tau0_fs;       // exactly one of tau0 or (D, L)
        std::optional<double> d_fs_per_mm;
        std::optional<double> l_mm;
        bool operator==(const Source&) const = default;
    } source;

    struct Grid {
        int n_points = 2049;
        double half_extent_pi_units = 1.5;
        bool operator==(const Grid&) const = default;
    } grid;

    struct Element {
        enum class Kind { hwp, qwp, compensator };
        Kind kind = Kind::hwp;
        double value = 0.0;  // angle_deg for plates, tau_c_fs for the compensator
        bool operator==(const Element&) const = default;
    };
    std::vector<Element> elements;

    struct Analyzers {
        double theta1_deg = 45.0;
        double theta2_deg = 45.0;
        bool operator==(const Analyzers&) const = default;
    } analyzers;

    struct Filter {
        double center_nm = 702.0;
        double fwhm_nm = 0.8;
        FilterShape shape = FilterShape::rectangular;
        bool operator==(const Filter&) const = default;
    } filter;

    struct Fibre {
        bool enabled = false;
        double k2_s2_per_cm = 3.2e-28;
        double z_km = 1.0;
        bool operator==(const Fibre& o) const {
            if (enabled != o.enabled) return false;
            if (!enabled) return true;  // disabled sections compare by flag only
            return k2_s2_per_cm == o.k2_s2_per_cm && z_km == o.z_km;
        }
    } fibre;

    struct Mc {
        bool enabled = false;
        std::uint64_t n_pairs = 1000000;
        std::uint64_t seed = 1;
        double eta1 = 1.0;
        double eta2 = 1.0;
        double jitter_sigma_ps = 0.0;
        double accidental_fraction = 0.0;
        double coincidence_window_ns = 10.0;
        bool operator==(const Mc& o) const {
            if (enabled != o.enabled) return false;
            if (!enabled) return true;
            return n_pairs == o.n_pairs && seed == o.seed && eta1 == o.eta1 && eta2 == o.eta2 &&
                   jitter_sigma_ps == o.jitter_sigma_ps &&
                   accidental_fraction == o.accidental_fraction &&
                   coincidence_window_ns == o.coincidence_window_ns;
        }
    } mc;

    bool operator==(const ScenarioConfig&) const = default;

    // --- materialization ---

    double tau0_fs() const {
        if (source.tau0_fs) return *source.tau0_fs;
        if (source.d_fs_per_mm && source.l_mm)
            return *source.d_fs_per_mm * *source.l_mm / 2.0;  // tau0 = D L / 2
        return 63.0;
    }
    SourceParams source_params() const {
        return SourceParams::from_tau0(source.lambda0_nm * 1e-9, tau0_fs() * 1e-15);
    }
    FrequencyGrid frequency_grid() const {
        return FrequencyGrid::make(grid.n_points, grid.half_extent_pi_units * constants::pi,
                                   tau0_fs() * 1e-15);
    }
    SpectralFilter spectral_filter() const {
        return {filter.center_nm * 1e-9, filter.fwhm_nm * 1e-9, filter.shape};
    }
    FibreParams fibre_params() const {
        return {fibre.k2_s2_per_cm * 1e2, fibre.z_km * 1e3};  // s^2/cm -> s^2/m, km -> m
    }
    DetectionParams detection_params() const {
        DetectionParams d;
        d.eta1 = mc.eta1;
        d.eta2 = mc.eta2;
        d.jitter_sigma = mc.jitter_sigma_ps * 1e-12;
        d.accidental_fraction = mc.accidental_fraction;
        d.coincidence_window = mc.coincidence_window_ns * 1e-9;
        return d;
    }
    double theta1() const { return analyzers.theta1_deg * constants::pi / 180.0; }
    double theta2() const { return analyzers.theta2_deg * constants::pi / 180.0; }

    BiphotonAmplitude make_state() const {
        return make_spdc_state(source_params(), frequency_grid(), /*normalize=*/true);
    }

    // Element chain in configuration order.
    BiphotonAmplitude apply_elements(const BiphotonAmplitude& state) const {
        BiphotonAmplitude out = state;
        for (const auto& el : elements) {
            switch (el.kind) {
                case Element::Kind::hwp:
                    out = apply_common_path(out, hwp(el.value * constants::pi / 180.0));
                    break;
                case Element::Kind::qwp:
                    out = apply_common_path(out, qwp(el.value * constants::pi / 180.0));
                    break;
                case Element::Kind::compensator:
                    out = compensator(out, el.value * 1e-15);
                    break;
            }
        }
        return out;
    }

    // Same chain applied to a closed-form amplitude at one offset (used for
    // exact pointwise summaries that must not see grid interpolation).
    Mat2c apply_elements_exact(const Mat2c& amp, double omega) const {
        Mat2c a = amp;
        for (const auto& el : elements) {
            switch (el.kind) {
                case Element::Kind::hwp: {
                    const Mat2c u = hwp(el.value * constants::pi / 180.0).m;
                    a = u * a * u.transpose();
                    break;
                }
                case Element::Kind::qwp: {
                    const Mat2c u = qwp(el.value * constants::pi / 180.0).m;
                    a = u * a * u.transpose();
                    break;
                }
                case Element::Kind::compensator: {
                    const double phi = omega * el.value * 1e-15;
                    const cplx phase(std::cos(phi), std::sin(phi));
                    a.hv *= phase;
                    a.vh *= std::conj(phase);
                    break;
                }
            }
        }
        return a;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, int line, const std::string& key) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw config_error("expected a number, got '" + v + "'", line, key);
    }
    if (pos != v.size()) throw config_error("trailing characters after number '" + v + "'", line, key);
    return d;
}

inline std::uint64_t parse_u64(const std::string& v, int line, const std::string& key) {
    std::size_t pos = 0;
    unsigned long long u = 0;
    try {
        u = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw config_error("expected a non-negative integer, got '" + v + "'", line, key);
    }
    if (pos != v.size()) throw config_error("trailing characters after integer '" + v + "'", line, key);
    return u;
}

inline bool parse_bool(const std::string& v, int line, const std::string& key) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw config_error("expected 0/1, got '" + v + "'", line, key);
}

}  // namespace detail

// Parses the flat key-value format. Unknown or duplicate keys, malformed
// values, inconsistent source specification and gaps in the element list are
// reported with the offending line and key.
inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::map<std::string, int> seen;          // key -> line
    std::map<int, ScenarioConfig::Element> elements;  // index -> element
    bool fibre_touched = false, mc_touched = false;
    bool fibre_enabled_explicit = false, mc_enabled_explicit = false;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("expected 'key = value'", line_no);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("empty key", line_no);
        if (value.empty()) throw config_error("empty value", line_no, key);
        if (auto [it, inserted] = seen.emplace(key, line_no); !inserted)
            throw config_error("duplicate key (first on line " + std::to_string(it->second) + ")",
                               line_no, key);

        if (key == "source.lambda0_nm") cfg.source.lambda0_nm = detail::parse_double(value, line_no, key);
        else if (key == "source.tau0_fs") cfg.source.tau0_fs = detail::parse_double(value, line_no, key);
        else if (key == "source.D_fs_per_mm") cfg.source.d_fs_per_mm = detail::parse_double(value, line_no, key);
        else if (key == "source.L_mm") cfg.source.l_mm = detail::parse_double(value, line_no, key);
        else if (key == "grid.n_points") cfg.grid.n_points = static_cast<int>(detail::parse_u64(value, line_no, key));
        else if (key == "grid.half_extent_pi_units") cfg.grid.half_extent_pi_units = detail::parse_double(value, line_no, key);
        else if (key.rfind("elements.", 0) == 0) {
            const std::string idx_str = key.substr(9);
            std::size_t pos = 0;
            int idx = 0;
            try { idx = std::stoi(idx_str, &pos); } catch (const std::exception&) { pos = 0; }
            if (pos != idx_str.size() || idx < 1)
                throw config_error("element keys are elements.1, elements.2, ...", line_no, key);
            std::istringstream vs(value);
            std::string kind_str;
            double num = 0.0;
            if (!(vs >> kind_str >> num) || !(vs >> std::ws).eof())
                throw config_error("expected '<hwp|qwp|compensator> <number>'", line_no, key);
            ScenarioConfig::Element el;
            if (kind_str == "hwp") el.kind = ScenarioConfig::Element::Kind::hwp;
            else if (kind_str == "qwp") el.kind = ScenarioConfig::Element::Kind::qwp;
            else if (kind_str == "compensator") el.kind = ScenarioConfig::Element::Kind::compensator;
            else throw config_error("unknown element kind '" + kind_str + "'", line_no, key);
            el.value = num;
            elements[idx] = el;
        }
        else if (key == "analyzers.theta1_deg") cfg.analyzers.theta1_deg = detail::parse_double(value, line_no, key);
        else if (key == "analyzers.theta2_deg") cfg.analyzers.theta2_deg = detail::parse_double(value, line_no, key);
        else if (key == "filter.center_nm") cfg.filter.center_nm = detail::parse_double(value, line_no, key);
        else if (key == "filter.fwhm_nm") cfg.filter.fwhm_nm = detail::parse_double(value, line_no, key);
        else if (key == "filter.shape") {
            if (value == "rectangular") cfg.filter.shape = FilterShape::rectangular;
            else if (value == "gaussian") cfg.filter.shape = FilterShape::gaussian;
            else throw config_error("filter.shape must be rectangular|gaussian", line_no, key);
        }
        else if (key == "fibre.enabled") { cfg.fibre.enabled = detail::parse_bool(value, line_no, key); fibre_touched = true; fibre_enabled_explicit = true; }
        else if (key == "fibre.k2_s2_per_cm") { cfg.fibre.k2_s2_per_cm = detail::parse_double(value, line_no, key); fibre_touched = true; }
        else if (key == "fibre.z_km") { cfg.fibre.z_km = detail::parse_double(value, line_no, key); fibre_touched = true; }
        else if (key == "mc.enabled") { cfg.mc.enabled = detail::parse_bool(value, line_no, key); mc_touched = true; mc_enabled_explicit = true; }
        else if (key == "mc.n_pairs") { cfg.mc.n_pairs = detail::parse_u64(value, line_no, key); mc_touched = true; }
        else if (key == "mc.seed") { cfg.mc.seed = detail::parse_u64(value, line_no, key); mc_touched = true; }
        else if (key == "mc.eta1") { cfg.mc.eta1 = detail::parse_double(value, line_no, key); mc_touched = true; }
        else if (key == "mc.eta2") { cfg.mc.eta2 = detail::parse_double(value, line_no, key); mc_touched = true; }
        else if (key == "mc.jitter_sigma_ps") { cfg.mc.jitter_sigma_ps = detail::parse_double(value, line_no, key); mc_touched = true; }
        else if (key == "mc.accidental_fraction") { cfg.mc.accidental_fraction = detail::parse_double(value, line_no, key); mc_touched = true; }
        else if (key == "mc.coincidence_window_ns") { cfg.mc.coincidence_window_ns = detail::parse_double(value, line_no, key); mc_touched = true; }
        else throw config_error("unknown key", line_no, key);
    }

    // sections become enabled when any of their keys appear
    if (fibre_touched && !fibre_enabled_explicit) cfg.fibre.enabled = true;
    if (mc_touched && !mc_enabled_explicit) cfg.mc.enabled = true;

    // exactly one way to specify the e-o delay; absent -> documented default
    const bool has_tau = cfg.source.tau0_fs.has_value();
    const bool has_d = cfg.source.d_fs_per_mm.has_value();
    const bool has_l = cfg.source.l_mm.has_value();
    if (has_tau && (has_d || has_l))
        throw config_error("give either source.tau0_fs or source.D_fs_per_mm + source.L_mm, not both");
    if (has_d != has_l)
        throw config_error("source.D_fs_per_mm and source.L_mm must be given together");
    if (!has_tau && !has_d) cfg.source.tau0_fs = 63.0;

    // element indices must be 1..k with no gaps
    int expect = 1;
    for (const auto& [idx, el] : elements) {
        if (idx != expect)
            throw config_error("element indices must be consecutive from 1; missing elements." +
                               std::to_string(expect));
        cfg.elements.push_back(el);
        ++expect;
    }

    if (cfg.grid.n_points < 3 || cfg.grid.n_points % 2 == 0)
        throw config_error("grid.n_points must be odd and >= 3");
    if (!(cfg.grid.half_extent_pi_units > 0.0))
        throw config_error("grid.half_extent_pi_units must be > 0");
    if (!(cfg.source.lambda0_nm > 0.0)) throw config_error("source.lambda0_nm must be > 0");
    if (!(cfg.tau0_fs() > 0.0)) throw config_error("source delay must be > 0");

    return cfg;
}

inline ScenarioConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// Canonical echo; parse_config(echo(cfg)) reproduces an equivalent config.
inline std::string echo_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "source.lambda0_nm = " << fmt_g9(cfg.source.lambda0_nm) << '\n';
    if (cfg.source.d_fs_per_mm && cfg.source.l_mm) {
        os << "source.D_fs_per_mm = " << fmt_g9(*cfg.source.d_fs_per_mm) << '\n';
        os << "source.L_mm = " << fmt_g9(*cfg.source.l_mm) << '\n';
    } else {
        os << "source.tau0_fs = " << fmt_g9(cfg.tau0_fs()) << '\n';
    }
    os << "grid.n_points = " << cfg.grid.n_points << '\n';
    os << "grid.half_extent_pi_units = " << fmt_g9(cfg.grid.half_extent_pi_units) << '\n';
    for (std::size_t i = 0; i < cfg.elements.size(); ++i) {
        const auto& el = cfg.elements[i];
        const char* kind = el.kind == ScenarioConfig::Element::Kind::hwp ? "hwp"
                           : el.kind == ScenarioConfig::Element::Kind::qwp ? "qwp"
                                                                           : "compensator";
        os << "elements." << (i + 1) << " = " << kind << ' ' << fmt_g9(el.value) << '\n';
    }
    os << "analyzers.theta1_deg = " << fmt_g9(cfg.analyzers.theta1_deg) << '\n';
    os << "analyzers.theta2_deg = " << fmt_g9(cfg.analyzers.theta2_deg) << '\n';
    os << "filter.center_nm = " << fmt_g9(cfg.filter.center_nm) << '\n';
    os << "filter.fwhm_nm = " << fmt_g9(cfg.filter.fwhm_nm) << '\n';
    os << "filter.shape = "
       << (cfg.filter.shape == FilterShape::rectangular ? "rectangular" : "gaussian") << '\n';
    if (cfg.fibre.enabled) {
        os << "fibre.enabled = 1\n";
        os << "fibre.k2_s2_per_cm = " << fmt_g9(cfg.fibre.k2_s2_per_cm) << '\n';
        os << "fibre.z_km = " << fmt_g9(cfg.fibre.z_km) << '\n';
    }
    if (cfg.mc.enabled) {
        os << "mc.enabled = 1\n";
        os << "mc.n_pairs = " << fmt_u64(cfg.mc.n_pairs) << '\n';
        os << "mc.seed = " << fmt_u64(cfg.mc.seed) << '\n';
        os << "mc.eta1 = " << fmt_g9(cfg.mc.eta1) << '\n';
        os << "mc.eta2 = " << fmt_g9(cfg.mc.eta2) << '\n';
        os << "mc.jitter_sigma_ps = " << fmt_g9(cfg.mc.jitter_sigma_ps) << '\n';
        os << "mc.accidental_fraction = " << fmt_g9(cfg.mc.accidental_fraction) << '\n';
        os << "mc.coincidence_window_ns = " << fmt_g9(cfg.mc.coincidence_window_ns) << '\n';
    }
    return os.str();
}

}  // namespace spdc
