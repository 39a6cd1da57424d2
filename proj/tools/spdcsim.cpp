// spdcsim: command-line front end emitting CSV plot data for the analytic
// and Monte Carlo scenarios.
//
// Exit codes: 0 success, 2 usage/config error, 3 domain/numeric error,
// 4 insufficient statistics.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spdc/spdc.hpp"

namespace {

constexpr double kDegToRad = spdc::constants::pi / 180.0;

struct Options {
    std::string config_path;
    std::string out_path;
    std::string dump_state_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> theta_pairs;  // spectrum
    std::vector<double> alphas_deg;        // hwpscan
    std::string mc_mode = "fringe";        // mc
    double bin_ns = 0.1;                   // mc histogram
    std::optional<double> range_ns;        // mc histogram
};

std::pair<double, double> parse_theta_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw spdc::config_error("--thetas expects 'theta1,theta2' in degrees, got '" + s + "'");
    try {
        std::size_t p1 = 0, p2 = 0;
        const double t1 = std::stod(s.substr(0, comma), &p1);
        const double t2 = std::stod(s.substr(comma + 1), &p2);
        if (p1 != comma || p2 != s.size() - comma - 1)
            throw std::invalid_argument("trailing characters");
        return {t1, t2};
    } catch (const spdc::config_error&) {
        throw;
    } catch (const std::exception&) {
        throw spdc::config_error("--thetas expects 'theta1,theta2' in degrees, got '" + s + "'");
    }
}

void emit_metadata(std::ostream& os, const std::string& cmd, const spdc::ScenarioConfig& cfg,
                   const std::vector<std::string>& summary) {
    os << "# spdcsim " << cmd << '\n';
    std::istringstream echo(spdc::echo_config(cfg));
    std::string line;
    while (std::getline(echo, line)) os << "# " << line << '\n';
    for (const auto& s : summary) os << "# " << s << '\n';
}

std::string estimate_line(const std::string& name, const spdc::Estimate& e) {
    return "summary." + name + " = " + spdc::fmt_g9(e.value) + " +- " + spdc::fmt_g9(e.std_error);
}

// Angles of the antisymmetric-state offsets for the configured source.
std::pair<double, double> singlet_offsets(const spdc::ScenarioConfig& cfg) {
    const double tau0 = cfg.tau0_fs() * 1e-15;
    const double omega_s = spdc::constants::pi / (2.0 * tau0);
    return {-omega_s, omega_s};
}

std::vector<std::string> singlet_wavelength_summary(const spdc::ScenarioConfig& cfg) {
    const auto [lo_omega, hi_omega] = singlet_offsets(cfg);
    const double lambda0 = cfg.source.lambda0_nm * 1e-9;
    return {
        "summary.singlet_wavelength_low_nm = " +
            spdc::fmt_g9(spdc::offset_to_wavelength(hi_omega, lambda0) * 1e9),
        "summary.singlet_wavelength_high_nm = " +
            spdc::fmt_g9(spdc::offset_to_wavelength(lo_omega, lambda0) * 1e9),
    };
}

int run_spectrum(const Options& opt, const spdc::ScenarioConfig& cfg, std::ostream& os) {
    const spdc::BiphotonAmplitude state = cfg.apply_elements(cfg.make_state());
    std::vector<std::pair<double, double>> pairs;
    for (const auto& pair_str : opt.theta_pairs) {
        const auto [t1_deg, t2_deg] = parse_theta_pair(pair_str);
        pairs.emplace_back(t1_deg * kDegToRad, t2_deg * kDegToRad);
    }
    const auto curves = spdc::coincidence_spectrum_family(state, pairs, cfg.spectral_filter());
    emit_metadata(os, "spectrum", cfg, singlet_wavelength_summary(cfg));
    spdc::write_curves_csv(os, curves);
    return 0;
}

int run_fringe(const spdc::ScenarioConfig& cfg, std::ostream& os) {
    const spdc::BiphotonAmplitude state = cfg.apply_elements(cfg.make_state());
    const double omega =
        spdc::wavelength_to_offset(cfg.filter.center_nm * 1e-9, cfg.source.lambda0_nm * 1e-9);
    std::vector<double> sweep;
    for (int deg = -90; deg <= 90; ++deg) sweep.push_back(deg * kDegToRad);
    spdc::CoincidenceCurve fringe = spdc::polarization_fringe(state, cfg.theta1(), sweep, omega);
    fringe.label = "fringe_at_" + spdc::fmt_g9(cfg.filter.center_nm) + "nm";
    const auto vis = spdc::visibility(fringe);
    spdc::normalize_family({&fringe});

    std::vector<std::string> summary = singlet_wavelength_summary(cfg);
    summary.push_back("summary.visibility = " + (vis ? spdc::fmt_g9(*vis) : "undefined"));
    emit_metadata(os, "fringe", cfg, summary);
    spdc::write_curves_csv(os, {fringe});
    return 0;
}

int run_hwpscan(const Options& opt, const spdc::ScenarioConfig& cfg, std::ostream& os) {
    const spdc::BiphotonAmplitude state = cfg.apply_elements(cfg.make_state());
    std::vector<double> alphas_rad;
    for (double a : opt.alphas_deg) alphas_rad.push_back(a * kDegToRad);
    std::vector<spdc::CoincidenceCurve> family = spdc::hwp_scan_family(
        state, alphas_rad, cfg.theta1(), cfg.theta2(), cfg.spectral_filter());

    // invariance figure of merit, from closed-form amplitudes at the exact
    // antisymmetric-state offsets (the swept curves carry passband smearing)
    const spdc::SourceParams src = cfg.source_params();
    const auto [lo_omega, hi_omega] = singlet_offsets(cfg);
    double spread = 0.0;
    std::optional<std::pair<double, double>> reference;
    for (double a : alphas_rad) {
        const spdc::Mat2c u = spdc::hwp(a).m;
        auto rate_at = [&](double w) {
            spdc::Mat2c amp = cfg.apply_elements_exact(spdc::source_amplitude_at(src, w), w);
            amp = u * amp * u.transpose();
            return std::norm(spdc::analyzer_amplitude(amp, cfg.theta1(), cfg.theta2()));
        };
        const std::pair<double, double> rates{rate_at(lo_omega), rate_at(hi_omega)};
        if (!reference) reference = rates;
        spread = std::max({spread, std::abs(rates.first - reference->first),
                           std::abs(rates.second - reference->second)});
    }

    std::vector<std::string> summary = singlet_wavelength_summary(cfg);
    summary.push_back("summary.max_spread_at_singlet = " + spdc::fmt_g9(spread));
    emit_metadata(os, "hwpscan", cfg, summary);
    spdc::write_curves_csv(os, family);
    return 0;
}

int run_fibre(const spdc::ScenarioConfig& cfg, std::ostream& os) {
    const spdc::BiphotonAmplitude state = cfg.apply_elements(cfg.make_state());
    const spdc::FibreParams fibre = cfg.fibre_params();
    const double jitter = cfg.mc.enabled ? cfg.detection_params().jitter_sigma : 0.0;
    const spdc::TimeAmplitudeCurve density = spdc::fibre_time_density(state, fibre, jitter);

    spdc::CoincidenceCurve curve;
    curve.kind = spdc::Abscissa::tau;
    curve.x = density.tau;
    curve.rate = density.density;
    curve.label = "time_density";
    spdc::normalize_family({&curve});

    std::vector<std::string> summary = singlet_wavelength_summary(cfg);
    summary.push_back("summary.singlet_delay_ns = " + spdc::fmt_g9(density.singlet_delay * 1e9));
    summary.push_back("note = a 33.5 fs source delay maps the antisymmetric state to " +
                      spdc::fmt_g9(spdc::singlet_delay(fibre, 33.5e-15) * 1e9) + " ns");
    if (density.mirrored) summary.push_back("note = anomalous dispersion: time axis mirrored");
    if (!density.regime_ok)
        summary.push_back("warning = mapped spectral spread is under 10x the detector jitter");
    emit_metadata(os, "fibre", cfg, summary);
    spdc::write_curves_csv(os, {curve});
    return 0;
}

int run_mc(const Options& opt, const spdc::ScenarioConfig& cfg, std::ostream& os) {
    if (!cfg.mc.enabled)
        throw spdc::config_error("mc subcommand needs an mc section in the config");
    const spdc::BiphotonAmplitude state = cfg.apply_elements(cfg.make_state());
    const spdc::DetectionParams det = cfg.detection_params();
    const std::uint64_t seed = opt.seed.value_or(cfg.mc.seed);

    // with the fibre in place the spectral selection happens in the time
    // domain, so the monochromator leaves the beam path
    spdc::McSetup setup;
    setup.analyzers = {{cfg.theta1(), cfg.theta2()}};
    if (cfg.fibre.enabled)
        setup.fibre = cfg.fibre_params();
    else
        setup.filter = cfg.spectral_filter();

    std::vector<std::string> summary;
    summary.push_back("summary.rng = " + std::string(spdc::rng_algorithm_id));
    summary.push_back("summary.seed = " + spdc::fmt_u64(seed));
    if (cfg.fibre.enabled)
        summary.push_back("note = fibre mode: time selection replaces the monochromator");

    std::ostringstream body;
    if (opt.mc_mode == "fringe") {
        // one run per analyzer-2 setting, sub-seeded deterministically
        std::vector<double> theta2_deg;
        for (int d = -90; d <= 90; d += 15) theta2_deg.push_back(d);
        std::vector<std::vector<spdc::EventRecord>> per_setting;
        std::vector<std::uint64_t> counts;
        for (std::size_t i = 0; i < theta2_deg.size(); ++i) {
            spdc::McSetup s = setup;
            s.analyzers = {{cfg.theta1(), theta2_deg[i] * kDegToRad}};
            per_setting.push_back(
                spdc::sample_pairs(state, cfg.mc.n_pairs, s, det, seed + 1000003 * i));
            counts.push_back(spdc::count_coincidences(per_setting.back()));
        }
        const spdc::Estimate vis = spdc::estimate_visibility(per_setting);
        summary.push_back(estimate_line("visibility", vis));

        // antisymmetric-state share from the parallel/crossed settings
        const auto idx_of = [&](double deg) {
            for (std::size_t i = 0; i < theta2_deg.size(); ++i)
                if (theta2_deg[i] == deg) return i;
            return theta2_deg.size();
        };
        const std::size_t ip = idx_of(45.0), ic = idx_of(-45.0);
        if (ip < theta2_deg.size() && ic < theta2_deg.size())
            summary.push_back(estimate_line(
                "singlet_fraction",
                spdc::estimate_singlet_fraction(per_setting[ip], per_setting[ic])));

        spdc::CoincidenceCurve curve;
        curve.kind = spdc::Abscissa::theta;
        for (std::size_t i = 0; i < theta2_deg.size(); ++i) {
            curve.x.push_back(theta2_deg[i] * kDegToRad);
            curve.rate.push_back(static_cast<double>(counts[i]));
        }
        curve.label = "mc_fringe";
        spdc::normalize_family({&curve});
        spdc::write_curves_csv(body, {curve});
    } else if (opt.mc_mode == "histogram") {
        const auto events = spdc::sample_pairs(state, cfg.mc.n_pairs, setup, det, seed);
        double range = det.coincidence_window;
        if (setup.fibre)
            range = std::abs(setup.fibre->time_scale()) * state.grid().omega_max() * 1.05 +
                    5.0 * det.jitter_sigma;
        if (opt.range_ns) range = *opt.range_ns * 1e-9;
        const spdc::MCAHistogram hist = spdc::tac_histogram(events, opt.bin_ns * 1e-9, range);
        summary.push_back("summary.coincidences = " + spdc::fmt_u64(hist.total()));
        std::size_t peak_bin = 0;
        for (std::size_t i = 0; i < hist.counts.size(); ++i)
            if (hist.counts[i] > hist.counts[peak_bin]) peak_bin = i;
        summary.push_back("summary.peak_delay_ns = " +
                          spdc::fmt_g9(hist.bin_center(peak_bin) * 1e9));
        spdc::write_histogram_csv(body, hist);
    } else if (opt.mc_mode == "events") {
        const auto events = spdc::sample_pairs(state, cfg.mc.n_pairs, setup, det, seed);
        summary.push_back("summary.events = " + spdc::fmt_u64(events.size()));
        summary.push_back("summary.coincidences = " + spdc::fmt_u64(spdc::count_coincidences(events)));
        spdc::write_events_csv(body, events);
    } else {
        throw spdc::config_error("--mode must be fringe|histogram|events");
    }

    emit_metadata(os, "mc", cfg, summary);
    os << body.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-photon interference simulator for collinear type-II down-conversion"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config_path, "configuration file (flat key = value)");
    app.add_option("--out", opt.out_path, "output path (default: stdout)");
    app.add_option("--seed", opt.seed, "override mc.seed");
    app.add_option("--dump-state", opt.dump_state_path,
                   "also write the sampled amplitude matrix to this CSV path");

    CLI::App* spectrum = app.add_subcommand("spectrum", "coincidence spectra vs wavelength");
    spectrum->add_option("--thetas", opt.theta_pairs, "analyzer pair 'theta1,theta2' in degrees")
        ->required()
        ->expected(1, -1);
    CLI::App* fringe = app.add_subcommand("fringe", "coincidence rate vs analyzer-2 angle");
    CLI::App* hwpscan = app.add_subcommand("hwpscan", "spectrum family over half-wave-plate angles");
    hwpscan->add_option("--alphas", opt.alphas_deg, "plate angles in degrees")
        ->required()
        ->expected(1, -1);
    CLI::App* fibre = app.add_subcommand("fibre", "arrival-time-difference density after the fibre");
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo event simulation");
    mc->add_option("--mode", opt.mc_mode, "fringe|histogram|events")->default_val("fringe");
    mc->add_option("--bin-ns", opt.bin_ns, "histogram bin width, ns")->default_val(0.1);
    mc->add_option("--range-ns", opt.range_ns, "histogram half range, ns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        spdc::ScenarioConfig cfg = spdc::parse_config_string("");  // defaults
        if (!opt.config_path.empty()) {
            std::ifstream in(opt.config_path);
            if (!in) throw spdc::config_error("cannot open config file '" + opt.config_path + "'");
            cfg = spdc::parse_config(in);
        }

        std::ofstream out_file;
        if (!opt.out_path.empty()) {
            out_file.open(opt.out_path);
            if (!out_file) throw std::runtime_error("cannot open output file '" + opt.out_path + "'");
        }
        std::ostream& os = opt.out_path.empty() ? std::cout : out_file;

        if (!opt.dump_state_path.empty()) {
            std::ofstream dump(opt.dump_state_path);
            if (!dump)
                throw std::runtime_error("cannot open dump file '" + opt.dump_state_path + "'");
            spdc::write_state_csv(dump, cfg.apply_elements(cfg.make_state()));
        }

        if (spectrum->parsed()) return run_spectrum(opt, cfg, os);
        if (fringe->parsed()) return run_fringe(cfg, os);
        if (hwpscan->parsed()) return run_hwpscan(opt, cfg, os);
        if (fibre->parsed()) return run_fibre(cfg, os);
        if (mc->parsed()) return run_mc(opt, cfg, os);
        return 2;
    } catch (const spdc::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const spdc::low_statistics_error& e) {
        std::cerr << "statistics error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
