#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "spdc/optics.hpp"
#include "spdc/state.hpp"

using namespace spdc;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double kPi = constants::pi;

// half_extent = 2*pi with 2049 points makes x = pi/4, pi/2, pi exact samples
BiphotonAmplitude test_source(bool normalize = true, double tau0 = 63e-15) {
    const SourceParams src = SourceParams::from_tau0(702e-9, tau0);
    return make_spdc_state(src, FrequencyGrid::make(2049, 2.0 * kPi, tau0), normalize);
}
}  // namespace

TEST_CASE("sinc amplitude handles the removable singularity and zeros") {
    CHECK(sinc_amplitude(0.0) == 1.0);
    CHECK_THAT(sinc_amplitude(kPi / 2.0), WithinAbs(2.0 / kPi, 1e-15));
    for (int m = 1; m <= 5; ++m)
        CHECK_THAT(sinc_amplitude(m * kPi), WithinAbs(0.0, 1e-15));
    // squared value at pi/2 is the antisymmetric-state pair rate
    const double f = sinc_amplitude(kPi / 2.0);
    CHECK_THAT(f * f, WithinAbs(0.405284734569351, 1e-14));
}

TEST_CASE("sinc amplitude is even") {
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-20.0, 20.0);
        CHECK(sinc_amplitude(x) == sinc_amplitude(-x));
    }
}

TEST_CASE("half-max abscissa of sinc^2: bisection agrees with refinement") {
    auto f = [](double x) {
        const double s = sinc_amplitude(x);
        return s * s - 0.5;
    };
    const double by_bisection = oracles::bisect(f, 1.0, 2.0);
    const double refined = oracles::newton_refine(f, by_bisection);
    CHECK_THAT(by_bisection, WithinAbs(refined, 1e-10));
    CHECK_THAT(by_bisection, WithinAbs(1.39155737825151, 1e-10));
}

TEST_CASE("frequency grid is symmetric and validates its inputs") {
    const FrequencyGrid g = FrequencyGrid::make(257, 1.5 * kPi, 63e-15);
    CHECK(g.omega(g.center_index()) == 0.0);
    for (int k = 0; k < g.size(); ++k)
        CHECK(g.omega(k) == -g.omega(g.size() - 1 - k));  // bit-exact mirror

    CHECK_THROWS_AS(FrequencyGrid::make(2, 1.0, 1e-15), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid::make(256, 1.0, 1e-15), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid::make(257, -1.0, 1e-15), std::invalid_argument);
}

TEST_CASE("source amplitudes carry the crystal phases") {
    const double tau0 = 63e-15;
    const BiphotonAmplitude state = test_source(/*normalize=*/false, tau0);
    const FrequencyGrid& g = state.grid();

    const Mat2c at0 = state.sample(g.center_index());
    CHECK(at0.hv == cplx(1.0, 0.0));
    CHECK(at0.vh == cplx(1.0, 0.0));
    CHECK(at0.hh == cplx(0.0, 0.0));
    CHECK(at0.vv == cplx(0.0, 0.0));

    const int k_half = g.nearest_index(kPi / (2.0 * tau0));
    REQUIRE_THAT(g.omega(k_half) * tau0, WithinAbs(kPi / 2.0, 1e-9));
    const Mat2c at_half = state.sample(k_half);
    CHECK_THAT(at_half.hv.real(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(at_half.hv.imag(), WithinAbs(2.0 / kPi, 1e-12));
    CHECK_THAT(at_half.vh.imag(), WithinAbs(-2.0 / kPi, 1e-12));

    const int k_pi = g.nearest_index(kPi / tau0);
    CHECK_THAT(std::abs(state.sample(k_pi).hv), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(state.sample(k_pi).vh), WithinAbs(0.0, 1e-15));

    CHECK(state.exchange_asymmetry() < 1e-12);
}

TEST_CASE("normalization makes the discretized norm one") {
    const BiphotonAmplitude state = test_source();
    CHECK_THAT(total_pair_rate(state), WithinAbs(1.0, 1e-12));
}

TEST_CASE("grid refinement converges at second order") {
    const SourceParams src = SourceParams::from_tau0(702e-9, 63e-15);
    auto norm_at = [&](int n) {
        return total_pair_rate(
            make_spdc_state(src, FrequencyGrid::make(n, 1.5 * kPi, src.tau0), false));
    };
    const double reference = norm_at(16385);
    const double err_coarse = std::abs(norm_at(1025) - reference);
    const double err_fine = std::abs(norm_at(2049) - reference);
    CHECK(err_fine < err_coarse / 3.0);  // O(step^2) halving
}

TEST_CASE("bell decomposition at the marked offsets") {
    const double tau0 = 63e-15;
    const BiphotonAmplitude state = test_source(true, tau0);

    const BellWeights at0 = bell_decompose(state, 0.0);
    CHECK_THAT(at0.w_psi_plus, WithinAbs(1.0, 1e-12));
    CHECK_THAT(at0.w_psi_minus, WithinAbs(0.0, 1e-12));
    CHECK_THAT(at0.pair_rate, WithinAbs(1.0, 1e-12));

    const BellWeights at_half = bell_decompose(state, kPi / (2.0 * tau0));
    CHECK_THAT(at_half.w_psi_minus, WithinAbs(1.0, 1e-12));
    CHECK_THAT(at_half.pair_rate, WithinAbs(0.405284734569351, 1e-12));

    const BellWeights at_quarter = bell_decompose(state, kPi / (4.0 * tau0));
    CHECK_THAT(at_quarter.w_psi_plus, WithinAbs(0.5, 1e-12));
    CHECK_THAT(at_quarter.w_psi_minus, WithinAbs(0.5, 1e-12));
    CHECK_THAT(at_quarter.pair_rate, WithinAbs(0.810569469138702, 1e-12));

    CHECK(at0.w_phi_plus == 0.0);
    CHECK(at0.w_phi_minus == 0.0);
}

TEST_CASE("bell fractions sum to one for transformed states") {
    const double tau0 = 63e-15;
    BiphotonAmplitude state = test_source(true, tau0);
    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        state = apply_common_path(state, JonesElement{oracles::random_unitary(rng)});
        state = compensator(state, rng.uniform(-2.0, 2.0) * tau0);
        const double omega = rng.uniform(state.grid().omega_min(), state.grid().omega_max());
        const BellWeights w = bell_decompose(state, omega);
        if (!w.fractions_defined()) continue;
        CHECK_THAT(w.w_phi_plus + w.w_phi_minus + w.w_psi_plus + w.w_psi_minus,
                   WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("singlet weight of the source follows sin^2") {
    const double tau0 = 63e-15;
    const BiphotonAmplitude state = test_source(true, tau0);
    for (int k = 0; k < state.grid().size(); k += 13) {
        const double x = state.grid().omega(k) * tau0;
        const BellWeights w = bell_decompose(state, state.grid().omega(k));
        if (!w.fractions_defined()) continue;
        const double s = std::sin(x);
        CHECK_THAT(w.w_psi_minus, WithinAbs(s * s, 1e-12));
        CHECK_THAT(w.w_psi_plus + w.w_psi_minus, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("querying outside the grid is an error") {
    const BiphotonAmplitude state = test_source();
    CHECK_THROWS_AS(bell_decompose(state, state.grid().omega_max() * 1.01), std::out_of_range);
    CHECK_THROWS_AS(state.at(state.grid().omega_min() * 1.01), std::out_of_range);
}

TEST_CASE("zero-density points report undefined fractions, not NaN") {
    // build a state with an exact spectral hole
    const BiphotonAmplitude source = test_source(false);
    const BiphotonAmplitude holed = source.map([&](double omega, const Mat2c& a) {
        return omega == 0.0 ? Mat2c{} : a;
    });
    const BellWeights w = bell_decompose(holed, 0.0);
    CHECK(w.pair_rate == 0.0);
    CHECK_FALSE(w.fractions_defined());
    CHECK(w.w_psi_minus == BellWeights::undefined);
    CHECK_FALSE(std::isnan(w.w_psi_minus));
}

TEST_CASE("pair rate spectrum matches the analytic envelope") {
    const double tau0 = 63e-15;
    const BiphotonAmplitude state = test_source(true, tau0);
    const CoincidenceCurve curve = pair_rate_spectrum(state);
    for (std::size_t i = 0; i < curve.x.size(); i += 7) {
        const double x = curve.x[i] * tau0;
        const double f = sinc_amplitude(x);
        CHECK_THAT(curve.rate[i], WithinAbs(f * f, 1e-12));
    }
}

TEST_CASE("spectrum FWHM matches the bisection oracle") {
    const double tau0 = 63e-15;
    const BiphotonAmplitude state = test_source(true, tau0);
    const CoincidenceCurve curve = pair_rate_spectrum(state);

    // crossings of rate = 1/2 by linear interpolation, right side then left
    auto crossing = [&](int dir) {
        const int mid = state.grid().center_index();
        for (int k = mid; k > 0 && k < state.grid().size() - 1; k += dir) {
            const double a = curve.rate[static_cast<std::size_t>(k)];
            const double b = curve.rate[static_cast<std::size_t>(k + dir)];
            if (a >= 0.5 && b < 0.5) {
                const double t = (a - 0.5) / (a - b);
                return curve.x[static_cast<std::size_t>(k)] +
                       dir * t * state.grid().step();
            }
        }
        FAIL("no half-max crossing found");
        return 0.0;
    };
    const double width_x = (crossing(+1) - crossing(-1)) * tau0;

    auto f = [](double x) {
        const double s = sinc_amplitude(x);
        return s * s - 0.5;
    };
    const double x_half = oracles::bisect(f, 1.0, 2.0);
    CHECK_THAT(width_x, WithinAbs(2.0 * x_half, 1e-3));
    CHECK_THAT(width_x, WithinAbs(2.78311475650302, 1e-3));
}

TEST_CASE("total pair rate is unitary-invariant and shrinks under projection") {
    const BiphotonAmplitude state = test_source();
    const double before = total_pair_rate(state);

    SplitMix64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const BiphotonAmplitude rotated =
            apply_common_path(state, JonesElement{oracles::random_unitary(rng)});
        CHECK_THAT(total_pair_rate(rotated), WithinAbs(before, 1e-12));
    }

    // projecting one photon onto 45 degrees removes amplitude (test-side op:
    // left-multiply by the projector so only photon 1 is filtered)
    const Mat2c proj = polarizer(kPi / 4.0).m;
    const BiphotonAmplitude filtered =
        state.map([&](double, const Mat2c& a) { return proj * a; });
    CHECK(total_pair_rate(filtered) < before);
}
