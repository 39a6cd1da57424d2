// CSV emission with '#' metadata lines. Numbers are printed with 9
// significant digits through the C locale, so identical inputs produce
// identical bytes.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "spdc/curves.hpp"
#include "spdc/montecarlo.hpp"
#include "spdc/state.hpp"

namespace spdc {

// Curve rows: x_value, x_unit, rate_normalized, curve_label. Angles are
// written in degrees, delays in nanoseconds, wavelengths in nanometres.
inline void write_curves_csv(std::ostream& os, const std::vector<CoincidenceCurve>& curves) {
    os << "x_value,x_unit,rate_normalized,curve_label\n";
    for (const auto& c : curves) {
        const char* unit = abscissa_unit(c.kind);
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            double x = c.x[i];
            switch (c.kind) {
                case Abscissa::lambda: x *= 1e9; break;                       // m -> nm
                case Abscissa::theta: x *= 180.0 / constants::pi; break;      // rad -> deg
                case Abscissa::tau: x *= 1e9; break;                          // s -> ns
                case Abscissa::omega: break;
            }
            os << fmt_g9(x) << ',' << unit << ',' << fmt_g9(c.rate[i]) << ',' << c.label << '\n';
        }
    }
}

inline void write_histogram_csv(std::ostream& os, const MCAHistogram& h) {
    os << "bin_center_s,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        os << fmt_g9(h.bin_center(i)) << ',' << fmt_u64(h.counts[i]) << '\n';
}

inline void write_events_csv(std::ostream& os, const std::vector<EventRecord>& events) {
    os << "t1_s,t2_s,pass1,pass2,accidental\n";
    for (const auto& e : events)
        os << fmt_g9(e.t1) << ',' << fmt_g9(e.t2) << ',' << (e.pass1 ? 1 : 0) << ','
           << (e.pass2 ? 1 : 0) << ',' << (e.accidental ? 1 : 0) << '\n';
}

// Debug dump of the sampled amplitude matrix.
inline void write_state_csv(std::ostream& os, const BiphotonAmplitude& state) {
    os << "omega_rad_s,re_hh,im_hh,re_hv,im_hv,re_vh,im_vh,re_vv,im_vv\n";
    for (int k = 0; k < state.grid().size(); ++k) {
        const Mat2c& a = state.sample(k);
        os << fmt_g9(state.grid().omega(k)) << ',' << fmt_g9(a.hh.real()) << ','
           << fmt_g9(a.hh.imag()) << ',' << fmt_g9(a.hv.real()) << ',' << fmt_g9(a.hv.imag())
           << ',' << fmt_g9(a.vh.real()) << ',' << fmt_g9(a.vh.imag()) << ','
           << fmt_g9(a.vv.real()) << ',' << fmt_g9(a.vv.imag()) << '\n';
    }
}

}  // namespace spdc
