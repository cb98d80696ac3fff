// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. argv[1] must be the path to the pdceff binary (used by
// the CLI determinism criterion).

#include "pdc/closed_form.hpp"
#include "pdc/fitting.hpp"
#include "pdc/optimize.hpp"
#include "pdc/oracle.hpp"
#include "pdc/types.hpp"

#include "helpers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pdc;
using testhelp::rel_dev;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- 1. identity ------------------------------------------------------------

void criterion_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    testhelp::ParamSampler sampler(0xC0FFEEu);
    PhaseMatchConfig c;
    BeamGeometry g;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        sampler.sample(c, g);
        const double full =
            std::abs(chi_M_full_value(c, g) -
                     std::sqrt(chi_P_full_value(c, g, 3) * chi_P_full_value(c, g, 4)));
        const double thin = std::abs(
            chi_M_thin_value(g) - std::sqrt(chi_P_thin_value(g, 3) * chi_P_thin_value(g, 4)));
        worst = std::max({worst, full, thin});
    }
    const double dt = seconds_since(t0);
    std::ostringstream os;
    os << "max |chi_M - sqrt(chi_P3 chi_P4)| = " << worst << " over 10^4 draws, full+thin, "
       << dt << " s";
    report(1, "identity", worst <= 1e-9 && dt < 5.0, os.str());
}

// --- 2. thin-limit consistency ----------------------------------------------

void criterion_thin_limit() {
    testhelp::ParamSampler sampler(31337u);
    PhaseMatchConfig c;
    BeamGeometry g;
    double worst = 0.0, worst_arg = 0.0;
    for (int i = 0; i < 100; ++i) {
        sampler.sample(c, g);
        const double scale =
            std::max({c.walkoff_i(), c.walkoff_s(), c.K_p * (c.theta_i + c.theta_s)});
        c.L = 1e-6 * c.K_p * std::min({g.w_p, g.w_o1, g.w_o2}) / scale;
        worst_arg = std::max(worst_arg, c.L * scale / c.K_p);
        worst = std::max(worst, rel_dev(chi_M_full_value(c, g), chi_M_thin_value(g)));
        worst = std::max(worst, rel_dev(chi_P_full_value(c, g, 3), chi_P_thin_value(g, 3)));
        worst = std::max(worst, rel_dev(chi_P_full_value(c, g, 4), chi_P_thin_value(g, 4)));
        worst = std::max(worst, rel_dev(eps_P_full_value(c, g), eps_P_thin_value(g)));
        worst = std::max(worst, rel_dev(eta_M_full_value(c, g), eta_M_thin_value(g)));
    }
    std::ostringstream os;
    os << "max relative mismatch " << worst << " at L*walkoff/K_p <= " << worst_arg;
    report(2, "thin-limit", worst < 1e-5 && worst_arg < 1e-5, os.str());
}

// --- 3. asymptotes ----------------------------------------------------------

void criterion_asymptotes() {
    const double r = 1e3;
    const auto big_o = testhelp::geometry(1.0, r, r);    // w_o >> w_p
    const auto big_p = testhelp::geometry(r, 1.0, 1.0);  // w_p >> w_o
    const double e1 = std::abs(eta_M_thin_value(big_o) - 1.0);
    const double e2 = std::abs(eta_M_thin_value(big_p) - 0.5);
    const double e3 = std::abs(chi_M_thin_value(big_o));
    const double e4 = std::abs(chi_M_thin_value(big_p) - 1.0);
    std::ostringstream os;
    os << "|eta-1|=" << e1 << " |eta-1/2|=" << e2 << " |chi-0|=" << e3 << " |chi-1|=" << e4
       << " at waist ratio 1e3";
    report(3, "asymptotes", e1 < 1e-3 && e2 < 1e-3 && e3 < 1e-3 && e4 < 1e-3, os.str());
}

// --- 4. oracle equivalence --------------------------------------------------

void criterion_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    // 20-point Latin hypercube over (w_p, w_o1, w_o2, L)
    const int n = 20;
    std::mt19937 rng(4242u);
    std::array<std::vector<int>, 4> strata;
    for (auto& s : strata) {
        s.resize(n);
        std::iota(s.begin(), s.end(), 0);
        std::shuffle(s.begin(), s.end(), rng);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto coord = [&](int stratum, double lo, double hi) {
        const double t = (stratum + unit(rng)) / n;
        return lo + (hi - lo) * t;
    };

    QuadratureSpec spec;  // defaults
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        auto c = testhelp::inplane_config();
        auto g = testhelp::geometry(coord(strata[0][i], 50.0, 600.0),
                                    coord(strata[1][i], 50.0, 600.0),
                                    coord(strata[2][i], 50.0, 600.0));
        c.L = coord(strata[3][i], 100.0, 5000.0);
        g.w_ap = 400.0;
        g.k_fresnel = 5e-5;

        const double c34 = coincidence_single_mode(c, g, spec);
        const double c3 = singles_single_mode(c, g, spec, 3);
        const double c4 = singles_single_mode(c, g, spec, 4);
        worst = std::max(worst, rel_dev(c34 / std::sqrt(c3 * c4), chi_M_full_value(c, g)));
        worst = std::max(worst, rel_dev(c34 / c3, chi_P_full_value(c, g, 3)));
        const double m34 = coincidence_multimode(c, g, spec);
        const double m3 = singles_multimode(c, g, spec, 3);
        const double m4 = singles_multimode(c, g, spec, 4);
        worst = std::max(worst, rel_dev(m34 / std::sqrt(m3 * m4), eta_M_full_value(c, g)));
        worst = std::max(worst, rel_dev(coincidence_mixed(c, g, spec) / c3,
                                        eps_P_full_value(c, g)));
    }
    const double dt = seconds_since(t0);
    std::ostringstream os;
    os << "max oracle/closed-form deviation " << worst
       << " over 20-point Latin hypercube, " << dt << " s";
    report(4, "oracle-equivalence", worst < 1e-3 && dt < 300.0, os.str());
}

// --- 5. figure shapes --------------------------------------------------------

void criterion_figures() {
    bool pass = true;
    std::ostringstream os;

    // Fig 2(a): interior maximum of chi_P vs w_o2, peak increasing with w_p
    {
        auto c = testhelp::perp_config(5000.0);
        double prev_peak = -1.0;
        bool interior_ok = true, order_ok = true;
        for (double w_p : {150.0, 200.0, 400.0, 600.0}) {
            auto g = testhelp::geometry(w_p, 250.0, 250.0);
            auto rec = optimize_waist(EfficiencyKind::chi_P3, Regime::full_crystal,
                                      WaistVariable::w_o2, Bracket{10.0, 1500.0}, c, g);
            interior_ok = interior_ok && rec.interior;
            order_ok = order_ok && rec.efficiency_at_optimum > prev_peak;
            prev_peak = rec.efficiency_at_optimum;
        }
        pass = pass && interior_ok && order_ok;
        os << "fig2a interior=" << interior_ok << " peak-order=" << order_ok;
    }

    // Fig 2(b): |w2* - w_o1| decreases along the pump grid, faster for chi_M
    {
        auto c = testhelp::perp_config(1000.0);
        auto g = testhelp::geometry(300.0, 250.0, 250.0);
        std::vector<double> grid;
        for (double w = 150.0; w <= 600.0; w += 50.0) grid.push_back(w);
        auto curveM = optimum_curve(EfficiencyKind::chi_M, Regime::full_crystal,
                                    WaistVariable::w_o2, Bracket{10.0, 1500.0},
                                    WaistVariable::w_p, grid, c, g);
        auto curveP = optimum_curve(EfficiencyKind::chi_P3, Regime::full_crystal,
                                    WaistVariable::w_o2, Bracket{10.0, 1500.0},
                                    WaistVariable::w_p, grid, c, g);
        bool mono = true, faster = true;
        double prevM = 1e300, prevP = 1e300;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double gM = std::abs(curveM[i].optimum_value - 250.0);
            const double gP = std::abs(curveP[i].optimum_value - 250.0);
            mono = mono && gM < prevM + 1e-9 && gP < prevP + 1e-9;
            faster = faster && gM <= gP + 1e-9;
            prevM = gM;
            prevP = gP;
        }
        pass = pass && mono && faster;
        os << " fig2b gap-mono=" << mono << " chiM-faster=" << faster;
    }

    // Fig 5: eta_P monotone in w_o2, no interior optimum
    {
        auto c = testhelp::perp_config(5000.0);
        bool mono_all = true;
        for (double w_p : {150.0, 200.0, 400.0, 600.0}) {
            auto g = testhelp::geometry(w_p, 250.0, 250.0);
            auto rec = optimize_waist(EfficiencyKind::eta_P3, Regime::full_crystal,
                                      WaistVariable::w_o2, Bracket{10.0, 1500.0}, c, g);
            mono_all = mono_all && !rec.interior &&
                       std::abs(rec.optimum_value - 1500.0) < 0.1;
        }
        pass = pass && mono_all;
        os << " fig5 etaP-monotone=" << mono_all;
    }

    // Fig 7: eps_P saturation increases with pump waist
    {
        auto c = testhelp::perp_config(5000.0);
        bool inc = true;
        double prev = -1.0;
        for (double w_p : {150.0, 200.0, 400.0, 600.0}) {
            auto g = testhelp::geometry(w_p, 250.0, 250.0);
            g.w_ap = 2000.0;
            g.k_fresnel = 5e-6;
            const double sat = eps_P_full_value(c, g);
            inc = inc && sat > prev;
            prev = sat;
        }
        pass = pass && inc;
        os << " fig7 saturation-order=" << inc;
    }

    // Fig 9: singles rate decreasing in pump waist at fixed w_o
    {
        auto c = testhelp::perp_config(5000.0);
        bool dec = true;
        double prev = 1e300;
        for (double w_p = 100.0; w_p <= 700.0; w_p += 20.0) {
            const double v = singles_C3_value(c, w_p, 250.0);
            dec = dec && v < prev;
            prev = v;
        }
        pass = pass && dec;
        os << " fig9 C3-decreasing=" << dec;
    }

    report(5, "figure-shapes", pass, os.str());
}

// --- 6. fit round-trip -------------------------------------------------------

void criterion_fit() {
    const double k_true = 5e-6, wp_true = 300.0;
    auto make_rows = [&](double noise, std::uint32_t seed) {
        std::mt19937 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::ostringstream os;
        os << "abscissa_um,value\n";
        for (int i = 0; i < 20; ++i) {
            const double diameter = 100.0 + 3900.0 * i / 19.0;
            BeamGeometry g = testhelp::geometry(wp_true, 250.0, 250.0);
            g.w_ap = diameter / 2.0;
            g.k_fresnel = k_true;
            double v = eps_P_thin_value(g);
            if (noise > 0.0) v *= 1.0 + noise * gauss(rng);
            os << diameter << ',' << v << "\n";
        }
        return os.str();
    };

    FixedParams fx;
    fx.config = testhelp::perp_config();
    fx.geometry = testhelp::geometry(wp_true, 250.0, 250.0);
    fx.geometry.k_fresnel = k_true;

    auto noisy = parse_dataset(make_rows(0.01, 20260810u), AbscissaKind::iris_diameter);
    auto out = fit(FitModel::eps_P_thin, noisy, {"k_fresnel", "w_p"},
                   {{"k_fresnel", 8e-6}, {"w_p", 400.0}}, fx);
    const double ek = rel_dev(out.params.at("k_fresnel"), k_true);
    const double ew = rel_dev(out.params.at("w_p"), wp_true);

    auto clean = parse_dataset(make_rows(0.0, 0), AbscissaKind::iris_diameter);
    auto out0 = fit(FitModel::eps_P_thin, clean, {"k_fresnel", "w_p"},
                    {{"k_fresnel", 8e-6}, {"w_p", 400.0}}, fx);

    std::ostringstream os;
    os << "1% noise: k err " << ek << ", w_p err " << ew
       << "; zero noise residual rms " << out0.residual_rms;
    report(6, "fit-round-trip",
           out.converged && ek < 0.05 && ew < 0.05 && out0.residual_rms < 1e-10, os.str());
}

// --- 7. numerical hygiene ----------------------------------------------------

void criterion_hygiene() {
    double worst_erf = 0.0;
    for (double x = -6.0; x <= 6.0; x += 0.001)
        worst_erf = std::max(worst_erf, std::abs(special::erf(x) - testhelp::erf_series(x)));

    // branch crossover of the Erf-ratio factors, probed through chi_M at the
    // L that puts each argument at the series threshold
    auto c = testhelp::inplane_config();
    auto g = testhelp::geometry(300.0, 250.0, 180.0);
    const auto aux = auxiliary_terms(c, g);
    const double t = special::erf_over_x_threshold;
    double worst_jump = 0.0;
    const double L_num = t * c.K_p * std::sqrt(aux.S) / std::sqrt(2.0 * aux.B);
    const double L_d3 = t * c.K_p * std::hypot(g.w_o1, g.w_p) /
                        (std::sqrt(2.0) * aux.a_i);
    const double L_d4 = t * c.K_p * std::hypot(g.w_o2, g.w_p) /
                        (std::sqrt(2.0) * aux.a_s);
    for (double L : {L_num, L_d3, L_d4}) {
        PhaseMatchConfig cl = c;
        cl.L = L * (1.0 - 1e-7);
        const double below = chi_M_full_value(cl, g);
        cl.L = L * (1.0 + 1e-7);
        const double above = chi_M_full_value(cl, g);
        worst_jump = std::max(worst_jump, rel_dev(below, above));
    }

    // oracle stability through D = 0
    QuadratureSpec spec;
    double worst_d = 0.0;
    double ref = 0.0;
    bool first = true;
    for (double d : {-0.05, 0.0, 0.05}) {
        auto cd = testhelp::inplane_config();
        cd.D = d;
        const double v =
            oracle_efficiency(EfficiencyKind::chi_M, cd, g, spec, false).value;
        if (first) {
            ref = v;
            first = false;
        }
        worst_d = std::max(worst_d, rel_dev(v, ref));
    }

    std::ostringstream os;
    os << "erf abs err " << worst_erf << "; F crossover jump " << worst_jump
       << "; oracle D-sweep spread " << worst_d;
    report(7, "numerical-hygiene",
           worst_erf <= 1e-12 && worst_jump <= 1e-10 && worst_d <= 1e-12, os.str());
}

// --- 8. CLI determinism --------------------------------------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_determinism(const std::string& cli) {
    const std::string cfg = "/tmp/pdc_acceptance_config.json";
    {
        std::ofstream out(cfg);
        out << R"({
          "phase_match": {"K_p": 33.0444, "K_s": 16.7769, "K_i": 16.7769,
                          "N_p": -4.5477, "N_s": 0, "D": 0,
                          "theta_i": 0.174533, "theta_s": 0.174533, "L": 5000},
          "geometry": {"w_p": 300, "w_o1": 250, "w_o2": 250,
                       "w_ap": 400, "k_fresnel": 5.0e-5}
        })";
    }
    const std::string out1 = "/tmp/pdc_acceptance_scan1.csv";
    const std::string out2 = "/tmp/pdc_acceptance_scan2.csv";
    const std::string args = " scan --config " + cfg +
                             " --kind chi_M --var w_o2 --grid 50:800:40 --output ";
    const int s1 = std::system((cli + args + out1).c_str());
    const int s2 = std::system((cli + args + out2).c_str());
    const std::string a = slurp(out1), b = slurp(out2);
    const bool pass = s1 == 0 && s2 == 0 && !a.empty() && a == b;
    std::ostringstream os;
    os << "two scan invocations, " << a.size() << " bytes, byte-identical=" << (a == b);
    report(8, "cli-determinism", pass, os.str());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    std::remove(cfg.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: pdc_acceptance <path-to-pdceff>\n";
        return 2;
    }
    criterion_identity();
    criterion_thin_limit();
    criterion_asymptotes();
    criterion_oracle();
    criterion_figures();
    criterion_fit();
    criterion_hygiene();
    criterion_determinism(argv[1]);
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
