// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include "nmsse/bath.hpp"
#include "nmsse/ensemble.hpp"
#include "nmsse/models.hpp"
#include "nmsse/random.hpp"
#include "nmsse/sse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace nmsse;

namespace {

int failed = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct Moments {
    double mean = 0.0;
    double se = 0.0;
};

Moments moments(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

ScenarioParams figure_params(Unraveling u, Variant v, double dt = 1e-4) {
    ScenarioParams p;
    p.unraveling = u;
    p.variant = v;
    p.g = 1.0;
    p.delta = 2.0;
    p.dt = dt;
    p.t_final = 3.0;
    return p;
}

ScenarioParams markov_params(Unraveling u, Variant v) {
    ScenarioParams p;
    p.unraveling = u;
    p.variant = v;
    p.gamma = 1.0;
    p.dt = 1e-3;
    p.t_final = 5.0;
    return p;
}

const EnsembleOptions all_workers{0};

double min_eigenvalue_over(const EnsembleResult& r) {
    double lo = 1.0;
    for (const auto& rho : r.mean_density) lo = std::min(lo, min_eigenvalue(rho));
    return lo;
}

bool bitwise_equal(const EnsembleResult& a, const EnsembleResult& b) {
    for (std::size_t i = 0; i < a.mean_bloch.size(); ++i) {
        const auto &p = a.mean_bloch[i], &q = b.mean_bloch[i];
        const auto &r = a.bloch_se[i], &s = b.bloch_se[i];
        if (p.x != q.x || p.y != q.y || p.z != q.z || p.norm != q.norm) return false;
        if (r.x != s.x || r.y != s.y || r.z != s.z || r.norm != s.norm) return false;
    }
    for (std::size_t i = 0; i < a.mean_density.size(); ++i)
        if (a.mean_density[i] != b.mean_density[i]) return false;
    return a.mean_bloch.size() == b.mean_bloch.size() && a.max_norm_drift == b.max_norm_drift;
}

void exact_closed_form() {
    const Stopwatch clock;
    const TimeGrid grid = TimeGrid::covering(1e-4, 3.0);
    const auto amps = exact_evolve(1.0, 0.0, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max(worst, std::abs(amps[i].c2 - std::cos(std::sqrt(2.0) * grid.t(i))));
    const double secs = clock.seconds();
    report("exact oracle closed form", worst <= 1e-6 && secs < 1.0,
           "max |c2 - cos(sqrt2 t)| = " + fmt("%.3g", worst) + ", " + fmt("%.3f", secs) + " s");
}

void noise_statistics() {
    const Stopwatch clock;
    const auto bath = BathConfig::two_mode(1.0, 2.0);
    const TimeGrid grid = TimeGrid::covering(1e-3, 3.0);
    const PhaseTable phases(bath, grid);
    constexpr int pairs = 10, paths = 10000;

    RandomStream pick(20240601);
    std::vector<std::pair<std::size_t, std::size_t>> ts;
    for (int p = 0; p < pairs; ++p) {
        const auto a = static_cast<std::size_t>(pick.uniform() * static_cast<double>(grid.size()));
        const auto b = static_cast<std::size_t>(pick.uniform() * static_cast<double>(grid.size()));
        ts.emplace_back(std::min(a, grid.size() - 1), std::min(b, grid.size() - 1));
    }

    std::vector<std::vector<double>> cre(pairs), cim(pairs), are(pairs), aim(pairs), quad(pairs);
    RandomStream rng(1);
    for (int n = 0; n < paths; ++n) {
        const auto z = synthesize_noise(bath, sample_coherent(bath, rng), phases);
        const auto q = synthesize_noise(bath, sample_quadrature(bath, rng), phases);
        for (int p = 0; p < pairs; ++p) {
            const Complex zt = z.values[ts[p].first], zs = z.values[ts[p].second];
            const Complex c = zt * std::conj(zs), a = zt * zs;
            cre[p].push_back(c.real());
            cim[p].push_back(c.imag());
            are[p].push_back(a.real());
            aim[p].push_back(a.imag());
            quad[p].push_back(q.values[ts[p].first].real() * q.values[ts[p].second].real());
        }
    }

    double worst_coherent = 0.0, worst_quadrature = 0.0;  // in standard errors
    auto score = [](const Moments& m, double expected) {
        const double d = std::abs(m.mean - expected);
        return d == 0.0 ? 0.0 : d / m.se;
    };
    for (int p = 0; p < pairs; ++p) {
        const double tau = grid.t(ts[p].first) - grid.t(ts[p].second);
        const double expected = 2.0 * std::cos(2.0 * tau);
        worst_coherent = std::max({worst_coherent, score(moments(cre[p]), expected), score(moments(cim[p]), 0.0),
                                   score(moments(are[p]), 0.0), score(moments(aim[p]), 0.0)});
        worst_quadrature = std::max(worst_quadrature, score(moments(quad[p]), symmetric_kernel(bath, tau)));
    }
    const double secs = clock.seconds();
    report("noise statistics (coherent)", worst_coherent <= 5.0 && secs < 30.0,
           "worst deviation " + fmt("%.2f", worst_coherent) + " SE over 10 (t,s) pairs, 1e4 paths");
    report("noise statistics (quadrature)", worst_quadrature <= 5.0 && secs < 30.0,
           "worst deviation " + fmt("%.2f", worst_quadrature) + " SE, " + fmt("%.1f", secs) + " s total");
}

// Hand-written two-level amplitude equations, H = 0 and L = sigma.
struct TlaRates {
    Complex e, b;
};

TlaRates actual_coherent_rates(Complex ce, Complex cb, Complex f, Complex w) {
    const double pe = std::norm(ce), pb = std::norm(cb);
    return {-ce * ce * std::conj(cb) * w + f * ce * (-1.0 + pe - pe * pb),
            ce * (1.0 - pb) * w + f * cb * pe * (2.0 - pb)};
}

TlaRates actual_quadrature_rates(Complex ce, Complex cb, Complex f, Complex w) {
    const TlaRates c = actual_coherent_rates(ce, cb, f, w);
    const Complex cbs = std::conj(cb);
    return {c.e - f * ce * ce * ce * cbs * cbs, c.b + f * cbs * ce * ce * (1.0 - std::norm(cb))};
}

void stepper_oracle() {
    const Stopwatch clock;
    const auto tla = SystemModel::two_level_atom();
    RandomStream rng(77);
    const double dt = 0.01;
    double worst = 0.0;
    for (const auto u : {Unraveling::coherent, Unraveling::quadrature}) {
        SseStepper stepper(tla, u);
        const bool real = uses_real_noise(u);
        for (const auto v : {Variant::linear, Variant::actual}) {
            for (int n = 0; n < 100; ++n) {
                SystemState psi(2);
                psi << Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal());
                psi.normalize();
                const Complex f = real ? Complex(rng.normal(), 0.0) : Complex(rng.normal(), rng.normal());
                const Complex z = real ? Complex(rng.normal(), 0.0) : Complex(rng.normal(), rng.normal());
                const Complex w = real ? z : std::conj(z);
                TlaRates r{-f * psi(0), w * psi(0)};
                SystemState out = psi;
                if (v == Variant::linear) {
                    stepper.step_linear(out, f, w, dt);
                } else {
                    r = real ? actual_quadrature_rates(psi(0), psi(1), f, w)
                             : actual_coherent_rates(psi(0), psi(1), f, w);
                    stepper.step_actual(out, f, w, dt);
                }
                worst = std::max({worst, std::abs(out(0) - (psi(0) + dt * r.e)), std::abs(out(1) - (psi(1) + dt * r.b))});
            }
        }
    }
    const double secs = clock.seconds();
    report("stepper oracle equivalence", worst <= 1e-12 && secs < 1.0,
           "max amplitude difference " + fmt("%.2g", worst) + " over 4 x 100 states, " + fmt("%.3f", secs) + " s");
}

struct FigureRuns {
    EnsembleResult linear_1000, actual_1000, linear_4000, actual_4000;
    double seconds_1000 = 0.0;
};

FigureRuns figure(Unraveling u) {
    const Scenario lin(figure_params(u, Variant::linear)), act(figure_params(u, Variant::actual));
    Stopwatch clock;
    auto l1 = run_ensemble(lin, 1000, 0, all_workers);
    auto a1 = run_ensemble(act, 1000, 0, all_workers);
    const double t1000 = clock.seconds();
    auto l4 = run_ensemble(lin, 4000, 0, all_workers);
    auto a4 = run_ensemble(act, 4000, 0, all_workers);
    return {std::move(l1), std::move(a1), std::move(l4), std::move(a4), t1000};
}

void figure_criteria(const std::string& label, Unraveling u, const FigureRuns& f) {
    const auto exact = exact_bloch(1.0, 2.0, f.actual_1000.grid);
    const double dl1 = compare(f.linear_1000, f.actual_1000.grid, exact, 0.15).max_deviation();
    const double da1 = compare(f.actual_1000, f.actual_1000.grid, exact, 0.15).max_deviation();
    const double dl4 = compare(f.linear_4000, f.actual_4000.grid, exact, 0.08).max_deviation();
    const double da4 = compare(f.actual_4000, f.actual_4000.grid, exact, 0.08).max_deviation();
    report(label + " N=1000", dl1 <= 0.15 && da1 <= 0.15 && f.seconds_1000 < 300.0,
           "max-abs linear " + fmt("%.4f", dl1) + ", actual " + fmt("%.4f", da1) + " (tol 0.15), " +
               fmt("%.0f", f.seconds_1000) + " s for both");
    report(label + " N=4000", dl4 <= 0.08 && da4 <= 0.08,
           "max-abs linear " + fmt("%.4f", dl4) + ", actual " + fmt("%.4f", da4) + " (tol 0.08)");

    const auto mutual = compare(f.linear_4000, f.actual_4000, 1.0);
    report(label + " linear/actual mutual envelope", mutual.min_inside_fraction() >= 0.95,
           "fraction of points within 3 combined SE " + fmt("%.3f", mutual.min_inside_fraction()) + " (min 0.95)");

    if (u == Unraveling::quadrature) {
        double worst_y = 0.0;
        for (const auto* r : {&f.linear_4000, &f.actual_4000})
            for (std::size_t i = 0; i < r->grid.size(); ++i)
                worst_y = std::max({worst_y, std::abs(r->mean_bloch[i].y), r->bloch_se[i].y});
        const Scenario act(figure_params(u, Variant::actual));
        for (std::uint64_t k = 0; k < 20; ++k)
            for (const auto& b : run_trajectory(act, 0, k).bloch) worst_y = std::max(worst_y, std::abs(b.y));
        report("quadrature realness", worst_y == 0.0,
               "max |y| = " + fmt("%g", worst_y) + " over 8000 ensemble trajectories and 20 records");
    }
}

void norm_criteria(const FigureRuns& coherent, const FigureRuns& quadrature) {
    constexpr std::uint64_t subset = 200;
    double worst = 0.0, worst_ratio = 1e300;
    std::ostringstream detail;
    for (const auto* f : {&coherent, &quadrature}) {
        const auto& drift = f->actual_4000.max_norm_drift;
        worst = std::max(worst, *std::max_element(drift.begin(), drift.end()));
    }
    detail << "max | |psi| - 1 | over 8000 trajectories = " << fmt("%.3g", worst) << " (tol 1e-3)";
    report("actual-mode norm", worst <= 1e-3, detail.str());

    detail.str("");
    for (const auto u : {Unraveling::coherent, Unraveling::quadrature}) {
        const auto& coarse = (u == Unraveling::coherent ? coherent : quadrature).actual_4000.max_norm_drift;
        const auto fine = run_ensemble(Scenario(figure_params(u, Variant::actual, 5e-5)), subset, 0, all_workers);
        const double a = *std::max_element(coarse.begin(), coarse.begin() + subset);
        const double b = *std::max_element(fine.max_norm_drift.begin(), fine.max_norm_drift.end());
        worst_ratio = std::min(worst_ratio, a / b);
        detail << to_string(u) << " " << fmt("%.3g", a) << " -> " << fmt("%.3g", b) << " (x" << fmt("%.2f", a / b)
               << ")  ";
    }
    detail << "over trajectories 0-199, need x3";
    report("actual-mode norm dt halving", worst_ratio >= 3.0, detail.str());
}

void markov_criteria() {
    const Stopwatch clock;
    const TimeGrid grid = TimeGrid::covering(1e-3, 5.0);
    const auto lindblad = lindblad_bloch(1.0, grid);
    double lowest_eig = 1.0;
    std::ostringstream detail;
    bool ok = true;
    for (const auto u : {Unraveling::heterodyne, Unraveling::homodyne}) {
        for (const auto v : {Variant::actual, Variant::linear}) {
            const auto r = run_ensemble(Scenario(markov_params(u, v)), 10000, 0, all_workers);
            lowest_eig = std::min(lowest_eig, min_eigenvalue_over(r));
            double worst = 0.0;
            for (std::size_t i = 0; i < grid.size(); i += 5) {
                const double d = std::abs(r.mean_bloch[i].z - lindblad[i].z);
                if (d > 0.0) worst = std::max(worst, d / r.bloch_se[i].z);
            }
            ok = ok && worst <= 5.0;
            detail << to_string(u) << "/" << to_string(v) << " " << fmt("%.2f", worst) << " SE  ";
        }
    }
    report("Markov limits vs Lindblad", ok, detail.str() + "(tol 5 SE, every 5th point)");

    auto p = markov_params(Unraveling::heterodyne, Variant::linear);
    const auto ito = run_ensemble(Scenario(p), 10000, 1, all_workers);
    p.markov_scheme = MarkovScheme::stratonovich_midpoint;
    const auto strat = run_ensemble(Scenario(p), 10000, 1, all_workers);
    lowest_eig = std::min({lowest_eig, min_eigenvalue_over(ito), min_eigenvalue_over(strat)});
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); i += 5) {
        const double d = std::abs(ito.mean_bloch[i].z - strat.mean_bloch[i].z);
        const double se = std::hypot(ito.bloch_se[i].z, strat.bloch_se[i].z);
        if (d > 0.0) worst = std::max(worst, d / se);
    }
    report("Ito vs Stratonovich linear heterodyne", worst <= 5.0,
           "worst z difference " + fmt("%.3f", worst) + " combined SE (tol 5), " + fmt("%.0f", clock.seconds()) +
               " s for the Markov ensembles");
    report("Markov ensemble positivity", lowest_eig >= -1e-12, "min eigenvalue " + fmt("%.3g", lowest_eig));
}

void positivity_and_determinism(const FigureRuns& coherent, const FigureRuns& quadrature) {
    double lowest = 1.0;
    for (const auto* f : {&coherent, &quadrature})
        for (const auto* r : {&f->linear_1000, &f->actual_1000, &f->linear_4000, &f->actual_4000})
            lowest = std::min(lowest, min_eigenvalue_over(*r));
    report("ensemble positivity", lowest >= -1e-12, "min eigenvalue over the figure ensembles " + fmt("%.3g", lowest));

    bool same = true;
    for (const auto u : {Unraveling::coherent, Unraveling::quadrature, Unraveling::heterodyne, Unraveling::homodyne}) {
        for (const auto v : {Variant::linear, Variant::actual}) {
            auto p = figure_params(u, v, 1e-3);
            p.t_final = 1.0;
            if (is_markov(u)) p.gamma = 1.0;
            const Scenario sc(p);
            const auto one = run_ensemble(sc, 100, 3, {1});
            same = same && bitwise_equal(one, run_ensemble(sc, 100, 3, {2})) &&
                   bitwise_equal(one, run_ensemble(sc, 100, 3, {8}));
        }
    }
    report("determinism across workers", same, "1, 2 and 8 workers, 8 configurations, N=100, T=1, dt=1e-3");
}

void actual_beats_linear(const FigureRuns& coherent) {
    const Scenario lin(figure_params(Unraveling::coherent, Variant::linear));
    const Scenario act(figure_params(Unraveling::coherent, Variant::actual));
    const auto exact = exact_bloch(1.0, 2.0, lin.grid());
    int wins = 0;
    std::ostringstream detail;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        double dl, da;
        if (seed == 0) {
            dl = compare(coherent.linear_1000, lin.grid(), exact, 1.0).max_deviation();
            da = compare(coherent.actual_1000, act.grid(), exact, 1.0).max_deviation();
        } else {
            dl = compare(run_ensemble(lin, 1000, seed, all_workers), lin.grid(), exact, 1.0).max_deviation();
            da = compare(run_ensemble(act, 1000, seed, all_workers), act.grid(), exact, 1.0).max_deviation();
        }
        if (da <= dl) ++wins;
        detail << fmt("%.3f", da) << "/" << fmt("%.3f", dl) << " ";
    }
    report("actual beats linear", wins >= 3,
           std::to_string(wins) + " of 5 seeds (actual/linear max-abs: " + detail.str() + ")");
}

}  // namespace

int main() {
    try {
        exact_closed_form();
        noise_statistics();
        stepper_oracle();

        const FigureRuns coherent = figure(Unraveling::coherent);
        figure_criteria("Fig. 1 coherent", Unraveling::coherent, coherent);
        const FigureRuns quadrature = figure(Unraveling::quadrature);
        figure_criteria("Fig. 3 quadrature", Unraveling::quadrature, quadrature);

        norm_criteria(coherent, quadrature);
        positivity_and_determinism(coherent, quadrature);
        actual_beats_linear(coherent);
        markov_criteria();
    } catch (const std::exception& e) {
        std::printf("FAIL  acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
