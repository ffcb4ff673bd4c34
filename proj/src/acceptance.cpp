#include "tailwalk/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "oracles/matrix_exponential.hpp"
#include "tailwalk/asymptotics.hpp"
#include "tailwalk/branching.hpp"
#include "tailwalk/density.hpp"
#include "tailwalk/errors.hpp"
#include "tailwalk/front.hpp"
#include "tailwalk/green.hpp"
#include "tailwalk/provider.hpp"

namespace tailwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

long lattice_side(const JumpKernel& k, double t, double tol) {
    long side = 1024;
    while (lattice_aliasing_estimate(k, t, side) > tol) side *= 2;
    return side;
}

CriterionResult lattice_oracle() {
    CriterionResult r;
    r.id = 1;
    r.name = "oracle equivalence (lattice)";
    r.runtime_limit = 5.0;
    const long side = 32;
    const auto k = make_lattice_zipf(1, 3.0);
    const double c = 1.0 / (2.0 * (std::riemann_zeta(4.0) - 1.0));
    auto weight = [&](long z) { return z == 0 ? 0.0 : c / std::pow(1.0 + std::abs(double(z)), 4.0); };
    double worst = 0.0;
    for (double t : {0.5, 2.0, 5.0}) {
        const auto f = solve_series_lattice(k, t, side, {kInf});
        const auto oracle = oracles::torus_walk_1d(weight, 200000, side, t);
        double e = 0.0;
        std::vector<long> j(1);
        for (j[0] = -side / 2; j[0] < side / 2; ++j[0]) {
            e = std::max(e, std::abs(f.value(j) - oracle[std::size_t((j[0] + side) % side)]));
        }
        r.details["max_abs_diff_t" + sci(t)] = e;
        worst = std::max(worst, e);
    }
    r.details["threshold"] = 1e-10;
    r.pass = worst < 1e-10;
    r.summary = "max |series - expm| = " + sci(worst) + " (< 1e-10)";
    return r;
}

CriterionResult normalization() {
    CriterionResult r;
    r.id = 2;
    r.name = "normalization and symmetry";
    const auto cont = make_cauchy2_1d();
    const auto latt = make_lattice_zipf(1, 3.0);
    double worst_mass = 0.0, worst_gap = 0.0;
    for (double t : {1.0, 10.0, 100.0}) {
        const double radius = std::max(300.0, 15.0 * t);
        const auto a = solve_fourier_continuum(cont, t, plan_continuum_grid(cont, t, radius));
        const auto side = lattice_side(latt, t, 1e-9);
        const auto b = solve_series_lattice(latt, t, side);
        for (const auto* f : {&a, &b}) {
            const std::string key = f->method + "_t" + sci(t);
            r.details[key + "_mass_error"] = std::abs(f->mass() - 1.0);
            r.details[key + "_mirror_gap"] = f->max_mirror_gap();
            worst_mass = std::max(worst_mass, std::abs(f->mass() - 1.0));
            worst_gap = std::max(worst_gap, f->max_mirror_gap());
        }
    }
    r.pass = worst_mass < 1e-6 && worst_gap == 0.0;
    r.summary = "max |mass - 1| = " + sci(worst_mass) + " (< 1e-6), max mirror gap = " + sci(worst_gap) + " (= 0)";
    return r;
}

CriterionResult clt_zone() {
    CriterionResult r;
    r.id = 3;
    r.name = "CLT zone";
    const auto k = make_cauchy2_1d();
    const auto m = make_model(k);
    const double t = 100.0;
    const auto f = solve_fourier_continuum(k, t, plan_continuum_grid(k, t, 1500.0));
    double worst = 0.0, at = 0.0;
    for (int i = -80; i <= 80; ++i) {
        std::vector<double> x{0.25 * i};
        const double e = std::abs(f.interpolate(x) / gaussian_term(m, t, x) - 1.0);
        if (e > worst) {
            worst = e;
            at = x[0];
        }
    }
    r.details["max_relative_error"] = worst;
    r.details["at_x"] = at;
    r.details["threshold"] = 0.05;
    r.pass = worst < 0.05;
    r.summary = "max |p/E - 1| over |x| <= 20 = " + sci(worst) + " at x = " + sci(at) + " (< 0.05)";
    return r;
}

CriterionResult tail_zone() {
    CriterionResult r;
    r.id = 4;
    r.name = "tail zone";
    r.runtime_limit = 120.0;
    const auto k = make_cauchy2_1d();
    const double c0 = 2.0 / std::numbers::pi;
    bool ok = true;
    double worst = 0.0;
    std::string trend;
    for (double t : {10.0, 30.0}) {
        const auto f = solve_fourier_continuum(k, t, plan_continuum_grid(k, t, 1.05 * std::sqrt(400.0 * t)));
        std::vector<double> err;
        for (double q : {50.0, 100.0, 200.0, 400.0}) {
            std::vector<double> x{std::sqrt(q * t)};
            err.push_back(std::abs(f.interpolate(x) * std::pow(x[0], 4) / t - c0) / c0);
            r.details["error_t" + sci(t) + "_q" + sci(q)] = err.back();
            worst = std::max(worst, err.back());
            ok = ok && err.back() < 0.15;
        }
        ok = ok && err.back() < err.front();
        trend += (trend.empty() ? "" : ", ") + ("t=" + sci(t) + ": " + sci(err.front()) + " -> " + sci(err.back()));
    }
    r.details["threshold"] = 0.15;
    r.pass = ok;
    r.summary = "max error over x^2/t in {50..400} = " + sci(worst) + " (< 0.15); " + trend;
    return r;
}

CriterionResult monte_carlo(std::uint64_t seed) {
    CriterionResult r;
    r.id = 5;
    r.name = "Monte-Carlo consistency";
    const auto k = make_cauchy2_1d();
    const double t = 10.0;
    const long n = 1000000;
    const auto cells = make_grid(1, 1.0, 60);
    const auto exact = cell_probabilities(k, t, cells);
    const auto e = simulate_ctrw(k, t, n, seed, cells);
    long eligible = 0, within = 0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        if (exact[i] * n < 20.0) continue;
        ++eligible;
        within += std::abs(e.mean[i] - exact[i]) <= 3.0 * std::sqrt(exact[i] * (1.0 - exact[i]) / n);
    }
    const double frac = eligible ? double(within) / double(eligible) : 0.0;
    r.details["eligible_cells"] = eligible;
    r.details["cells_within_3se"] = within;
    r.details["fraction"] = frac;
    r.pass = eligible > 0 && frac >= 0.99;
    r.summary = std::to_string(within) + "/" + std::to_string(eligible) + " cells within 3 SE (>= 99%)";
    return r;
}

CriterionResult front_slope() {
    CriterionResult r;
    r.id = 6;
    r.name = "front slope";
    r.runtime_limit = 120.0;
    const auto k = make_cauchy2_1d();
    const auto m = make_model(k, 0.5);
    SolverProvider sp(k, {1e-3, 0.5});
    std::vector<double> times;
    for (double t = 20.0; t <= 60.0; t += 5.0) times.push_back(t);
    const auto curve = front_curve(sp, m, times);
    for (const auto& p : curve.points) r.details["r_t" + sci(p.t)] = p.r_numeric;
    const double rel = std::abs(curve.fitted_slope / 0.125 - 1.0);
    r.details["slope"] = curve.fitted_slope;
    r.details["relative_error"] = rel;
    r.pass = curve.points.size() == times.size() && rel < 0.05;
    r.summary = "slope = " + sci(curve.fitted_slope) + ", relative error " + sci(rel) + " (< 0.05)";
    return r;
}

CriterionResult green_asymptotic() {
    CriterionResult r;
    r.id = 7;
    r.name = "Green function asymptotic";
    r.runtime_limit = 180.0;
    const auto k = make_cauchy2_1d();
    const auto m = make_model(k);
    bool ok = true;
    double worst = 0.0, worst_mass = 0.0;
    for (double lam : {0.5, 1.0, 2.0}) {
        SolverProvider sp(k, {1e-13});
        std::vector<double> xs;
        for (double q : {500.0, 2000.0, 8000.0}) xs.push_back(std::sqrt(q / lam));
        const auto s = green_function(sp, m, lam, xs, {1e-14});
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double e = s.entries[i].normalized_error;
            r.details["error_lambda" + sci(lam) + "_q" + sci(lam * xs[i] * xs[i])] = e;
            worst = std::max(worst, e);
            ok = ok && e < 0.1 && (i == 0 || e < s.entries[i - 1].normalized_error);
        }
        SolverProvider field_provider(k, {1e-12});
        const auto g = green_field(field_provider, m, lam, make_grid(1, 0.1, 1500), {1e-13});
        const double mass_error = std::abs(g.mass() - 1.0 / lam);
        r.details["mass_error_lambda" + sci(lam)] = mass_error;
        worst_mass = std::max(worst_mass, mass_error);
        ok = ok && mass_error < 1e-4;
    }
    r.pass = ok;
    r.summary = "max normalized error = " + sci(worst) + " (< 0.1, decreasing), max |int G - 1/lambda| = " +
                sci(worst_mass) + " (< 1e-4)";
    return r;
}

CriterionResult branching_moment(std::uint64_t seed) {
    CriterionResult r;
    r.id = 8;
    r.name = "branching first moment";
    r.runtime_limit = 300.0;
    const auto k = make_cauchy2_1d();
    const BranchingParams params{0.5, 0.25};
    const long n = 10000;
    const std::vector<double> times{4.0, 6.0};
    const auto ens = simulate_branching(k, params, times, n, seed);
    const auto st = population_statistics(ens, 0);
    const double z = std::abs(st.mean - std::numbers::e) / st.stderr_;
    const auto cells = make_grid(1, 1.0, 60);
    const auto f = estimate_first_moment(ens, 6.0, cells);
    const auto p = cell_probabilities(k, 6.0, cells);
    const double g = std::exp(params.delta() * 6.0);
    long eligible = 0, within = 0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (g * p[c] * n < 10.0) continue;
        ++eligible;
        within += std::abs(f.mean[c] - g * p[c]) <= 3.0 * f.stderr_[c];
    }
    const double frac = eligible ? double(within) / double(eligible) : 0.0;
    r.details["mean_population_t4"] = st.mean;
    r.details["stderr_t4"] = st.stderr_;
    r.details["eligible_cells"] = eligible;
    r.details["cells_within_3se"] = within;
    r.pass = z < 3.0 && eligible > 0 && frac >= 0.95;
    r.summary = "mean population at t = 4: " + sci(st.mean) + " (" + sci(z) + " SE from e); " + std::to_string(within) +
                "/" + std::to_string(eligible) + " cells within 3 SE (>= 95%)";
    return r;
}

template <class F>
CriterionResult timed(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = f();
    } catch (const std::exception& e) {
        r.pass = false;
        r.summary = std::string("error: ") + e.what();
    }
    r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.runtime_limit > 0.0 && r.runtime > r.runtime_limit) {
        r.pass = false;
        r.summary += "; runtime over " + sci(r.runtime_limit) + " s";
    }
    return r;
}

}  // namespace

std::vector<CriterionResult> run_criteria(const AcceptanceOptions& options, const CriterionCallback& on_result) {
    std::vector<std::function<CriterionResult()>> jobs{
        [] { return lattice_oracle(); },
        [] { return normalization(); },
        [] { return clt_zone(); },
        [] { return tail_zone(); },
        [&] { return monte_carlo(options.seed); },
        [] { return front_slope(); },
        [] { return green_asymptotic(); },
        [&] { return branching_moment(options.seed + 1); },
    };
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto r = timed(jobs[i]);
        r.id = int(i + 1);
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

nlohmann::ordered_json acceptance_body(const std::vector<CriterionResult>& results) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& r : results) {
        nlohmann::ordered_json j;
        j["id"] = r.id;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["summary"] = r.summary;
        j["details"] = r.details;
        if (r.runtime_limit > 0.0) j["runtime_limit_s"] = r.runtime_limit;
        list.push_back(std::move(j));
        all = all && r.pass;
    }
    nlohmann::ordered_json body;
    body["all_pass"] = all;
    body["criteria"] = std::move(list);
    return body;
}

bool AcceptanceRun::all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

AcceptanceRun run_acceptance(const AcceptanceOptions& options, const ReportHeader& header,
                             const CriterionCallback& on_result) {
    AcceptanceRun run;
    run.results = run_criteria(options, on_result);
    const std::string first = render_json(header, acceptance_body(run.results));
    const auto start = std::chrono::steady_clock::now();
    const auto again = run_criteria(options);
    const std::string second = render_json(header, acceptance_body(again));

    CriterionResult det;
    det.id = 9;
    det.name = "determinism";
    det.pass = first == second;
    det.details["report_bytes"] = static_cast<long>(first.size());
    det.summary = det.pass ? "rerun report is byte-identical (" + std::to_string(first.size()) + " bytes)"
                           : "rerun report differs";
    det.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(det);
    run.results.push_back(det);
    run.report = render_json(header, acceptance_body(run.results));
    return run;
}

std::string format_result(const CriterionResult& r) {
    char t[32];
    std::snprintf(t, sizeof t, "%.1f s", r.runtime);
    return std::string(r.pass ? "PASS" : "FAIL") + "  " + std::to_string(r.id) + "  " + r.name + ": " + r.summary + " (" +
           t + ")";
}

}  // namespace tailwalk
