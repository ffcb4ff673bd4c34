#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "tailwalk/acceptance.hpp"
#include "tailwalk/asymptotics.hpp"
#include "tailwalk/branching.hpp"
#include "tailwalk/density.hpp"
#include "tailwalk/errors.hpp"
#include "tailwalk/front.hpp"
#include "tailwalk/green.hpp"
#include "tailwalk/provider.hpp"
#include "tailwalk/report.hpp"
#include "tailwalk/spectral.hpp"

namespace tailwalk::cli {

namespace {

using json = nlohmann::ordered_json;

ReportHeader header(const RunContext& ctx, const std::string& command) {
    return {command, config_hash(ctx.config)};
}

std::string path(const RunContext& ctx, const std::string& name) {
    return (std::filesystem::path(ctx.out_dir) / name).string();
}

void emit(const RunContext& ctx, const std::string& name, const std::string& text) {
    write_text(path(ctx, name), text);
    std::printf("wrote %s\n", path(ctx, name).c_str());
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback) {
    return v.empty() ? fallback : v;
}

/// Unit directions from the config (the first axis when none are given).
std::vector<std::vector<double>> directions(const ExperimentConfig& c) {
    const auto d = std::size_t(c.kernel.dimension);
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < c.sweep.directions.size(); i += d) {
        std::vector<double> e(c.sweep.directions.begin() + long(i), c.sweep.directions.begin() + long(i + d));
        double n = 0.0;
        for (double v : e) n += v * v;
        if (!(n > 0.0)) throw ConfigError("'sweep.directions' contains a zero vector", 0);
        for (double& v : e) v /= std::sqrt(n);
        out.push_back(std::move(e));
    }
    if (out.empty()) {
        out.emplace_back(d, 0.0);
        out.back()[0] = 1.0;
    }
    return out;
}

std::vector<std::string> coordinate_columns(int d, const std::string& prefix = "x") {
    if (d == 1) return {prefix};
    std::vector<std::string> out;
    for (int i = 1; i <= d; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

json budget_json(const ErrorBudget& b) {
    json j;
    j["truncation"] = b.truncation;
    j["aliasing"] = b.aliasing;
    j["quadrature"] = b.quadrature;
    j["clipped"] = b.clipped;
    j["outside"] = b.outside;
    return j;
}

/// Assumption checks gate every analytic command.
void require_assumptions(const JumpKernel& k) { validate_assumptions(k); }

DensityField deterministic_field(const JumpKernel& k, const SolverConfig& s, double t, double radius) {
    if (k.support() == Support::Lattice) {
        if (s.method == "fourier_continuum") throw ConfigError("'fourier_continuum' needs a continuum kernel", 0);
        long side = 4;
        while (double(side) < 2.0 * radius + 2.0) side *= 2;
        while (lattice_aliasing_estimate(k, t, side) > s.tolerance && side < (1L << 26)) side *= 2;
        return solve_series_lattice(k, t, side, {s.tolerance});
    }
    if (s.method == "series_lattice") throw ConfigError("'series_lattice' needs a lattice kernel", 0);
    ContinuumSolveOptions opts;
    opts.tolerance = s.tolerance;
    opts.symbol_cutoff = std::min(opts.symbol_cutoff, 1e-2 * s.tolerance);
    return solve_fourier_continuum(k, t, plan_continuum_grid(k, t, radius, s.max_spacing, opts.symbol_cutoff), opts);
}

}  // namespace

int run_verify(const RunContext& ctx) {
    const auto k = make_kernel(ctx.config.kernel);
    const auto report = check_assumptions(k);
    CsvTable csv(header(ctx, "verify"), {"check", "status", "worst", "threshold"});
    for (const auto& c : report.checks) csv.add(c.name).add(c.status).add(c.worst).add(c.threshold).end_row();

    json body;
    body["kernel"] = k.id();
    body["assumptions"] = report.to_json();
    body["sigma2"] = k.sigma2();
    body["sigma2_small_k"] = richardson_sigma2(k);
    if (k.has_power_tail()) {
        body["alpha"] = k.alpha();
        body["c0"] = k.c0();
        try {
            const double r1 = k.support() == Support::Lattice ? 40.0 : 20.0;
            const auto fit = extract_tail_coefficients(k, r1, 16.0 * r1);
            json f;
            f["alpha_hat"] = fit.alpha_hat;
            f["c0_hat"] = fit.c0_hat;
            f["residual"] = fit.residual;
            f["r1"] = fit.r1;
            f["r2"] = fit.r2;
            body["tail_fit"] = f;
        } catch (const Error& e) {
            body["tail_fit"] = std::string("unavailable: ") + e.what();
        }
    }
    emit(ctx, "verify.csv", csv.str());
    emit(ctx, "verify.json", render_json(header(ctx, "verify"), body));
    for (const auto& c : report.checks) std::printf("%-24s %s\n", c.name.c_str(), c.status.c_str());
    if (const auto* f = report.first_failure()) {
        std::fprintf(stderr, "assumption violated: %s\n", f->name.c_str());
        return 3;
    }
    return 0;
}

int run_density(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto k = make_kernel(c.kernel);
    require_assumptions(k);
    const int d = k.dimension();
    const auto times = or_default(c.sweep.times, {1.0});

    auto cols = std::vector<std::string>{"t"};
    for (auto& s : coordinate_columns(d)) cols.push_back(s);
    cols.insert(cols.end(), {"value", "stderr"});
    CsvTable csv(header(ctx, "density"), cols);
    json summary = json::array();
    std::vector<long> j(static_cast<std::size_t>(d));

    for (double t : times) {
        const double radius = c.solver.radius > 0.0 ? c.solver.radius : std::max(10.0, 10.0 * std::sqrt(k.sigma2() * t));
        json s;
        s["t"] = t;
        if (c.solver.method == "ctrw") {
            const double h = k.support() == Support::Lattice ? 1.0 : c.solver.max_spacing;
            const auto cells = make_grid(d, h, long(std::ceil(radius / h)), k.support());
            const auto e = simulate_ctrw(k, t, c.solver.paths, c.require_seed("ctrw density"), cells);
            for (std::size_t i = 0; i < cells.size(); ++i) {
                cells.unflatten(i, j);
                csv.add(t);
                for (long v : j) csv.add(cells.coordinate(v));
                csv.add(e.mean[i] / cells.cell_volume()).add(e.stderr_[i] / cells.cell_volume()).end_row();
            }
            s["method"] = e.method;
            s["paths"] = e.samples;
            s["outside_fraction"] = double(e.outside) / double(e.samples);
            s["displacement_mean"] = e.displacement_mean;
            s["displacement_var"] = e.displacement_var;
        } else {
            const auto f = deterministic_field(k, c.solver, t, radius);
            for (std::size_t i = 0; i < f.grid.size(); ++i) {
                f.grid.unflatten(i, j);
                bool inside = true;
                for (long v : j) inside = inside && std::abs(f.grid.coordinate(v)) <= radius;
                if (!inside) continue;
                csv.add(t);
                for (long v : j) csv.add(f.grid.coordinate(v));
                csv.add(f.values[i]).add(0.0).end_row();
            }
            s["method"] = f.method;
            s["spacing"] = f.grid.spacing;
            s["atom"] = f.atom;
            s["mass"] = f.mass();
            s["mirror_gap"] = f.max_mirror_gap();
            s["budget"] = budget_json(f.budget);
        }
        summary.push_back(s);
    }
    json body;
    body["kernel"] = k.id();
    body["fields"] = summary;
    emit(ctx, "density.csv", csv.str());
    emit(ctx, "density.json", render_json(header(ctx, "density"), body));
    return 0;
}

int run_asym(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto k = make_kernel(c.kernel);
    require_assumptions(k);
    const auto m = make_model(k, c.sweep.delta);
    const auto times = or_default(c.sweep.times, {10.0});
    const auto e = directions(c).front();
    SolverProvider sp(k, {c.solver.tolerance, 0.0, 0.0, c.solver.max_spacing});

    CsvTable csv(header(ctx, "asym"),
                 {"t", "r", "p_solver", "tail_formula", "gaussian", "normalized_tail", "regime", "reliable"});
    json per_t = json::array();
    std::vector<double> x(e.size());
    for (double t : times) {
        const double sig = std::sqrt(k.sigma2() * t);
        const auto rs = or_default(c.sweep.x, {2.0 * sig, std::sqrt(50.0 * std::max(t, 1.0)), std::sqrt(400.0 * std::max(t, 1.0))});
        for (double r : rs) {
            for (std::size_t i = 0; i < e.size(); ++i) x[i] = r * e[i];
            const auto v = theorem1_density(m, t, x, ctx.force);
            const double p = sp.density(t, x);
            const double norm = r > 0.0 ? p * std::pow(std::abs(r), m.dimension + m.alpha) / (t * m.c0_at(e)) : 0.0;
            csv.add(t).add(r).add(p).add(v.value).add(v.gaussian).add(norm).add(to_string(classify_regime(m, t, x)))
                .add(long(v.reliable)).end_row();
        }
        json s;
        s["t"] = t;
        if (t >= 1.0) s["crossover_radius"] = crossover_radius(m, t, e);
        per_t.push_back(s);
    }
    json body;
    body["kernel"] = k.id();
    body["forced"] = ctx.force;
    body["direction"] = e;
    body["times"] = per_t;
    emit(ctx, "asym.csv", csv.str());
    emit(ctx, "asym.json", render_json(header(ctx, "asym"), body));
    return 0;
}

int run_front(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto k = make_kernel(c.kernel);
    require_assumptions(k);
    const auto m = make_model(k, c.sweep.delta);
    std::vector<double> times = c.sweep.times;
    if (times.empty()) {
        for (double t = 20.0; t <= 60.0; t += 5.0) times.push_back(t);
    }
    CsvTable csv(header(ctx, "front"), {"direction", "t", "r_numeric", "r_tail_formula", "r_growth_law"});
    json curves = json::array();
    const auto dirs = directions(c);
    for (std::size_t di = 0; di < dirs.size(); ++di) {
        SolverProvider sp(k, {c.solver.tolerance, c.sweep.delta, 0.0, c.solver.max_spacing});
        Theorem1Provider tp(m);
        const auto curve = front_curve(sp, m, times, dirs[di]);
        for (const auto& p : curve.points) {
            const auto rt = front_radius(tp, m.delta, p.t, dirs[di]);
            csv.add(long(di)).add(p.t).add(p.r_numeric).add(rt ? *rt : NAN).add(p.r_theorem2).end_row();
        }
        json j;
        j["direction"] = curve.direction;
        j["fitted_slope"] = curve.fitted_slope;
        j["fitted_intercept"] = curve.fitted_intercept;
        j["expected_slope"] = m.delta / (m.dimension + m.alpha);
        j["points"] = long(curve.points.size());
        curves.push_back(j);
    }
    json body;
    body["kernel"] = k.id();
    body["delta"] = m.delta;
    body["curves"] = curves;
    emit(ctx, "front.csv", csv.str());
    emit(ctx, "front.json", render_json(header(ctx, "front"), body));
    return 0;
}

int run_green(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto k = make_kernel(c.kernel);
    require_assumptions(k);
    const auto m = make_model(k, c.sweep.delta);
    const auto lambdas = or_default(c.sweep.lambdas, {1.0});
    const auto e = directions(c).front();
    const auto d = e.size();

    CsvTable csv(header(ctx, "green"),
                 {"lambda", "r", "numeric", "atom", "asymptotic", "normalized_error", "reliable", "truncation_bound"});
    json per_lambda = json::array();
    for (double lam : lambdas) {
        const auto rs = or_default(c.sweep.x, {std::sqrt(500.0 / lam), std::sqrt(2000.0 / lam), std::sqrt(8000.0 / lam)});
        std::vector<double> xs;
        for (double r : rs) {
            for (std::size_t i = 0; i < d; ++i) xs.push_back(r * e[i]);
        }
        SolverProvider sp(k, {c.solver.tolerance, 0.0, 0.0, c.solver.max_spacing});
        const auto s = green_function(sp, m, lam, xs, {c.sweep.green_tolerance});
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const auto& g = s.entries[i];
            const bool origin = rs[i] == 0.0;
            csv.add(lam).add(rs[i]).add(g.numeric).add(g.atom).add(origin ? NAN : g.theorem3)
                .add(origin ? NAN : g.normalized_error).add(long(g.theorem3_reliable)).add(g.truncation_bound).end_row();
        }
        json j;
        j["lambda"] = lam;
        j["horizon"] = s.horizon;
        j["time_nodes"] = long(s.time_nodes);
        j["truncation_bound"] = s.truncation_bound;
        per_lambda.push_back(j);
    }
    json body;
    body["kernel"] = k.id();
    body["direction"] = e;
    body["lambdas"] = per_lambda;
    emit(ctx, "green.csv", csv.str());
    emit(ctx, "green.json", render_json(header(ctx, "green"), body));
    return 0;
}

int run_branch(const RunContext& ctx) {
    const auto& c = ctx.config;
    const std::uint64_t seed = c.require_seed("branch");
    if (c.branching.times.empty()) throw ConfigError("'branching.times' is required by branch", 0);
    const auto k = make_kernel(c.kernel);
    const BranchingParams params{c.branching.beta, c.branching.mu};
    const auto ens = simulate_branching(k, params, c.branching.times, c.branching.runs, seed, c.branching.cap);
    const int d = k.dimension();
    const double h = k.support() == Support::Lattice ? 1.0 : c.branching.cell_width;
    const auto cells = make_grid(d, h, c.branching.half_cells, k.support());

    json snaps = json::array();
    std::vector<long> j(static_cast<std::size_t>(d));
    for (std::size_t s = 0; s < ens.snapshot_times.size(); ++s) {
        const double t = ens.snapshot_times[s];
        const auto st = population_statistics(ens, s);
        json js;
        js["t"] = t;
        js["mean_population"] = st.mean;
        js["stderr"] = st.stderr_;
        js["expected"] = std::exp(params.delta() * t);
        js["effective_runs"] = st.effective_runs;
        js["truncated_fraction"] = st.truncated_fraction;
        if (st.effective_runs == 0) {
            snaps.push_back(js);
            continue;
        }
        const auto f = estimate_first_moment(ens, t, cells);
        auto cols = coordinate_columns(d);
        cols.insert(cols.end(), {"mean_count", "stderr", "n_effective_runs"});
        CsvTable csv(header(ctx, "branch"), cols);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            cells.unflatten(i, j);
            for (long v : j) csv.add(cells.coordinate(v));
            csv.add(f.mean[i]).add(f.stderr_[i]).add(f.samples).end_row();
        }
        if (const auto r = empirical_front(f)) js["empirical_front"] = *r;
        js["outside_mean"] = double(f.outside) / double(f.samples);
        emit(ctx, "branch_snapshot_" + std::to_string(s) + ".csv", csv.str());
        snaps.push_back(js);
    }
    json body;
    body["kernel"] = k.id();
    body["beta"] = params.beta;
    body["mu"] = params.mu;
    body["runs"] = ens.n_runs;
    body["cap"] = ens.cap;
    body["seed"] = seed;
    body["snapshots"] = snaps;
    emit(ctx, "branch.json", render_json(header(ctx, "branch"), body));
    return 0;
}

int run_acceptance_suite(const RunContext& ctx) {
    AcceptanceOptions opts;
    opts.seed = ctx.config.require_seed("acceptance");
    const auto run = run_acceptance(opts, header(ctx, "acceptance"), [](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
    });
    emit(ctx, "acceptance.json", run.report);
    return run.all_pass() ? 0 : 1;
}

}  // namespace tailwalk::cli
