#include "alm_cli/app.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "alm/catalog.hpp"
#include "alm/diagnostics.hpp"
#include "alm/errors.hpp"
#include "alm/rates.hpp"
#include "alm/solver.hpp"
#include "alm_cli/trace.hpp"

namespace alm::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string &s, char sep = ',') {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            out.push_back(parse_double(item));
        } catch (const DataError &) {
            throw UsageError("bad number '" + item + "' in '" + s + "'");
        }
    }
    if (out.empty())
        throw UsageError("empty list");
    return out;
}

Vec parse_vec(const std::string &s, Eigen::Index n, const std::string &what) {
    const std::vector<double> v = parse_list(s);
    if (static_cast<Eigen::Index>(v.size()) != n)
        throw UsageError(what + " needs " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
    return Eigen::Map<const Vec>(v.data(), n);
}

std::string join(const Vec &v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + format_double(v(i));
    return s;
}

CatalogProblem load_problem(const std::string &id) {
    try {
        return catalog_problem(id);
    } catch (const InputError &) {
        std::string known;
        for (const std::string &k : catalog_ids())
            known += " " + k;
        throw UsageError("unknown problem '" + id + "' (known:" + known + ")");
    }
}

nlohmann::json num(double v) {
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return nullptr;
    return v > 0 ? "inf" : "-inf";
}

nlohmann::json report_json(const DiagnosticsReport &r, const std::string &problem) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["problem"] = problem;
    j["check"] = r.check;
    j["verdict"] = to_string(r.verdict);
    j["estimate"] = num(r.estimate);
    j["unbounded"] = r.unbounded;
    j["samples"] = r.samples;
    j["excluded"] = r.excluded;
    j["seed"] = r.seed;
    nlohmann::json m = nlohmann::json::object();
    for (const auto &[k, v] : r.metrics)
        m[k] = num(v);
    j["metrics"] = m;
    nlohmann::json w = nlohmann::json::array();
    for (Eigen::Index i = 0; i < r.witness.size(); ++i)
        w.push_back(num(r.witness(i)));
    j["witness"] = w;
    j["notes"] = r.notes;
    return j;
}

// ---------------------------------------------------------------- solve

struct SolveOpts {
    std::string id;
    std::optional<double> rho;
    std::string rho_geometric;
    double c_hat = 100;
    double stop = 1e-9;
    double sigma = 1, p = 1.5, c_lin = 0.1;
    int max_outer = 200;
    int max_inner = 5000;
    double inner_tol = 1e-12;
    std::string x0, y0;
    std::uint64_t seed = 0;
    std::string out;
};

RhoSchedule parse_schedule(const SolveOpts &o) {
    if (!o.rho_geometric.empty()) {
        const std::vector<double> v = parse_list(o.rho_geometric, ':');
        if (v.size() < 2 || v.size() > 3)
            throw UsageError("--rho-geometric expects R0:TAU[:MAX]");
        return RhoSchedule::geometric(v[0], v[1], v.size() == 3 ? v[2] : kInf);
    }
    return RhoSchedule::constant(o.rho.value_or(10.0));
}

std::string schedule_string(const RhoSchedule &s) {
    if (s.kind == RhoSchedule::Kind::constant)
        return "constant:" + format_double(s.rho0);
    return "geometric:" + format_double(s.rho0) + ":" + format_double(s.factor) + ":" + format_double(s.cap);
}

int cmd_solve(const SolveOpts &o, std::ostream &out) {
    const CatalogProblem c = load_problem(o.id);
    SolverConfig cfg;
    cfg.rho = parse_schedule(o);
    cfg.tol = {o.sigma, o.p, o.c_lin};
    cfg.c_hat = o.c_hat;
    cfg.stop_residual = o.stop;
    cfg.max_outer = o.max_outer;
    cfg.max_inner = o.max_inner;
    cfg.inner_tol = o.inner_tol;
    cfg.seed = o.seed;
    try {
        cfg.validate();
    } catch (const InputError &e) {
        throw UsageError(e.what());
    }
    const Vec x0 = o.x0.empty() ? c.x0 : parse_vec(o.x0, c.problem.n, "--x0");
    const Vec y0 = o.y0.empty() ? c.y0 : parse_vec(o.y0, c.problem.m, "--y0");

    const RunTrace run = alm_run(c.problem, x0, y0, cfg, &c.solution);
    TraceFile t = trace_from_run(run, {{"format", "alm-trace 1"},
                                       {"problem", c.id},
                                       {"rho", schedule_string(cfg.rho)},
                                       {"c_hat", format_double(cfg.c_hat)},
                                       {"stop", format_double(cfg.stop_residual)},
                                       {"tol_sigma", format_double(cfg.tol.sigma)},
                                       {"tol_p", format_double(cfg.tol.p)},
                                       {"tol_lin", format_double(cfg.tol.c_lin)},
                                       {"max_outer", std::to_string(cfg.max_outer)},
                                       {"max_inner", std::to_string(cfg.max_inner)},
                                       {"inner_tol", format_double(cfg.inner_tol)},
                                       {"seed", std::to_string(cfg.seed)},
                                       {"x0", join(x0)},
                                       {"y0", join(y0)}});
    if (static_cast<int>(run.records.size()) >= kMinRateRecords) {
        const RateReport rep = estimate_rates(run);
        t.footer.emplace_back("classification", to_string(rep.classification));
        t.footer.emplace_back("q_hat", format_double(rep.q_hat));
    }
    const std::string path = o.out.empty() ? c.id + ".trace.csv" : o.out;
    write_file_atomic(path, format_trace(t));

    const IterationRecord &last = run.records.back();
    out << c.id << ": " << to_string(run.status) << " after " << last.k << " outer iterations, residual "
        << format_double(last.residual) << "\ntrace written to " << path << '\n';
    switch (run.status) {
    case RunStatus::converged: return exit_code::ok;
    case RunStatus::locality_failed: return exit_code::locality_failed;
    case RunStatus::subproblem_failed: return exit_code::subproblem_failed;
    case RunStatus::max_outer: return exit_code::max_outer;
    }
    return exit_code::software;
}

// ---------------------------------------------------------------- diagnose

const std::vector<std::string> kChecks{"sosc", "uqgc", "errbound", "semistab", "quotient", "stepbound"};

struct DiagnoseOpts {
    std::string id, check;
    std::string multiplier;
    std::optional<int> samples;
    double gamma = 0.1, kappa = 0.9;
    std::string rhos;
    double radius = 1e-2;
    std::string mode = "ball";
    std::string ts = "0.1,0.05,0.01";
    std::string directions;
    bool cplq = false;
    std::uint64_t seed = 0;
    std::string out;
};

std::vector<Vec> default_directions(int n) {
    std::vector<Vec> ws;
    ws.push_back(Vec::Unit(n, 0));
    if (n > 1)
        ws.push_back(Vec::Unit(n, 1));
    ws.push_back(-Vec::Unit(n, 0));
    ws.push_back(Vec::Ones(n) / std::sqrt(static_cast<double>(n)));
    return ws;
}

DiagnosticsReport quotient_sweep(const CatalogProblem &c, const std::vector<double> &rhos, const std::vector<double> &ts,
                              const std::vector<Vec> &ws) {
    DiagnosticsReport all;
    all.check = "quotient";
    all.verdict = Verdict::pass;
    double max_abs = 0, max_rel = 0;
    for (double rho : rhos) {
        const DiagnosticsReport r = aug_quotient_identity_check(c.problem, c.solution, rho, ts, ws);
        all.samples += r.samples;
        max_abs = std::max(max_abs, r.metrics.at("max_abs_error"));
        max_rel = std::max(max_rel, r.metrics.at("max_rel_error"));
        if (r.verdict != Verdict::pass)
            all.verdict = r.verdict;
        for (const std::string &n : r.notes)
            all.notes.push_back("rho=" + format_double(rho) + ": " + n);
    }
    all.estimate = max_abs;
    all.metrics["max_abs_error"] = max_abs;
    all.metrics["max_rel_error"] = max_rel;
    return all;
}

int cmd_diagnose(const DiagnoseOpts &o, std::ostream &out) {
    if (std::find(kChecks.begin(), kChecks.end(), o.check) == kChecks.end())
        throw UsageError("unknown check '" + o.check + "'");
    const CatalogProblem c = load_problem(o.id);
    const CompositeProblem &p = c.problem;
    const Vec y = o.multiplier.empty() ? c.solution.reference_multiplier : parse_vec(o.multiplier, p.m, "--multiplier");

    DiagnosticsReport r;
    if (o.check == "sosc") {
        r = sosc_check(p, c.solution, y, o.samples.value_or(256), o.seed);
    } else if (o.check == "uqgc") {
        const std::vector<double> rhos = parse_list(o.rhos.empty() ? "10,100,1000" : o.rhos);
        r = uqgc_check(p, c.solution, o.gamma, rhos, o.samples.value_or(500), o.kappa, o.seed);
    } else if (o.check == "errbound") {
        ErrorBoundSampling mode = ErrorBoundSampling::ball;
        if (o.mode == "multiplier-set")
            mode = ErrorBoundSampling::multiplier_set;
        else if (o.mode != "ball")
            throw UsageError("--mode must be 'ball' or 'multiplier-set'");
        r = error_bound_estimate(p, c.solution, o.radius, o.samples.value_or(1000), o.seed, mode);
    } else if (o.check == "semistab") {
        const ConvexFunction &g = (o.cplq && c.g_as_cplq) ? *c.g_as_cplq : p.g;
        const Vec z = p.Phi.eval(c.solution.x_bar);
        QuotientGrid grid;
        grid.seed = o.seed;
        try {
            r = semi_stability_check(g, z, y, o.samples.value_or(16), grid);
        } catch (const CapabilityError &e) {
            r.check = "semistab";
            r.verdict = Verdict::inconclusive;
            r.notes.push_back(e.what());
        }
    } else if (o.check == "quotient") {
        const std::vector<double> rhos = parse_list(o.rhos.empty() ? "1,10" : o.rhos);
        std::vector<Vec> ws;
        if (o.directions.empty()) {
            ws = default_directions(p.n);
        } else {
            std::stringstream ss(o.directions);
            std::string item;
            while (std::getline(ss, item, ';'))
                ws.push_back(parse_vec(item, p.n, "--directions entry"));
        }
        r = quotient_sweep(c, rhos, parse_list(o.ts), ws);
    } else {
        const std::vector<double> rhos = parse_list(o.rhos.empty() ? "10,100,1000" : o.rhos);
        r = consecutive_step_bound_check(p, c.solution, rhos, o.radius, o.samples.value_or(50), o.seed);
    }

    const std::string text = report_json(r, c.id).dump(2) + "\n";
    if (o.out.empty())
        out << text;
    else
        write_file_atomic(o.out, text);
    return r.verdict == Verdict::pass || r.verdict == Verdict::vacuous ? exit_code::ok : exit_code::check_failed;
}

// ---------------------------------------------------------------- rates

struct RatesOpts {
    std::string trace;
    std::string problem;
    bool json = false;
};

int cmd_rates(const RatesOpts &o, std::ostream &out) {
    if (!o.problem.empty())
        load_problem(o.problem);
    const TraceFile t = read_trace(o.trace);
    const bool use_known = !o.problem.empty();
    if (use_known) {
        const std::optional<std::string> id = t.header_value("problem");
        if (id && *id != o.problem)
            throw DataError("trace was produced for " + *id + ", not " + o.problem);
    }
    const RateReport rep = rates_from_trace(t, use_known);
    if (o.json) {
        nlohmann::json j;
        j["schema_version"] = kReportSchemaVersion;
        j["used_known_solution"] = rep.used_known_solution;
        j["distances"] = rep.distances;
        j["ratios"] = rep.ratios;
        j["q_hat"] = rep.q_hat;
        j["tail"] = rep.tail;
        j["classification"] = to_string(rep.classification);
        out << j.dump(2) << '\n';
        return exit_code::ok;
    }
    out << (use_known ? "d_k = distance to the known solution set\n" : "d_k = KKT residual\n");
    out << std::left << std::setw(6) << "k" << std::setw(26) << "d_k" << "q_k\n";
    for (size_t k = 0; k < rep.distances.size(); ++k) {
        out << std::setw(6) << k << std::setw(26) << format_double(rep.distances[k]);
        if (k > 0)
            out << format_double(rep.ratios[k - 1]);
        out << '\n';
    }
    out << to_string(rep.classification) << ", q_hat=" << format_double(rep.q_hat) << " (tail " << rep.tail
        << ")\n";
    return exit_code::ok;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Inexact augmented Lagrangian solver and second-order diagnostics", "alm"};
    app.require_subcommand(1);

    SolveOpts so;
    CLI::App *solve = app.add_subcommand("solve", "Run the ALM on a catalog problem and write a trace");
    solve->add_option("id", so.id, "Catalog problem id (P1..P4)")->required();
    auto *rho_opt = solve->add_option("--rho", so.rho, "Constant penalty");
    solve->add_option("--rho-geometric", so.rho_geometric, "Geometric penalty R0:TAU[:MAX]")->excludes(rho_opt);
    solve->add_option("--chat", so.c_hat, "Locality constant");
    solve->add_option("--stop", so.stop, "Stop when the KKT residual is at most this");
    solve->add_option("--tol-sigma", so.sigma, "Tolerance function coefficient");
    solve->add_option("--tol-p", so.p, "Tolerance function exponent (> 1)");
    solve->add_option("--tol-lin", so.c_lin, "Tolerance function linear coefficient");
    solve->add_option("--max-outer", so.max_outer, "Outer iteration cap");
    solve->add_option("--max-inner", so.max_inner, "Inner iteration cap per subproblem");
    solve->add_option("--inner-tol", so.inner_tol, "Cap on the subproblem tolerance (0 = schedule only)");
    solve->add_option("--x0", so.x0, "Primal start, comma separated");
    solve->add_option("--y0", so.y0, "Multiplier start, comma separated");
    solve->add_option("--seed", so.seed, "Seed");
    solve->add_option("--out", so.out, "Trace path (default <id>.trace.csv)");

    DiagnoseOpts dopt;
    CLI::App *diag = app.add_subcommand("diagnose", "Run a diagnostics check on a catalog problem");
    diag->add_option("id", dopt.id, "Catalog problem id")->required();
    diag->add_option("check", dopt.check, "sosc | uqgc | errbound | semistab | quotient | stepbound")->required();
    diag->add_option("--multiplier", dopt.multiplier, "Multiplier y, comma separated (sosc, semistab)");
    diag->add_option("--samples", dopt.samples, "Sample count");
    diag->add_option("--gamma", dopt.gamma, "Neighborhood radius (uqgc)");
    diag->add_option("--kappa", dopt.kappa, "Target growth modulus (uqgc)");
    diag->add_option("--rho", dopt.rhos, "Penalty list, comma separated (uqgc, quotient, stepbound)");
    diag->add_option("--radius", dopt.radius, "Sampling radius (errbound, stepbound)");
    diag->add_option("--mode", dopt.mode, "ball | multiplier-set (errbound)");
    diag->add_option("--t", dopt.ts, "Step list, comma separated (quotient)");
    diag->add_option("--directions", dopt.directions, "Directions w, ';' separated (quotient)");
    diag->add_flag("--cplq", dopt.cplq, "Use the explicit CPLQ form of g when available (semistab)");
    diag->add_option("--seed", dopt.seed, "Seed");
    diag->add_option("--out", dopt.out, "Report path (default: standard output)");

    RatesOpts ro;
    CLI::App *rates = app.add_subcommand("rates", "Estimate convergence rates from a trace");
    rates->add_option("trace", ro.trace, "Trace file")->required();
    rates->add_option("--problem", ro.problem, "Use distances to this problem's known solution");
    rates->add_flag("--json", ro.json, "Print the report as JSON");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError &e) {
        err << "alm: " << e.what() << '\n';
        if (app.get_subcommands().empty())
            err << app.help();
        for (CLI::App *sub : app.get_subcommands())
            err << sub->help();
        return exit_code::usage;
    }

    try {
        if (solve->parsed())
            return cmd_solve(so, out);
        if (diag->parsed())
            return cmd_diagnose(dopt, out);
        return cmd_rates(ro, out);
    } catch (const UsageError &e) {
        err << "alm: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const DataError &e) {
        err << "alm: " << e.what() << '\n';
        return exit_code::data;
    } catch (const InputError &e) {
        err << "alm: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const std::exception &e) {
        err << "alm: " << e.what() << '\n';
        return exit_code::software;
    }
}

} // namespace alm::cli
