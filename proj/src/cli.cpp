// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ksafe/engine.hpp"
#include "ksafe/parametrix.hpp"

namespace ksafe::cli {

namespace {

double cap_finite(double v) { return std::isfinite(v) ? v : 1e300; }

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json safeness_json(const SafenessReport& rep) {
    json rows = json::array();
    for (const auto& row : rep.rows) {
        rows.push_back({{"index", row.index.entries()},
                        {"required", row.required.str()},
                        {"actual", row.actual.str()},
                        {"pass", row.pass}});
    }
    json out;
    out["k"] = rep.k.str();
    out["rows"] = std::move(rows);
    out["overall"] = rep.overall;
    out["minimal_safe_k"] = rep.minimal_safe_k ? json(rep.minimal_safe_k->str()) : json(nullptr);
    return out;
}

void safeness_text(std::ostream& os, const SafenessReport& rep) {
    os << "safeness at k = " << rep.k.str() << "\n";
    os << "  index    required  actual  pass\n";
    for (const auto& row : rep.rows)
        os << "  " << row.index.str() << "  " << row.required.str() << "  " << row.actual.str()
           << "  " << (row.pass ? "yes" : "NO") << "\n";
    os << "  overall: " << (rep.overall ? "safe" : "NOT safe") << "\n";
    if (rep.minimal_safe_k) os << "  minimal safe k: " << rep.minimal_safe_k->str() << "\n";
}

json index_json(const IndexReport& rep) {
    return {{"l", rep.l},
            {"dim_ker", rep.dim_ker},
            {"dim_coker", rep.dim_coker},
            {"index", rep.index},
            {"singular_value_gap", cap_finite(rep.singular_value_gap)},
            {"resolved", rep.resolved},
            {"sigma_max", rep.sigma_max},
            {"sigma_min_retained", rep.sigma_min_retained}};
}

std::string fmt(double v) { return json(cap_finite(v)).dump(); }

struct Ctx {
    const RunConfig& cfg;
    ParsedSpec spec;
    json result;
    std::vector<std::string> warnings;
    std::ostringstream text;
    bool flagged = false;
    std::optional<json> csv;  // {"header": [...], "rows": [[...]]}
};

int require_order(const std::optional<int>& v, const char* name) {
    if (!v) throw std::invalid_argument(std::string("missing required option --") + name);
    if (*v < 0) throw std::invalid_argument(std::string("--") + name + " must be >= 0");
    return *v;
}

TorusGrid make_grid(const Ctx& ctx) { return TorusGrid(ctx.spec.op.dims(), ctx.cfg.N); }

void cmd_check(Ctx& ctx) {
    int k = require_order(ctx.cfg.k, "k");
    SafenessReport rep = is_safe(ctx.spec.op, Regularity::finite(k));
    for (const auto& w : rep.warnings) ctx.warnings.push_back(w);
    ctx.result["safeness"] = safeness_json(rep);
    safeness_text(ctx.text, rep);
    if (!rep.overall) ctx.flagged = true;
}

void cmd_adjoint(Ctx& ctx) {
    AdjointOptions opts;
    opts.metric = ctx.spec.metric;
    opts.density = ctx.spec.density;
    DiffOp adj = formal_adjoint(ctx.spec.op, opts);
    ctx.result["operator"] = serialize_operator(adj);
    ctx.text << "formal adjoint: order " << adj.order() << ", " << adj.coeffs().size()
             << " coefficient entries\n";
    if (ctx.cfg.k) {
        int k = *ctx.cfg.k;
        SafenessReport rep = is_safe(adj, Regularity::finite(k - ctx.spec.op.order()));
        for (const auto& w : rep.warnings) ctx.warnings.push_back(w);
        ctx.result["safeness_at_k_minus_s"] = safeness_json(rep);
        safeness_text(ctx.text, rep);
        if (!rep.overall) ctx.flagged = true;
    }
}

void cmd_compose(Ctx& ctx) {
    if (ctx.cfg.with_path.empty())
        throw std::invalid_argument("compose needs --with <second spec>");
    ParsedSpec second = parse_spec_file(ctx.cfg.with_path);
    DiffOp prod = compose(ctx.spec.op, second.op);
    ctx.result["operator"] = serialize_operator(prod);
    ctx.text << "composition: order " << prod.order() << ", " << prod.coeffs().size()
             << " coefficient entries\n";
}

void cmd_ellipticity(Ctx& ctx) {
    EllipticityReport rep =
        is_elliptic(ctx.spec.op, ctx.cfg.budget, ctx.cfg.seed, ctx.cfg.margin_tolerance);
    ctx.result["ellipticity"] = {{"elliptic", rep.elliptic},
                                 {"worst_margin", rep.worst_margin},
                                 {"samples", rep.samples}};
    ctx.text << "elliptic: " << (rep.elliptic ? "yes" : "NO") << "  worst |det symbol| = "
             << fmt(rep.worst_margin) << " over " << rep.samples << " samples\n";
    if (!rep.elliptic) ctx.flagged = true;
}

bool index_preconditions(Ctx& ctx, int l) {
    bool ok = true;
    EllipticityReport ell =
        is_elliptic(ctx.spec.op, ctx.cfg.budget, ctx.cfg.seed, ctx.cfg.margin_tolerance);
    if (!ell.elliptic) {
        ctx.warnings.push_back("precondition failed: operator is not elliptic (worst margin " +
                               fmt(ell.worst_margin) + ")");
        ok = false;
    }
    SafenessReport saf = is_safe(ctx.spec.op, Regularity::finite(l));
    if (!saf.overall) {
        ctx.warnings.push_back("precondition failed: operator is not " + std::to_string(l) +
                               "-safe");
        ok = false;
    }
    return ok;
}

void cmd_index(Ctx& ctx) {
    int l = require_order(ctx.cfg.l, "l");
    if (!index_preconditions(ctx, l)) {
        ctx.flagged = true;
        ctx.text << "index: preconditions failed, not computed\n";
        return;
    }
    IndexReport rep = index_report(ctx.spec.op, make_grid(ctx), l,
                                   SvdPolicy{ctx.cfg.svd_rel_threshold, ctx.cfg.gap_min});
    ctx.result["index_report"] = index_json(rep);
    ctx.text << "index at l = " << l << ": dim ker = " << rep.dim_ker
             << ", dim coker = " << rep.dim_coker << ", index = " << rep.index
             << "  (gap " << fmt(rep.singular_value_gap) << ", "
             << (rep.resolved ? "resolved" : "UNRESOLVED") << ")\n";
    if (!rep.resolved) {
        ctx.warnings.push_back("zero-cluster gap unresolved");
        ctx.flagged = true;
    }
}

void cmd_estimate(Ctx& ctx) {
    int l = require_order(ctx.cfg.l, "l");
    NormEstimate est =
        operator_norm_estimate(ctx.spec.op, make_grid(ctx), l, ctx.cfg.trials, ctx.cfg.seed);
    ctx.result["norm_estimate"] = {{"l", l},
                                   {"N", ctx.cfg.N},
                                   {"sigma", est.sigma},
                                   {"converged", est.converged},
                                   {"iterations", est.iterations},
                                   {"trials", est.trials}};
    ctx.text << "operator norm H^" << l << " -> H^" << (l - ctx.spec.op.order()) << " at N = "
             << ctx.cfg.N << ": sigma = " << fmt(est.sigma)
             << (est.converged ? "" : "  [NOT CONVERGED]") << "\n";
    if (!est.converged) {
        ctx.warnings.push_back("power iteration did not converge in 200 iterations");
        ctx.flagged = true;
    }
}

void cmd_parametrix(Ctx& ctx) {
    int l = ctx.cfg.l.value_or(ctx.spec.op.order());
    TorusGrid grid = make_grid(ctx);
    parametrix::BumpPartition part(ctx.cfg.m, grid);
    double partition_residual = 0.0;
    for (long g = 0; g < grid.mode_count(); ++g) {
        double s = 0.0;
        for (int j = 0; j < part.centers(); ++j) s += part.values(j)[static_cast<size_t>(g)];
        partition_residual = std::max(partition_residual, std::abs(s - 1.0));
    }
    SpectralField u = random_bandlimited(grid, ctx.spec.op.rank(), grid.modes_per_dim() / 4,
                                         ctx.cfg.seed);
    parametrix::SplittingReport rep =
        parametrix::splitting_check(ctx.spec.op, u, part, ctx.cfg.cutoff_radius, l);
    std::vector<parametrix::FrozenOperator> frozen = parametrix::freeze(ctx.spec.op, part, grid);
    double ebound = 0.0;
    for (const auto& f : frozen) {
        parametrix::FourierMultiplier E = parametrix::near_inverse(f, ctx.cfg.cutoff_radius, grid);
        ebound = std::max(ebound, E.weighted_bound(ctx.spec.op.order()));
    }
    auto rows = parametrix::freezing_error_sweep(ctx.spec.op, grid, {ctx.cfg.m});
    ctx.result["parametrix"] = {
        {"m", ctx.cfg.m},
        {"epsilon", part.eps()},
        {"K_c", ctx.cfg.cutoff_radius},
        {"l", l},
        {"partition_residual", partition_residual},
        {"splitting", {{"residual", rep.residual},
                       {"u_norm", rep.u_norm},
                       {"term_f", rep.term_f},
                       {"term_r", rep.term_r},
                       {"term_q", rep.term_q},
                       {"term_rho", rep.term_rho},
                       {"er_coefficient", rep.er_coefficient}}},
        {"near_inverse_bound", ebound},
        {"A_eps", rows.front().a_eps}};
    ctx.text << "parametrix (m = " << ctx.cfg.m << ", K_c = " << ctx.cfg.cutoff_radius
             << ", l = " << l << ")\n"
             << "  partition residual: " << fmt(partition_residual) << "\n"
             << "  splitting residual: " << fmt(rep.residual) << "  (||u||_l = " << fmt(rep.u_norm)
             << ")\n"
             << "  terms f/R/Q/rho: " << fmt(rep.term_f) << " / " << fmt(rep.term_r) << " / "
             << fmt(rep.term_q) << " / " << fmt(rep.term_rho) << "\n"
             << "  near-inverse bound: " << fmt(ebound) << "   A(eps) = "
             << fmt(rows.front().a_eps) << "\n";
}

void cmd_sweep(Ctx& ctx) {
    json header = json::array();
    json rows = json::array();
    if (ctx.cfg.kind == "norm") {
        int l = require_order(ctx.cfg.l, "l");
        header = {"N", "sigma"};
        for (int N : ctx.cfg.Ns) {
            NormEstimate est = operator_norm_estimate(ctx.spec.op, TorusGrid(ctx.spec.op.dims(), N),
                                                      l, ctx.cfg.trials, ctx.cfg.seed);
            if (!est.converged)
                ctx.warnings.push_back("power iteration not converged at N = " + std::to_string(N));
            rows.push_back({N, est.sigma});
        }
    } else if (ctx.cfg.kind == "cutoff") {
        int l = require_order(ctx.cfg.l, "l");
        header = {"cutoff", "distance"};
        TorusGrid grid = make_grid(ctx);
        for (long long c : ctx.cfg.cutoffs) {
            DiffOp smooth = smooth_approximation(ctx.spec.op, c);
            DiffOp diff = ctx.spec.op - smooth;
            NormEstimate est = operator_norm_estimate(diff, grid, l, ctx.cfg.trials, ctx.cfg.seed);
            rows.push_back({c, est.sigma});
        }
    } else if (ctx.cfg.kind == "freezing") {
        int l = ctx.cfg.l.value_or(ctx.spec.op.order());
        header = {"epsilon", "A_eps", "ER_coefficient", "residual"};
        TorusGrid grid = make_grid(ctx);
        SpectralField u = random_bandlimited(grid, ctx.spec.op.rank(), grid.modes_per_dim() / 4,
                                             ctx.cfg.seed);
        for (int m : ctx.cfg.ms) {
            parametrix::BumpPartition part(m, grid);
            auto fr = parametrix::freezing_error_sweep(ctx.spec.op, grid, {m});
            parametrix::SplittingReport rep =
                parametrix::splitting_check(ctx.spec.op, u, part, ctx.cfg.cutoff_radius, l);
            rows.push_back({part.eps(), fr.front().a_eps, rep.er_coefficient, rep.residual});
        }
    } else if (ctx.cfg.kind == "garding") {
        int p = require_order(ctx.cfg.p, "p");
        header = {"N", "C_est"};
        for (int N : ctx.cfg.Ns) {
            double c = elliptic_constant_probe(ctx.spec.op, TorusGrid(ctx.spec.op.dims(), N), p,
                                               ctx.cfg.trials, ctx.cfg.seed);
            rows.push_back({N, c});
        }
    } else {
        throw std::invalid_argument("unknown sweep kind '" + ctx.cfg.kind +
                                    "' (norm|cutoff|freezing|garding)");
    }
    ctx.result["sweep"] = {{"kind", ctx.cfg.kind}, {"header", header}, {"rows", rows}};
    ctx.csv = json{{"header", header}, {"rows", rows}};
    ctx.text << "sweep " << ctx.cfg.kind << ":\n  ";
    for (const auto& h : header) ctx.text << h.get<std::string>() << "  ";
    ctx.text << "\n";
    for (const auto& row : rows) {
        ctx.text << "  ";
        for (const auto& v : row) ctx.text << v.dump() << "  ";
        ctx.text << "\n";
    }
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    Ctx ctx{cfg, parse_spec_file(cfg.spec_path), json::object(), {}, {}, false, {}};

    if (cfg.command == "check")
        cmd_check(ctx);
    else if (cfg.command == "adjoint")
        cmd_adjoint(ctx);
    else if (cfg.command == "compose")
        cmd_compose(ctx);
    else if (cfg.command == "ellipticity")
        cmd_ellipticity(ctx);
    else if (cfg.command == "index")
        cmd_index(ctx);
    else if (cfg.command == "estimate")
        cmd_estimate(ctx);
    else if (cfg.command == "parametrix")
        cmd_parametrix(ctx);
    else if (cfg.command == "sweep")
        cmd_sweep(ctx);
    else
        throw std::invalid_argument("unknown command '" + cfg.command + "'");

    json report;
    report["tool"] = kToolName;
    report["version"] = kToolVersion;
    report["schema_version"] = 1;
    report["command"] = cfg.command;
    json config;
    config["spec"] = cfg.spec_path;
    if (!cfg.with_path.empty()) config["with"] = cfg.with_path;
    config["N"] = cfg.N;
    if (cfg.k) config["k"] = *cfg.k;
    if (cfg.l) config["l"] = *cfg.l;
    if (cfg.p) config["p"] = *cfg.p;
    config["seed"] = cfg.seed;
    report["config"] = std::move(config);
    if (!cfg.no_timestamp) report["timestamp"] = iso_timestamp();
    for (auto& [key, value] : ctx.result.items()) report[key] = value;
    report["warnings"] = ctx.warnings;
    if (ctx.csv) report["csv"] = *ctx.csv;

    std::ostringstream text;
    text << kToolName << " " << kToolVersion << " — " << cfg.command << " — " << cfg.spec_path
         << "\n";
    text << ctx.text.str();
    for (const auto& w : ctx.warnings) text << "warning: " << w << "\n";

    RunResult out;
    out.exit_code = ctx.flagged ? kExitFlagged : kExitOk;
    out.report = std::move(report);
    out.text = text.str();
    return out;
}

int run_and_emit(const RunConfig& cfg) {
    RunResult res = run(cfg);
    std::string payload = cfg.json_output ? res.report.dump(2) + "\n" : res.text;
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::runtime_error("cannot open output path: " + cfg.out_path);
        out << payload;
    } else {
        std::cout << payload;
    }
    if (!cfg.csv_path.empty() && res.report.contains("csv")) {
        std::ofstream csv(cfg.csv_path);
        if (!csv) throw std::runtime_error("cannot open csv path: " + cfg.csv_path);
        const json& table = res.report.at("csv");
        const json& header = table.at("header");
        for (size_t i = 0; i < header.size(); ++i)
            csv << (i ? "," : "") << header[i].get<std::string>();
        csv << "\n";
        for (const auto& row : table.at("rows")) {
            for (size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i].dump();
            csv << "\n";
        }
    }
    return res.exit_code;
}

}  // namespace ksafe::cli
