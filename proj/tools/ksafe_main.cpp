// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: parse an operator spec file, run one analysis,
// emit a structured report (text or JSON) and optional CSV sweeps.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ksafe/cli.hpp"
#include "ksafe/kernels.hpp"

int main(int argc, char** argv) {
    using ksafe::cli::RunConfig;

    CLI::App app{"ksafe — calculus and spectral verification of k-safe differential operators"};
    app.set_version_flag("--version", std::string(ksafe::cli::kToolVersion));
    app.require_subcommand(1);

    RunConfig cfg;
    int k = -1, l = -1, p = -1;

    auto add_common = [&](CLI::App* sub, bool needs_spec = true) {
        if (needs_spec)
            sub->add_option("--spec", cfg.spec_path, "operator spec file")->required();
        sub->add_flag("--json", cfg.json_output, "emit the report as JSON");
        sub->add_flag("--no-timestamp", cfg.no_timestamp, "omit the timestamp (reproducible output)");
        sub->add_option("--out", cfg.out_path, "write the report to a file instead of stdout");
        sub->add_option("--seed", cfg.seed, "probe seed (default 0)");
        sub->add_option("--N", cfg.N, "modes per dimension (power of two)");
    };

    CLI::App* check = app.add_subcommand("check", "safeness grading report");
    add_common(check);
    check->add_option("--k", k, "target Sobolev grade")->required();

    CLI::App* adjoint = app.add_subcommand("adjoint", "formal adjoint coefficients");
    add_common(adjoint);
    adjoint->add_option("--k", k, "also grade the adjoint at k-s");

    CLI::App* comp = app.add_subcommand("compose", "compose two operators");
    add_common(comp);
    comp->add_option("--with", cfg.with_path, "second operand spec file")->required();

    CLI::App* ell = app.add_subcommand("ellipticity", "sampled ellipticity certificate");
    add_common(ell);
    ell->add_option("--samples", cfg.budget, "sample budget on the cosphere");
    ell->add_option("--margin", cfg.margin_tolerance, "margin tolerance (default 1e-8)");

    CLI::App* index = app.add_subcommand("index", "kernel/cokernel/index via singular values");
    add_common(index);
    index->add_option("--l", l, "domain Sobolev order")->required();
    index->add_option("--svd-threshold", cfg.svd_rel_threshold,
                      "relative zero threshold (default 1e-7)");
    index->add_option("--gap-min", cfg.gap_min, "required zero-cluster gap ratio (default 1e3)");

    CLI::App* est = app.add_subcommand("estimate", "operator norm via power iteration");
    add_common(est);
    est->add_option("--l", l, "domain Sobolev order")->required();
    est->add_option("--trials", cfg.trials, "random restarts (default 8)");

    CLI::App* par = app.add_subcommand("parametrix", "frozen-coefficient splitting diagnostics");
    add_common(par);
    par->add_option("--l", l, "norm order for the residual (default s)");
    par->add_option("--m", cfg.m, "lattice size (default 16)");
    par->add_option("--kc", cfg.cutoff_radius, "multiplier cutoff radius (default 2)");

    CLI::App* sweep = app.add_subcommand("sweep", "CSV sweeps (norm|cutoff|freezing|garding)");
    add_common(sweep);
    sweep->add_option("--kind", cfg.kind, "norm|cutoff|freezing|garding")->required();
    sweep->add_option("--l", l, "Sobolev order for norm/cutoff/freezing");
    sweep->add_option("--p", p, "Sobolev order for garding");
    sweep->add_option("--Ns", cfg.Ns, "grid sizes for norm/garding")->delimiter(',');
    sweep->add_option("--cutoffs", cfg.cutoffs, "cutoffs for smoothing distance")->delimiter(',');
    sweep->add_option("--ms", cfg.ms, "lattice sizes for freezing")->delimiter(',');
    sweep->add_option("--trials", cfg.trials, "probe trials");
    sweep->add_option("--kc", cfg.cutoff_radius, "multiplier cutoff radius (default 2)");
    sweep->add_option("--csv", cfg.csv_path, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    cfg.command = app.get_subcommands().front()->get_name();
    if (k >= 0) cfg.k = k;
    if (l >= 0) cfg.l = l;
    if (p >= 0) cfg.p = p;

    try {
        return ksafe::cli::run_and_emit(cfg);
    } catch (const ksafe::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return ksafe::cli::kExitError;
    } catch (const ksafe::GradeError& e) {
        std::cerr << "grade error: " << e.what() << "\n";
        return ksafe::cli::kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ksafe::cli::kExitError;
    }
}
