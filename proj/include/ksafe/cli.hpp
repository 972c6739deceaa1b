// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksafe/specfile.hpp"

namespace ksafe::cli {

inline constexpr const char* kToolName = "ksafe";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 usage/spec/computation error, 2 ran-but-flagged
// (failed safeness verdict, non-elliptic, unresolved gap, non-convergence,
// violated precondition).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFlagged = 2;

struct RunConfig {
    std::string command;  // check|adjoint|compose|ellipticity|index|estimate|parametrix|sweep
    std::string spec_path;
    std::string with_path;           // compose: second operand
    int N = 256;
    std::optional<int> k, l, p;
    std::uint64_t seed = 0;
    int trials = 8;
    long budget = 256;               // ellipticity samples
    int m = 16;                      // parametrix lattice size
    double cutoff_radius = 2.0;      // parametrix K_c
    std::vector<long long> cutoffs = {16, 32, 64, 128, 256};  // smoothing sweep
    std::vector<int> Ns = {128, 256, 512, 1024};              // norm/garding sweeps
    std::vector<int> ms = {8, 16, 32, 64};                    // freezing sweep
    std::string kind;                // sweep: norm|cutoff|freezing|garding
    bool json_output = false;
    bool no_timestamp = false;
    std::string out_path;            // report target ("" = stdout)
    std::string csv_path;            // sweep tables
    double svd_rel_threshold = 1e-7;
    double gap_min = 1e3;
    double margin_tolerance = 1e-8;
};

struct RunResult {
    int exit_code = kExitOk;
    json report;       // machine-readable form
    std::string text;  // human-readable form
};

// Executes one analysis. Throws SpecError / std::invalid_argument /
// GradeError for configurations that cannot run (exit 1 territory);
// flagged-but-completed analyses come back with exit_code = 2.
RunResult run(const RunConfig& cfg);

// Renders and writes the report (and CSV when produced) per the config;
// returns the exit code.
int run_and_emit(const RunConfig& cfg);

}  // namespace ksafe::cli
