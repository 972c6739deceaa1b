// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ksafe/diffop.hpp"

namespace ksafe {

using json = nlohmann::ordered_json;

// Contents of an operator spec file: the operator, plus an optional
// constant bundle metric and an optional positive density for adjoints.
struct ParsedSpec {
    DiffOp op;
    std::optional<Coefficient> metric;
    std::optional<ScalarCoefficient> density;
};

// Strict parse: unknown keys anywhere are rejected with a path diagnostic;
// invariant violations report the offending multiindex.
ParsedSpec parse_spec(const std::string& text);
ParsedSpec parse_spec_file(const std::string& path);

// Canonical serialization: fixed key order, default-valued optional keys
// omitted. parse(serialize(x)) == serialize(x) byte-for-byte.
json serialize_terms(const ScalarCoefficient& c);
json serialize_operator(const DiffOp& op);
json serialize_spec(const DiffOp& op, const std::optional<Coefficient>& metric = std::nullopt,
                    const std::optional<ScalarCoefficient>& density = std::nullopt);

}  // namespace ksafe
