// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/specfile.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <variant>

namespace ksafe {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw SpecError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
}

int get_int(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) fail(path, "missing key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

double get_num(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) fail(path, "missing key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

std::vector<int> get_int_vector(const json& v, const std::string& path, int dims) {
    if (!v.is_array()) fail(path, "expected an array");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer()) fail(path, "expected integers");
        out.push_back(e.get<int>());
    }
    if (dims >= 0 && static_cast<int>(out.size()) != dims)
        fail(path, "expected " + std::to_string(dims) + " entries");
    return out;
}

ScalarCoefficient parse_terms(const json& arr, const std::string& path, int dims);

Term parse_term(const json& t, const std::string& path, int dims) {
    if (!t.is_object() || t.size() != 1)
        fail(path, "a term must be an object with exactly one tag key");
    const std::string tag = t.items().begin().key();
    const json& body = t.items().begin().value();
    if (tag == "const") {
        if (!body.is_number()) fail(path + ".const", "expected a number");
        return ConstTerm{body.get<double>()};
    }
    if (tag == "trig") {
        check_keys(body, path + ".trig", {"freqs", "amps", "phases"});
        if (!body.contains("freqs") || !body.contains("amps") || !body.contains("phases"))
            fail(path + ".trig", "missing key: needs freqs, amps, phases");
        const json& fr = body.at("freqs");
        const json& am = body.at("amps");
        const json& ph = body.at("phases");
        if (!fr.is_array() || !am.is_array() || !ph.is_array() || fr.size() != am.size() ||
            fr.size() != ph.size())
            fail(path + ".trig", "freqs, amps, phases must be arrays of equal length");
        TrigTerm trig;
        for (size_t i = 0; i < fr.size(); ++i) {
            TrigMode m;
            m.freq = get_int_vector(fr[i], path + ".trig.freqs", dims);
            if (!am[i].is_number() || !ph[i].is_number())
                fail(path + ".trig", "amps and phases must be numbers");
            m.amp = am[i].get<double>();
            m.phase = ph[i].get<double>();
            trig.modes.push_back(std::move(m));
        }
        return trig;
    }
    if (tag == "powerlaw") {
        check_keys(body, path + ".powerlaw", {"n", "beta", "K", "seed", "scale", "deriv", "smooth"});
        PowerLawTerm p;
        int n = get_int(body, path + ".powerlaw", "n");
        if (n != dims) fail(path + ".powerlaw.n", "dimension mismatch with the operator");
        p.beta = get_num(body, path + ".powerlaw", "beta");
        p.cap = get_int(body, path + ".powerlaw", "K");
        p.seed = static_cast<std::uint64_t>(get_int(body, path + ".powerlaw", "seed"));
        p.scale = body.contains("scale") ? get_num(body, path + ".powerlaw", "scale") : 1.0;
        p.deriv = body.contains("deriv")
                      ? MultiIndex(get_int_vector(body.at("deriv"), path + ".powerlaw.deriv", dims))
                      : MultiIndex::zero(dims);
        p.truncated = body.contains("smooth") && body.at("smooth").is_boolean()
                          ? body.at("smooth").get<bool>()
                          : false;
        if (body.contains("smooth") && !body.at("smooth").is_boolean())
            fail(path + ".powerlaw.smooth", "expected a boolean");
        return p;
    }
    if (tag == "product") {
        check_keys(body, path + ".product", {"scale", "lhs", "rhs"});
        if (!body.contains("lhs") || !body.contains("rhs"))
            fail(path + ".product", "missing lhs/rhs");
        auto lhs = std::make_shared<const ScalarCoefficient>(
            parse_terms(body.at("lhs"), path + ".product.lhs", dims));
        auto rhs = std::make_shared<const ScalarCoefficient>(
            parse_terms(body.at("rhs"), path + ".product.rhs", dims));
        auto g = product_grade(lhs->exact_grade(), rhs->exact_grade(), dims);
        if (!g) fail(path + ".product", "ungraded product");
        double scale = body.contains("scale") ? get_num(body, path + ".product", "scale") : 1.0;
        return ProductTerm{scale, std::move(lhs), std::move(rhs), *g};
    }
    if (tag == "derivative") {
        check_keys(body, path + ".derivative", {"scale", "index", "of"});
        if (!body.contains("index") || !body.contains("of"))
            fail(path + ".derivative", "missing index/of");
        auto of = std::make_shared<const ScalarCoefficient>(
            parse_terms(body.at("of"), path + ".derivative.of", dims));
        MultiIndex idx(get_int_vector(body.at("index"), path + ".derivative.index", dims));
        double scale = body.contains("scale") ? get_num(body, path + ".derivative", "scale") : 1.0;
        return DerivTerm{scale, std::move(of), std::move(idx)};
    }
    fail(path, "unknown term tag '" + tag + "'");
}

ScalarCoefficient parse_terms(const json& arr, const std::string& path, int dims) {
    if (!arr.is_array()) fail(path, "expected an array of terms");
    std::vector<Term> terms;
    for (size_t i = 0; i < arr.size(); ++i)
        terms.push_back(parse_term(arr[i], path + "[" + std::to_string(i) + "]", dims));
    try {
        return ScalarCoefficient(dims, std::move(terms));
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
}

Coefficient parse_matrix(const json& m, const std::string& path, int dims, int q) {
    if (!m.is_array() || static_cast<int>(m.size()) != q)
        fail(path, "expected " + std::to_string(q) + " rows");
    Coefficient out(dims, q, q);
    for (int r = 0; r < q; ++r) {
        const json& row = m[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != q)
            fail(path + "[" + std::to_string(r) + "]", "expected " + std::to_string(q) + " columns");
        for (int c = 0; c < q; ++c)
            out.set_entry(r, c,
                          parse_terms(row[static_cast<size_t>(c)],
                                      path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                                      dims));
    }
    return out;
}

}  // namespace

ParsedSpec parse_spec(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError(std::string("spec parse error: ") + e.what());
    }
    check_keys(root, "(root)", {"operator", "metric", "density"});
    if (!root.contains("operator")) fail("(root)", "missing key 'operator'");
    const json& op = root.at("operator");
    check_keys(op, "operator", {"n", "q", "s", "coefficients"});
    int n = get_int(op, "operator", "n");
    int q = get_int(op, "operator", "q");
    int s = get_int(op, "operator", "s");
    if (!op.contains("coefficients")) fail("operator", "missing key 'coefficients'");
    const json& coeffs = op.at("coefficients");
    if (!coeffs.is_array()) fail("operator.coefficients", "expected an array");
    std::map<MultiIndex, Coefficient> map;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        std::string path = "operator.coefficients[" + std::to_string(i) + "]";
        const json& entry = coeffs[i];
        check_keys(entry, path, {"index", "matrix"});
        if (!entry.contains("index") || !entry.contains("matrix"))
            fail(path, "missing index/matrix");
        MultiIndex idx(get_int_vector(entry.at("index"), path + ".index", n));
        if (idx.order() > s)
            fail(path + ".index", "multiindex " + idx.str() + " exceeds operator order " +
                                      std::to_string(s));
        if (map.count(idx)) fail(path + ".index", "duplicate multiindex " + idx.str());
        map.emplace(idx, parse_matrix(entry.at("matrix"), path + ".matrix", n, q));
    }
    std::optional<Coefficient> metric;
    if (root.contains("metric")) {
        check_keys(root.at("metric"), "metric", {"matrix"});
        if (!root.at("metric").contains("matrix")) fail("metric", "missing key 'matrix'");
        metric = parse_matrix(root.at("metric").at("matrix"), "metric.matrix", n, q);
    }
    std::optional<ScalarCoefficient> density;
    if (root.contains("density"))
        density = parse_terms(root.at("density"), "density", n);
    try {
        DiffOp parsed(n, q, s, std::move(map));
        return ParsedSpec{std::move(parsed), std::move(metric), std::move(density)};
    } catch (const std::exception& e) {
        throw SpecError(std::string("operator: ") + e.what());
    }
}

ParsedSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

namespace {

json serialize_term(const Term& t, int dims) {
    json out = json::object();
    if (const auto* c = std::get_if<ConstTerm>(&t)) {
        out["const"] = c->value;
        return out;
    }
    if (const auto* tr = std::get_if<TrigTerm>(&t)) {
        json freqs = json::array(), amps = json::array(), phases = json::array();
        for (const auto& m : tr->modes) {
            freqs.push_back(m.freq);
            amps.push_back(m.amp);
            phases.push_back(m.phase);
        }
        out["trig"] = {{"freqs", freqs}, {"amps", amps}, {"phases", phases}};
        return out;
    }
    if (const auto* pl = std::get_if<PowerLawTerm>(&t)) {
        json body;
        body["n"] = dims;
        body["beta"] = pl->beta;
        body["K"] = pl->cap;
        body["seed"] = pl->seed;
        if (pl->scale != 1.0) body["scale"] = pl->scale;
        if (pl->deriv.order() != 0) body["deriv"] = pl->deriv.entries();
        if (pl->truncated) body["smooth"] = true;
        out["powerlaw"] = std::move(body);
        return out;
    }
    if (const auto* pr = std::get_if<ProductTerm>(&t)) {
        json body;
        if (pr->scale != 1.0) body["scale"] = pr->scale;
        body["lhs"] = serialize_terms(*pr->lhs);
        body["rhs"] = serialize_terms(*pr->rhs);
        out["product"] = std::move(body);
        return out;
    }
    const auto& dv = std::get<DerivTerm>(t);
    json body;
    if (dv.scale != 1.0) body["scale"] = dv.scale;
    body["index"] = dv.index.entries();
    body["of"] = serialize_terms(*dv.body);
    out["derivative"] = std::move(body);
    return out;
}

}  // namespace

json serialize_terms(const ScalarCoefficient& c) {
    json arr = json::array();
    for (const auto& t : c.terms()) arr.push_back(serialize_term(t, c.dims()));
    return arr;
}

json serialize_operator(const DiffOp& op) {
    json out;
    out["n"] = op.dims();
    out["q"] = op.rank();
    out["s"] = op.order();
    json coeffs = json::array();
    for (const auto& [idx, coeff] : op.coeffs()) {
        json entry;
        entry["index"] = idx.entries();
        json matrix = json::array();
        for (int r = 0; r < coeff.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < coeff.cols(); ++c) row.push_back(serialize_terms(coeff.entry(r, c)));
            matrix.push_back(std::move(row));
        }
        entry["matrix"] = std::move(matrix);
        coeffs.push_back(std::move(entry));
    }
    out["coefficients"] = std::move(coeffs);
    return out;
}

json serialize_spec(const DiffOp& op, const std::optional<Coefficient>& metric,
                    const std::optional<ScalarCoefficient>& density) {
    json out;
    out["operator"] = serialize_operator(op);
    if (metric) {
        json matrix = json::array();
        for (int r = 0; r < metric->rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < metric->cols(); ++c)
                row.push_back(serialize_terms(metric->entry(r, c)));
            matrix.push_back(std::move(row));
        }
        out["metric"] = {{"matrix", matrix}};
    }
    if (density) out["density"] = serialize_terms(*density);
    return out;
}

}  // namespace ksafe
