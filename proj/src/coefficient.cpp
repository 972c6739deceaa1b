// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ksafe {

namespace {

// Largest integer strictly below t.
int int_below(double t) {
    return static_cast<int>(std::ceil(t - 1e-12)) - 1;
}

int power_law_base_grade(double beta, int dims) {
    return int_below(beta - 0.5 * dims);
}

// Model evaluation enumerates the power-law lattice directly; cap the loop
// so pathological caps (the sharpness witnesses declare huge K) stay
// evaluable. Grid sampling is separately capped at the Nyquist limit.
long long eval_cap(int dims) { return dims == 1 ? 65536 : 256; }

struct TermDims {
    int dims;
    void operator()(const ConstTerm&) const {}
    void operator()(const TrigTerm& t) const {
        for (const auto& m : t.modes)
            if (static_cast<int>(m.freq.size()) != dims)
                throw std::invalid_argument("trig mode frequency dimension mismatch");
    }
    void operator()(const PowerLawTerm& t) const {
        if (t.beta <= 0.5 * dims)
            throw std::invalid_argument("power-law decay must exceed n/2");
        if (t.cap < 1) throw std::invalid_argument("power-law cutoff must be >= 1");
        if (t.deriv.dims() != dims)
            throw std::invalid_argument("power-law derivative index dimension mismatch");
    }
    void operator()(const ProductTerm& t) const {
        if (!t.lhs || !t.rhs || t.lhs->dims() != dims || t.rhs->dims() != dims)
            throw std::invalid_argument("product term dimension mismatch");
    }
    void operator()(const DerivTerm& t) const {
        if (!t.body || t.body->dims() != dims || t.index.dims() != dims)
            throw std::invalid_argument("derivative term dimension mismatch");
    }
};

}  // namespace

double power_law_phase(std::uint64_t seed, std::span<const int> xi) {
    if (seed == 0) return 0.0;  // aligned phases: the singular witness
    bool canonical = false;
    for (int d = static_cast<int>(xi.size()) - 1; d >= 0; --d) {
        if (xi[static_cast<size_t>(d)] != 0) {
            canonical = xi[static_cast<size_t>(d)] > 0;
            break;
        }
    }
    if (!canonical) {
        std::vector<int> neg(xi.begin(), xi.end());
        for (int& v : neg) v = -v;
        return -power_law_phase(seed, neg);
    }
    std::uint64_t h = seed;
    for (int v : xi) h = hash_combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(v) + 0x10000));
    std::uint64_t st = h;
    return uniform01(st) * kTwoPi;
}

Regularity term_grade(const Term& t, int dims) {
    struct V {
        int dims;
        Regularity operator()(const ConstTerm&) const { return Regularity::infinite(); }
        Regularity operator()(const TrigTerm&) const { return Regularity::infinite(); }
        Regularity operator()(const PowerLawTerm& p) const {
            if (p.truncated) return Regularity::infinite();
            return Regularity::finite(power_law_base_grade(p.beta, dims) - p.deriv.order());
        }
        Regularity operator()(const ProductTerm& p) const { return p.grade; }
        Regularity operator()(const DerivTerm& d) const {
            return d.body->exact_grade().minus(d.index.order());
        }
    };
    return std::visit(V{dims}, t);
}

ScalarCoefficient::ScalarCoefficient(int dims, std::vector<Term> terms)
    : dims_(dims), terms_(std::move(terms)) {
    if (dims < 1) throw std::invalid_argument("ScalarCoefficient: dims >= 1");
    for (const auto& t : terms_) {
        std::visit(TermDims{dims_}, t);
        Regularity g = term_grade(t, dims_);
        if (!g.is_infinite() && g.value() < 0)
            throw GradeError("coefficient term has negative grade " + g.str());
    }
}

ScalarCoefficient ScalarCoefficient::constant(int dims, double v) {
    if (v == 0.0) return zero(dims);
    return ScalarCoefficient(dims, {ConstTerm{v}});
}

ScalarCoefficient ScalarCoefficient::trig(int dims, std::vector<TrigMode> modes) {
    return ScalarCoefficient(dims, {TrigTerm{std::move(modes)}});
}

ScalarCoefficient ScalarCoefficient::cosine(std::vector<int> freq, double amp, double phase) {
    int dims = static_cast<int>(freq.size());
    return trig(dims, {TrigMode{std::move(freq), amp, phase}});
}

ScalarCoefficient ScalarCoefficient::power_law(int dims, double beta, long long cap,
                                               std::uint64_t seed, double scale) {
    PowerLawTerm t;
    t.beta = beta;
    t.cap = cap;
    t.seed = seed;
    t.scale = scale;
    t.deriv = MultiIndex::zero(dims);
    return ScalarCoefficient(dims, {Term{std::move(t)}});
}

Regularity ScalarCoefficient::exact_grade() const {
    Regularity g = Regularity::infinite();
    for (const auto& t : terms_) g = Regularity::min(g, term_grade(t, dims_));
    return g;
}

ScalarCoefficient ScalarCoefficient::scaled(double s) const {
    if (s == 0.0) return zero(dims_);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Term copy = t;
        std::visit(
            [s](auto& term) {
                using T = std::decay_t<decltype(term)>;
                if constexpr (std::is_same_v<T, ConstTerm>) {
                    term.value *= s;
                } else if constexpr (std::is_same_v<T, TrigTerm>) {
                    for (auto& m : term.modes) m.amp *= s;
                } else {
                    term.scale *= s;
                }
            },
            copy);
        out.push_back(std::move(copy));
    }
    return ScalarCoefficient(dims_, std::move(out));
}

ScalarCoefficient operator+(const ScalarCoefficient& a, const ScalarCoefficient& b) {
    if (a.dims_ != b.dims_) throw std::invalid_argument("coefficient sum: dimension mismatch");
    std::vector<Term> out = a.terms_;
    out.insert(out.end(), b.terms_.begin(), b.terms_.end());
    return ScalarCoefficient(a.dims_, std::move(out));
}

ScalarCoefficient ScalarCoefficient::derivative(const MultiIndex& j) const {
    if (j.dims() != dims_) throw std::invalid_argument("derivative: index dimension mismatch");
    if (j.order() == 0) return *this;
    Regularity g = exact_grade();
    if (!g.is_infinite() && g.value() < j.order())
        throw GradeError("derivative of order " + std::to_string(j.order()) +
                         " exceeds coefficient grade " + g.str());
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (std::holds_alternative<ConstTerm>(t)) continue;
        if (const auto* tr = std::get_if<TrigTerm>(&t)) {
            TrigTerm d;
            for (const auto& m : tr->modes) {
                double amp = m.amp;
                for (int c = 0; c < dims_; ++c)
                    for (int r = 0; r < j[c]; ++r) amp *= m.freq[static_cast<size_t>(c)];
                if (amp == 0.0) continue;
                d.modes.push_back(TrigMode{m.freq, amp, m.phase + j.order() * (kTwoPi / 4.0)});
            }
            if (!d.modes.empty()) out.emplace_back(std::move(d));
        } else if (const auto* pl = std::get_if<PowerLawTerm>(&t)) {
            PowerLawTerm d = *pl;
            d.deriv = d.deriv + j;
            out.emplace_back(std::move(d));
        } else if (const auto* pr = std::get_if<ProductTerm>(&t)) {
            auto body = std::make_shared<const ScalarCoefficient>(
                ScalarCoefficient(dims_, {ProductTerm{1.0, pr->lhs, pr->rhs, pr->grade}}));
            out.emplace_back(DerivTerm{pr->scale, std::move(body), j});
        } else if (const auto* dv = std::get_if<DerivTerm>(&t)) {
            out.emplace_back(DerivTerm{dv->scale, dv->body, dv->index + j});
        }
    }
    return ScalarCoefficient(dims_, std::move(out));
}

std::pair<ScalarCoefficient, GradeCertificate> ScalarCoefficient::multiply(
    const ScalarCoefficient& a, const ScalarCoefficient& b) {
    if (a.dims() != b.dims()) throw std::invalid_argument("multiply: dimension mismatch");
    const int n = a.dims();
    if (a.is_zero() || b.is_zero())
        return {zero(n), GradeCertificate{Regularity::infinite(),
                                          GradeCertificate::Rule::product_rule, "zero factor"}};
    Regularity ga = a.exact_grade(), gb = b.exact_grade();
    auto g = product_grade(ga, gb, n);
    if (!g)
        throw GradeError("ungraded product: H^" + ga.str() + " * H^" + gb.str() + " in " +
                         std::to_string(n) + " variables has no product grade");
    std::ostringstream detail;
    detail << "S(" << ga.str() << "," << gb.str() << ") = " << g->str();
    GradeCertificate cert{*g, GradeCertificate::Rule::product_rule, detail.str()};

    // Constants fold into scales; everything else stays an opaque product.
    if (a.terms().size() == 1)
        if (const auto* c = std::get_if<ConstTerm>(&a.terms().front()))
            return {b.scaled(c->value), cert};
    if (b.terms().size() == 1)
        if (const auto* c = std::get_if<ConstTerm>(&b.terms().front()))
            return {a.scaled(c->value), cert};
    auto pa = std::make_shared<const ScalarCoefficient>(a);
    auto pb = std::make_shared<const ScalarCoefficient>(b);
    return {ScalarCoefficient(n, {ProductTerm{1.0, std::move(pa), std::move(pb), *g}}), cert};
}

double ScalarCoefficient::eval(std::span<const double> x) const {
    return eval_derivative(MultiIndex::zero(dims_), x);
}

namespace {

double eval_term_derivative(const Term& t, int dims, const MultiIndex& j,
                            std::span<const double> x);

double eval_coeff_derivative(const ScalarCoefficient& c, const MultiIndex& j,
                             std::span<const double> x) {
    double acc = 0.0;
    for (const auto& t : c.terms()) acc += eval_term_derivative(t, c.dims(), j, x);
    return acc;
}

double eval_term_derivative(const Term& t, int dims, const MultiIndex& j,
                            std::span<const double> x) {
    if (const auto* c = std::get_if<ConstTerm>(&t)) return j.order() == 0 ? c->value : 0.0;
    if (const auto* tr = std::get_if<TrigTerm>(&t)) {
        double acc = 0.0;
        for (const auto& m : tr->modes) {
            double amp = m.amp, arg = m.phase + j.order() * (kTwoPi / 4.0);
            for (int c = 0; c < dims; ++c) {
                for (int r = 0; r < j[c]; ++r) amp *= m.freq[static_cast<size_t>(c)];
                arg += m.freq[static_cast<size_t>(c)] * x[static_cast<size_t>(c)];
            }
            acc += amp * std::cos(arg);
        }
        return acc;
    }
    if (const auto* pl = std::get_if<PowerLawTerm>(&t)) {
        MultiIndex total = pl->deriv + j;
        long long K = std::min(pl->cap, eval_cap(dims));
        double acc = 0.0;
        if (dims == 1) {
            for (long long k = 1; k <= K; ++k) {
                double theta = power_law_phase(pl->seed, std::array<int, 1>{static_cast<int>(k)});
                double amp = std::pow(static_cast<double>(k), -pl->beta);
                for (int r = 0; r < total[0]; ++r) amp *= static_cast<double>(k);
                // 2 Re[(i k)^d e^{i(kx+theta)}] with the i^d folded into the angle
                acc += 2.0 * amp * std::cos(k * x[0] + theta + total.order() * (kTwoPi / 4.0));
            }
        } else {
            int Ki = static_cast<int>(K);
            for (int b = 0; b <= Ki; ++b) {
                for (int a = (b == 0 ? 1 : -Ki); a <= Ki; ++a) {
                    double r2 = static_cast<double>(a) * a + static_cast<double>(b) * b;
                    if (r2 > static_cast<double>(K) * static_cast<double>(K)) continue;
                    std::array<int, 2> xi{a, b};
                    double theta = power_law_phase(pl->seed, xi);
                    double amp = std::pow(r2, -0.5 * pl->beta);
                    for (int c = 0; c < 2; ++c)
                        for (int r = 0; r < total[c]; ++r) amp *= xi[static_cast<size_t>(c)];
                    double arg = a * x[0] + b * x[1] + theta + total.order() * (kTwoPi / 4.0);
                    acc += 2.0 * amp * std::cos(arg);
                }
            }
        }
        return pl->scale * acc;
    }
    if (const auto* pr = std::get_if<ProductTerm>(&t)) {
        double acc = 0.0;
        for (const auto& m : enumerate_below(j)) {
            double lhs = eval_coeff_derivative(*pr->lhs, m, x);
            double rhs = eval_coeff_derivative(*pr->rhs, sub(j, m), x);
            acc += static_cast<double>(binom(j, m)) * lhs * rhs;
        }
        return pr->scale * acc;
    }
    const auto& dv = std::get<DerivTerm>(t);
    return dv.scale * eval_coeff_derivative(*dv.body, dv.index + j, x);
}

}  // namespace

double ScalarCoefficient::eval_derivative(const MultiIndex& j, std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dims_ || j.dims() != dims_)
        throw std::invalid_argument("eval_derivative: dimension mismatch");
    return eval_coeff_derivative(*this, j, x);
}

// --- Coefficient (matrix) ---------------------------------------------------

Coefficient Coefficient::scalar(ScalarCoefficient c) {
    Coefficient m(c.dims(), 1, 1);
    m.set_entry(0, 0, std::move(c));
    return m;
}

Coefficient Coefficient::identity(int dims, int q) {
    Coefficient m(dims, q, q);
    for (int i = 0; i < q; ++i) m.set_entry(i, i, ScalarCoefficient::constant(dims, 1.0));
    return m;
}

Coefficient Coefficient::constant_matrix(int dims, int q, const std::vector<double>& row_major) {
    if (static_cast<int>(row_major.size()) != q * q)
        throw std::invalid_argument("constant_matrix: size mismatch");
    Coefficient m(dims, q, q);
    for (int r = 0; r < q; ++r)
        for (int c = 0; c < q; ++c)
            m.set_entry(r, c, ScalarCoefficient::constant(dims, row_major[static_cast<size_t>(r) * q + c]));
    return m;
}

void Coefficient::set_entry(int r, int c, ScalarCoefficient sc) {
    if (sc.dims() != dims_) throw std::invalid_argument("set_entry: dimension mismatch");
    if (declared_ && !(*declared_ <= sc.exact_grade()))
        throw GradeError("entry grade below declared matrix grade");
    e_[static_cast<size_t>(r) * cols_ + static_cast<size_t>(c)] = std::move(sc);
}

bool Coefficient::is_zero() const {
    for (const auto& sc : e_)
        if (!sc.is_zero()) return false;
    return true;
}

Regularity Coefficient::exact_grade() const {
    Regularity g = Regularity::infinite();
    for (const auto& sc : e_) g = Regularity::min(g, sc.exact_grade());
    return g;
}

void Coefficient::declare_grade(Regularity g) {
    if (!(g <= exact_grade())) throw GradeError("declared grade exceeds exact grade");
    declared_ = g;
}

Coefficient Coefficient::scaled(double s) const {
    Coefficient out(dims_, rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out.set_entry(r, c, entry(r, c).scaled(s));
    out.declared_ = declared_;
    return out;
}

Coefficient Coefficient::transpose() const {
    Coefficient out(dims_, cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out.set_entry(c, r, entry(r, c));
    out.declared_ = declared_;
    return out;
}

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    if (a.dims_ != b.dims_ || a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("coefficient matrix sum: shape mismatch");
    Coefficient out(a.dims_, a.rows_, a.cols_);
    for (int r = 0; r < a.rows_; ++r)
        for (int c = 0; c < a.cols_; ++c) out.set_entry(r, c, a.entry(r, c) + b.entry(r, c));
    return out;
}

Coefficient Coefficient::derivative(const MultiIndex& j) const {
    Coefficient out(dims_, rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out.set_entry(r, c, entry(r, c).derivative(j));
    return out;
}

std::pair<Coefficient, GradeCertificate> Coefficient::multiply(const Coefficient& a,
                                                               const Coefficient& b) {
    if (a.dims() != b.dims()) throw std::invalid_argument("matrix multiply: dimension mismatch");
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix multiply: shape mismatch");
    Coefficient out(a.dims(), a.rows(), b.cols());
    Regularity worst = Regularity::infinite();
    std::string detail;
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < b.cols(); ++c) {
            ScalarCoefficient acc = ScalarCoefficient::zero(a.dims());
            for (int m = 0; m < a.cols(); ++m) {
                if (a.entry(r, m).is_zero() || b.entry(m, c).is_zero()) continue;
                auto [prod, cert] = ScalarCoefficient::multiply(a.entry(r, m), b.entry(m, c));
                if (cert.grade < worst) {
                    worst = cert.grade;
                    detail = cert.detail;
                }
                acc = acc + prod;
            }
            out.set_entry(r, c, std::move(acc));
        }
    }
    return {out, GradeCertificate{worst, GradeCertificate::Rule::product_rule, detail}};
}

Coefficient Coefficient::conjugated(const std::vector<double>& left,
                                    const std::vector<double>& right) const {
    const int q = rows_;
    if (cols_ != q || static_cast<int>(left.size()) != q * q ||
        static_cast<int>(right.size()) != q * q)
        throw std::invalid_argument("conjugated: square shapes required");
    Coefficient out(dims_, q, q);
    for (int r = 0; r < q; ++r) {
        for (int c = 0; c < q; ++c) {
            ScalarCoefficient acc = ScalarCoefficient::zero(dims_);
            for (int m = 0; m < q; ++m) {
                for (int p = 0; p < q; ++p) {
                    double w = left[static_cast<size_t>(r) * q + m] * right[static_cast<size_t>(p) * q + c];
                    if (w == 0.0 || entry(m, p).is_zero()) continue;
                    acc = acc + entry(m, p).scaled(w);
                }
            }
            out.set_entry(r, c, std::move(acc));
        }
    }
    return out;
}

std::vector<double> Coefficient::eval(std::span<const double> x) const {
    std::vector<double> out(static_cast<size_t>(rows_) * cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            out[static_cast<size_t>(r) * cols_ + static_cast<size_t>(c)] = entry(r, c).eval(x);
    return out;
}

}  // namespace ksafe
