// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ksafe/field.hpp"
#include "ksafe/grid.hpp"
#include "ksafe/multiindex.hpp"
#include "ksafe/regularity.hpp"

namespace ksafe {

class ScalarCoefficient;
using ScalarCoefficientPtr = std::shared_ptr<const ScalarCoefficient>;

// How a grade was assigned; the chain is replayable from the fields.
struct GradeCertificate {
    enum class Rule { term_minimum, product_rule, derivative_decrement };
    Regularity grade;
    Rule rule = Rule::term_minimum;
    std::string detail;
};

// --- coefficient terms ---------------------------------------------------

struct ConstTerm {
    double value = 0.0;
};

struct TrigMode {
    std::vector<int> freq;  // in Z^n
    double amp = 0.0;
    double phase = 0.0;
};

// Finite sum of amp * cos(freq.x + phase); exact grade infinity.
struct TrigTerm {
    std::vector<TrigMode> modes;
};

// scale * sum_{1<=|xi|<=cap} |xi|^-beta cos(xi.x + theta_xi), differentiated
// `deriv` times (spectral factor (i xi)^deriv). Phases come from the seed:
// seed 0 means all-zero phases (the singular witness, partial sums blowing
// up at x = 0); otherwise theta_xi is a splitmix64 hash of (seed, xi).
// The model is graded by its cap -> infinity limit; a term marked
// `truncated` is an honest finite trig sum and grades as smooth.
struct PowerLawTerm {
    double beta = 0.0;
    long long cap = 0;
    std::uint64_t seed = 0;
    double scale = 1.0;
    MultiIndex deriv;  // zero multiindex when underived
    bool truncated = false;
};

// Opaque pointwise product; kept unexpanded, sampled lazily with dealiasing.
struct ProductTerm {
    double scale = 1.0;
    ScalarCoefficientPtr lhs, rhs;
    Regularity grade;  // product_grade at construction time
};

// Opaque spectral derivative of a compound body.
struct DerivTerm {
    double scale = 1.0;
    ScalarCoefficientPtr body;
    MultiIndex index;
};

using Term = std::variant<ConstTerm, TrigTerm, PowerLawTerm, ProductTerm, DerivTerm>;

Regularity term_grade(const Term& t, int dims);

// --- scalar coefficients --------------------------------------------------

// A function on T^n with exactly known Sobolev grade: a finite sum of terms.
// Immutable after construction.
class ScalarCoefficient {
   public:
    explicit ScalarCoefficient(int dims) : dims_(dims) {
        if (dims < 1) throw std::invalid_argument("ScalarCoefficient: dims >= 1");
    }
    ScalarCoefficient(int dims, std::vector<Term> terms);

    static ScalarCoefficient zero(int dims) { return ScalarCoefficient(dims); }
    static ScalarCoefficient constant(int dims, double v);
    static ScalarCoefficient trig(int dims, std::vector<TrigMode> modes);
    // amp * cos(freq.x + phase)
    static ScalarCoefficient cosine(std::vector<int> freq, double amp = 1.0, double phase = 0.0);
    static ScalarCoefficient power_law(int dims, double beta, long long cap, std::uint64_t seed,
                                       double scale = 1.0);

    int dims() const { return dims_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Minimum over term grades; infinity for the zero coefficient.
    Regularity exact_grade() const;

    ScalarCoefficient scaled(double s) const;
    friend ScalarCoefficient operator+(const ScalarCoefficient& a, const ScalarCoefficient& b);

    // Term-wise spectral differentiation; grade drops by |j|.
    // Rejects |j| > exact_grade.
    ScalarCoefficient derivative(const MultiIndex& j) const;

    // Pointwise product, graded by the multiplication rule; throws
    // GradeError("ungraded product ...") when the rule gives no conclusion.
    static std::pair<ScalarCoefficient, GradeCertificate> multiply(const ScalarCoefficient& a,
                                                                   const ScalarCoefficient& b);

    // Exact model evaluation (not grid-limited).
    double eval(std::span<const double> x) const;
    double eval_derivative(const MultiIndex& j, std::span<const double> x) const;

   private:
    int dims_;
    std::vector<Term> terms_;
};

// --- matrix-valued coefficients -------------------------------------------

// q_out x q_in matrix of scalar parts; the grade of a matrix is the minimum
// entry grade. declared_grade() <= exact_grade() always (grade soundness).
class Coefficient {
   public:
    Coefficient(int dims, int rows, int cols)
        : dims_(dims), rows_(rows), cols_(cols),
          e_(static_cast<size_t>(rows) * cols, ScalarCoefficient(dims)) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("Coefficient: positive shape");
    }
    static Coefficient scalar(ScalarCoefficient c);
    static Coefficient identity(int dims, int q);
    static Coefficient constant_matrix(int dims, int q, const std::vector<double>& row_major);

    int dims() const { return dims_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const ScalarCoefficient& entry(int r, int c) const {
        return e_[static_cast<size_t>(r) * cols_ + static_cast<size_t>(c)];
    }
    void set_entry(int r, int c, ScalarCoefficient sc);

    bool is_zero() const;
    Regularity exact_grade() const;
    Regularity declared_grade() const { return declared_ ? *declared_ : exact_grade(); }
    void declare_grade(Regularity g);

    Coefficient scaled(double s) const;
    Coefficient transpose() const;
    friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
    Coefficient derivative(const MultiIndex& j) const;

    // Pointwise matrix product with grade certificate (minimum over the
    // entry products).
    static std::pair<Coefficient, GradeCertificate> multiply(const Coefficient& a,
                                                             const Coefficient& b);

    // L * A * R with constant numeric matrices (exact, grade preserved).
    Coefficient conjugated(const std::vector<double>& left, const std::vector<double>& right) const;

    // Exact pointwise evaluation, row-major.
    std::vector<double> eval(std::span<const double> x) const;

   private:
    int dims_, rows_, cols_;
    std::vector<ScalarCoefficient> e_;
    std::optional<Regularity> declared_;
};

// --- sampling --------------------------------------------------------------

// Deterministic evaluation on a grid: trig terms placed exactly in the
// spectrum, power-law terms synthesized up to min(cap, Nyquist-1), products
// formed with dealiasing. Throws if a trig frequency does not fit.
std::vector<cd> sample_spectrum(const ScalarCoefficient& c, const TorusGrid& grid);
SpectralField sample(const ScalarCoefficient& c, const TorusGrid& grid);

// Phase of the power-law mode xi for a given seed (canonical-half key;
// theta(-xi) = -theta(xi)).
double power_law_phase(std::uint64_t seed, std::span<const int> xi);

}  // namespace ksafe
