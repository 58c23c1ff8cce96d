#pragma once

#include <optional>

#include "ellcon/polynomial.hpp"

namespace ellcon {

/// Element (P(x) + Q(x) y) / R(x) of the function field of y^2 = x(x-1)(x-lambda).
///
/// Every one-form on the curve is handled as (FieldElement) * omega with
/// omega = dx/(2y), so this type is also the carrier for differentials.
/// The denominator is kept monic; y^2 is always reduced to p(x).
class FieldElement {
public:
    FieldElement(cplx lambda, Polynomial p_part, Polynomial q_part, Polynomial denominator = Polynomial::constant(1.0));

    static FieldElement zero(cplx lambda);
    static FieldElement constant(cplx lambda, cplx c);
    static FieldElement x(cplx lambda);
    static FieldElement y(cplx lambda);

    cplx lambda() const noexcept { return lambda_; }
    const Polynomial& p_part() const noexcept { return p_; }
    const Polynomial& q_part() const noexcept { return q_; }
    const Polynomial& denominator() const noexcept { return r_; }
    /// x(x-1)(x-lambda)
    Polynomial curve_polynomial() const;

    bool is_zero() const noexcept { return p_.is_zero() && q_.is_zero(); }

    /// Order of vanishing at the point at infinity, read off from degrees
    /// (x has a double pole there, y a triple pole). Empty for the zero element.
    std::optional<long> order_at_infinity() const;

    /// Value at an affine point (x, y); throws EvaluationAtPole when R(x) vanishes.
    cplx eval(cplx x, cplx y) const;

    FieldElement conjugate() const;
    /// d(this) / omega, using dx/omega = 2y and dy/omega = p'(x).
    FieldElement derivative_over_omega() const;
    /// Cancels linear factors shared by R and both numerator parts. Runs only
    /// when deg R exceeds min_denominator_degree.
    FieldElement normalized(std::size_t min_denominator_degree = 0) const;
    /// Same element rewritten over the given denominator, which must be a
    /// polynomial multiple of the current one.
    FieldElement over_denominator(const Polynomial& target) const;

    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& rhs);
    FieldElement& operator-=(const FieldElement& rhs);
    FieldElement& operator*=(const FieldElement& rhs);
    FieldElement& operator/=(const FieldElement& rhs);
    FieldElement& operator*=(cplx s);

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
    friend FieldElement operator*(FieldElement a, cplx s) { return a *= s; }
    friend FieldElement operator*(cplx s, FieldElement a) { return a *= s; }

private:
    void check_same_curve(const FieldElement& other) const;
    void make_monic();

    cplx lambda_;
    Polynomial p_;
    Polynomial q_;
    Polynomial r_;
};

enum class FieldOp { add, sub, mul, div };

FieldElement fe_arith(const FieldElement& a, const FieldElement& b, FieldOp op);

/// True when a - b vanishes: compares P_a R_b with P_b R_a (and likewise for
/// Q) coefficient-wise relative to the largest coefficient involved.
bool approx_equal(const FieldElement& a, const FieldElement& b, double rel_tol);

/// Exact polynomial quotient target / divisor, or empty when the remainder
/// exceeds rel_tol relative to the target's coefficient scale.
std::optional<Polynomial> exact_quotient(const Polynomial& target, const Polynomial& divisor, double rel_tol = 1e-12);

}  // namespace ellcon
