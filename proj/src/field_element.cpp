#include "ellcon/field_element.hpp"

#include <algorithm>
#include <cmath>

#include "ellcon/error.hpp"

namespace ellcon {

namespace {

constexpr double kPoleTolerance = 1e-12;
constexpr double kCommonRootTolerance = 1e-10;

Polynomial curve_poly(cplx lambda) { return Polynomial::from_roots({cplx{0.0}, cplx{1.0}, lambda}); }

}  // namespace

std::optional<Polynomial> exact_quotient(const Polynomial& target, const Polynomial& divisor, double rel_tol) {
    auto [q, r] = target.divmod(divisor);
    if (r.max_abs_coefficient() > rel_tol * std::max(target.max_abs_coefficient(), 1e-300)) return std::nullopt;
    return q;
}

FieldElement::FieldElement(cplx lambda, Polynomial p_part, Polynomial q_part, Polynomial denominator)
    : lambda_(lambda), p_(std::move(p_part)), q_(std::move(q_part)), r_(std::move(denominator)) {
    if (r_.is_zero()) throw Error(ErrorCode::DivisionByZeroElement, "field element with zero denominator");
    make_monic();
}

FieldElement FieldElement::zero(cplx lambda) { return FieldElement(lambda, {}, {}); }

FieldElement FieldElement::constant(cplx lambda, cplx c) { return FieldElement(lambda, Polynomial::constant(c), {}); }

FieldElement FieldElement::x(cplx lambda) { return FieldElement(lambda, Polynomial::x(), {}); }

FieldElement FieldElement::y(cplx lambda) { return FieldElement(lambda, {}, Polynomial::constant(1.0)); }

Polynomial FieldElement::curve_polynomial() const { return curve_poly(lambda_); }

void FieldElement::make_monic() {
    const cplx lead = r_.leading();
    if (lead == cplx{1.0}) return;
    const cplx inv = 1.0 / lead;
    p_ *= inv;
    q_ *= inv;
    r_ *= inv;
}

void FieldElement::check_same_curve(const FieldElement& other) const {
    if (lambda_ != other.lambda_) throw Error(ErrorCode::ValidationError, "field elements live on different curves");
}

std::optional<long> FieldElement::order_at_infinity() const {
    if (is_zero()) return std::nullopt;
    const long r_weight = 2 * static_cast<long>(*r_.degree());
    long best = 0;
    bool have = false;
    if (!p_.is_zero()) {
        best = -2 * static_cast<long>(*p_.degree());
        have = true;
    }
    if (!q_.is_zero()) {
        const long w = -2 * static_cast<long>(*q_.degree()) - 3;
        best = have ? std::min(best, w) : w;
    }
    return r_weight + best;
}

cplx FieldElement::eval(cplx x, cplx y) const {
    const cplx den = r_(x);
    if (std::abs(den) <= kPoleTolerance * r_.abs_scale(x))
        throw Error(ErrorCode::EvaluationAtPole, "denominator vanishes at the evaluation point");
    return (p_(x) + q_(x) * y) / den;
}

FieldElement FieldElement::conjugate() const { return FieldElement(lambda_, p_, -q_, r_); }

FieldElement FieldElement::derivative_over_omega() const {
    const Polynomial pc = curve_polynomial();
    const Polynomial dp = p_.derivative();
    const Polynomial dq = q_.derivative();
    const Polynomial dr = r_.derivative();
    Polynomial new_p = 2.0 * ((dq * r_ - q_ * dr) * pc) + pc.derivative() * q_ * r_;
    Polynomial new_q = 2.0 * (dp * r_ - p_ * dr);
    return FieldElement(lambda_, std::move(new_p), std::move(new_q), r_ * r_);
}

FieldElement FieldElement::normalized(std::size_t min_denominator_degree) const {
    if (*r_.degree() <= min_denominator_degree) return *this;
    Polynomial p = p_, q = q_, r = r_;
    for (const cplx& root : r_.roots()) {
        const bool p_vanishes = p.is_zero() || std::abs(p(root)) <= kCommonRootTolerance * p.abs_scale(root);
        const bool q_vanishes = q.is_zero() || std::abs(q(root)) <= kCommonRootTolerance * q.abs_scale(root);
        const bool r_vanishes = std::abs(r(root)) <= kCommonRootTolerance * r.abs_scale(root);
        if (!(p_vanishes && q_vanishes && r_vanishes)) continue;
        if (!p.is_zero()) p = p.deflate(root);
        if (!q.is_zero()) q = q.deflate(root);
        r = r.deflate(root);
    }
    return FieldElement(lambda_, std::move(p), std::move(q), std::move(r));
}

FieldElement FieldElement::over_denominator(const Polynomial& target) const {
    auto factor = exact_quotient(target, r_);
    if (!factor) throw Error(ErrorCode::ValidationError, "target denominator is not a multiple of the current one");
    return FieldElement(lambda_, p_ * *factor, q_ * *factor, r_ * *factor);
}

FieldElement FieldElement::operator-() const { return FieldElement(lambda_, -p_, -q_, r_); }

FieldElement& FieldElement::operator+=(const FieldElement& rhs) {
    check_same_curve(rhs);
    if (rhs.is_zero()) return *this;
    if (is_zero()) return *this = rhs;
    if (r_ == rhs.r_) {
        p_ += rhs.p_;
        q_ += rhs.q_;
        return *this;
    }
    if (auto f = exact_quotient(rhs.r_, r_)) {
        p_ = p_ * *f + rhs.p_;
        q_ = q_ * *f + rhs.q_;
        r_ = rhs.r_;
        return *this;
    }
    if (auto f = exact_quotient(r_, rhs.r_)) {
        p_ += rhs.p_ * *f;
        q_ += rhs.q_ * *f;
        return *this;
    }
    p_ = p_ * rhs.r_ + rhs.p_ * r_;
    q_ = q_ * rhs.r_ + rhs.q_ * r_;
    r_ *= rhs.r_;
    make_monic();
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& rhs) { return *this += -rhs; }

FieldElement& FieldElement::operator*=(const FieldElement& rhs) {
    check_same_curve(rhs);
    const Polynomial pc = curve_polynomial();
    Polynomial new_p = p_ * rhs.p_ + q_ * rhs.q_ * pc;
    Polynomial new_q = p_ * rhs.q_ + q_ * rhs.p_;
    p_ = std::move(new_p);
    q_ = std::move(new_q);
    r_ *= rhs.r_;
    make_monic();
    return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& rhs) {
    check_same_curve(rhs);
    if (rhs.is_zero()) throw Error(ErrorCode::DivisionByZeroElement, "division by the zero field element");
    // a / b = a * conj(b) * R_b / (P_b^2 - Q_b^2 p)
    const Polynomial pc = curve_polynomial();
    const Polynomial norm = rhs.p_ * rhs.p_ - rhs.q_ * rhs.q_ * pc;
    *this *= FieldElement(lambda_, rhs.p_ * rhs.r_, -(rhs.q_ * rhs.r_), Polynomial::constant(1.0));
    r_ *= norm;
    make_monic();
    return *this;
}

FieldElement& FieldElement::operator*=(cplx s) {
    p_ *= s;
    q_ *= s;
    return *this;
}

FieldElement fe_arith(const FieldElement& a, const FieldElement& b, FieldOp op) {
    switch (op) {
        case FieldOp::add: return a + b;
        case FieldOp::sub: return a - b;
        case FieldOp::mul: return a * b;
        case FieldOp::div: return a / b;
    }
    return a;
}

bool approx_equal(const FieldElement& a, const FieldElement& b, double rel_tol) {
    if (a.lambda() != b.lambda()) return false;
    const Polynomial pa = a.p_part() * b.denominator();
    const Polynomial pb = b.p_part() * a.denominator();
    const Polynomial qa = a.q_part() * b.denominator();
    const Polynomial qb = b.q_part() * a.denominator();
    const double scale = std::max({pa.max_abs_coefficient(), pb.max_abs_coefficient(), qa.max_abs_coefficient(),
                                   qb.max_abs_coefficient(), 1e-300});
    return (pa - pb).max_abs_coefficient() <= rel_tol * scale && (qa - qb).max_abs_coefficient() <= rel_tol * scale;
}

}  // namespace ellcon
