#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "ellcon/field_element.hpp"
#include "ellcon/laurent_series.hpp"

namespace ellcon {

struct CurvePoint {
    enum class Kind { affine, infinity };

    Kind kind = Kind::affine;
    cplx x{};
    cplx y{};

    static CurvePoint affine(cplx x, cplx y) { return {Kind::affine, x, y}; }
    static CurvePoint infinity() { return {Kind::infinity, {}, {}}; }
    bool is_affine() const noexcept { return kind == Kind::affine; }
};

enum class Weierstrass { w0, w1, wlambda };

/// The elliptic curve y^2 = x(x-1)(x-lambda) with its 2-torsion points.
class Curve {
public:
    cplx lambda() const noexcept { return lambda_; }
    /// x(x-1)(x-lambda)
    const Polynomial& p() const noexcept { return p_; }
    CurvePoint weierstrass(Weierstrass w) const;
    std::array<CurvePoint, 3> affine_weierstrass() const;
    /// |y^2 - p(x)| <= 1e-10 (1 + |p(x)| + |y|^2)
    bool contains(const CurvePoint& pt) const;
    /// Affine point with the given x and y the principal square root of p(x).
    CurvePoint point_at(cplx x) const;

    FieldElement x() const { return FieldElement::x(lambda_); }
    FieldElement y() const { return FieldElement::y(lambda_); }
    FieldElement constant(cplx c) const { return FieldElement::constant(lambda_, c); }

private:
    friend Curve make_curve(cplx lambda);
    Curve(cplx lambda, Polynomial p) : lambda_(lambda), p_(std::move(p)) {}

    cplx lambda_;
    Polynomial p_;
};

/// Throws DegenerateCurve when lambda is within 1e-10 of 0 or 1.
Curve make_curve(cplx lambda);

struct DivisorEntry {
    CurvePoint point;
    int multiplicity = 1;
};

/// Formal sum of distinct curve points with nonzero multiplicities.
class Divisor {
public:
    Divisor() = default;
    explicit Divisor(std::vector<DivisorEntry> entries);
    /// Reduced divisor t_1 + ... + t_n.
    static Divisor reduced(std::span<const CurvePoint> points);

    const std::vector<DivisorEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const CurvePoint& point(std::size_t j) const { return entries_.at(j).point; }

private:
    std::vector<DivisorEntry> entries_;
};

/// Throws InvalidDivisor unless D is reduced, affine, on the curve, and
/// disjoint from the Weierstrass points (so no t_j has y_j = 0).
void validate_polar_divisor(const Curve& curve, const Divisor& d);

/// Local uniformization around an affine point.
///
/// At a Weierstrass point the coordinate is tau = y and x(tau) is even; at
/// any other point tau = x - x0 and y(tau) is pinned to the center's branch.
struct Chart {
    enum class Kind { y_at_weierstrass, xshift_at_generic };

    CurvePoint center;
    Kind kind = Kind::xshift_at_generic;
    LaurentSeries x_series;
    LaurentSeries y_series;
    /// omega / d tau
    LaurentSeries omega_series;
};

constexpr int kDefaultChartOrder = 8;

Chart chart_at(const Curve& curve, const CurvePoint& pt, int order = kDefaultChartOrder);

/// Laurent expansion of a in the chart coordinate; the valuation is the order of a at the center.
LaurentSeries expand_function(const FieldElement& a, const Chart& chart);

/// Residue of the one-form h * omega at an affine point.
cplx residue_of_form(const FieldElement& h, const Curve& curve, const CurvePoint& pt);

cplx fe_eval(const FieldElement& a, const CurvePoint& pt);
FieldElement fe_derivative_over_omega(const FieldElement& a, const Curve& curve);

/// The n+3 one-forms with at most simple poles on w0 + w1 + wlambda + D, each stored as form / omega.
struct BasisForms {
    FieldElement omega;
    FieldElement phi0;
    FieldElement phi1;
    std::vector<FieldElement> theta;

    /// omega, phi0, phi1, theta_1..theta_n in that order.
    std::vector<FieldElement> all() const;
};

BasisForms basis_forms(const Curve& curve, const Divisor& d);

/// x(x-1)(x-lambda) prod_j (x - x_j): every basis form is a polynomial multiple of y / this, plus a polynomial part.
Polynomial basis_common_denominator(const Curve& curve, const Divisor& d);

/// Uniform x in the disc |x| < radius, at least `margin` away from every x in `avoid`.
CurvePoint sample_curve_point(const Curve& curve, std::mt19937_64& rng, std::span<const cplx> avoid,
                              double margin = 1e-3, double radius = 3.0);

}  // namespace ellcon
