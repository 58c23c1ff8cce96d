#include "support.hpp"

using namespace ellcon;
using ellcon::test::close;
using ellcon::test::divisor_at;
using ellcon::test::throws_code;

namespace {

const cplx kLam{-0.6, 1.1};

cplx p_of(cplx x) { return x * (x - 1.0) * (x - kLam); }

}  // namespace

TEST(Curve, DegenerateLambdaRejected) {
    EXPECT_TRUE(throws_code([] { make_curve(0.0); }, ErrorCode::DegenerateCurve));
    EXPECT_TRUE(throws_code([] { make_curve(1.0 + 1e-12); }, ErrorCode::DegenerateCurve));
    EXPECT_NO_THROW(make_curve(1.0 + 1e-6));
}

TEST(Curve, WeierstrassPointsAndMembership) {
    const Curve c = make_curve(kLam);
    const auto w = c.affine_weierstrass();
    EXPECT_TRUE(close(w[0].x, 0.0, 0.0));
    EXPECT_TRUE(close(w[1].x, 1.0, 0.0));
    EXPECT_TRUE(close(w[2].x, kLam, 0.0));
    for (const auto& p : w) EXPECT_TRUE(c.contains(p));
    EXPECT_FALSE(c.contains(CurvePoint::affine(2.0, 1.0)));
    EXPECT_TRUE(c.contains(c.point_at({0.7, -2.0})));
}

TEST(Chart, WeierstrassChartSatisfiesCurveEquation) {
    const Curve c = make_curve(kLam);
    for (const auto& w : c.affine_weierstrass()) {
        const Chart ch = chart_at(c, w, 10);
        const LaurentSeries dx = ch.x_series - LaurentSeries::constant(w.x, 10);
        const LaurentSeries px = ch.x_series * (ch.x_series - LaurentSeries::constant(1.0, 10)) *
                                 (ch.x_series - LaurentSeries::constant(kLam, 10));
        const LaurentSeries defect = px - ch.y_series * ch.y_series;
        for (int k = 0; k < defect.truncation(); ++k) EXPECT_LT(std::abs(defect.coefficient(k)), 1e-12) << k;
        // series reversion of tau^2 = p'(a) dx + c2 dx^2 + dx^3 by hand
        const cplx a = w.x;
        const cplx dp = 3.0 * a * a - 2.0 * (1.0 + kLam) * a + kLam;
        const cplx c2 = 3.0 * a - (1.0 + kLam);
        EXPECT_TRUE(close(dx.coefficient(2), 1.0 / dp, 1e-14));
        EXPECT_TRUE(close(dx.coefficient(4), -c2 / (dp * dp * dp), 1e-12));
        EXPECT_TRUE(close(dx.coefficient(3), 0.0, 1e-14));
        // omega = dx/(2y) = 1/p'(a) + O(tau^2)
        EXPECT_TRUE(close(ch.omega_series.coefficient(0), 1.0 / dp, 1e-14));
    }
}

TEST(Chart, GenericChartFollowsBranch) {
    const Curve c = make_curve(kLam);
    const CurvePoint pt = c.point_at({1.3, 0.8});
    const Chart ch = chart_at(c, pt);
    EXPECT_TRUE(close(ch.y_series.coefficient(0), pt.y, 1e-14));
    EXPECT_TRUE(close(ch.y_series.coefficient(1), (3.0 * pt.x * pt.x - 2.0 * (1.0 + kLam) * pt.x + kLam) / (2.0 * pt.y), 1e-12));
    const cplx tau{1e-2, -2e-2};
    const cplx y = ch.y_series.eval(tau);
    EXPECT_TRUE(close(y * y, p_of(pt.x + tau), 1e-12));
}

TEST(Chart, RejectsBadRequests) {
    const Curve c = make_curve(kLam);
    EXPECT_TRUE(throws_code([&] { chart_at(c, CurvePoint::infinity()); }, ErrorCode::ValidationError));
    EXPECT_TRUE(throws_code([&] { chart_at(c, c.point_at(2.0), 3); }, ErrorCode::ValidationError));
    EXPECT_TRUE(throws_code([&] { chart_at(c, CurvePoint::affine(2.0, 5.0)); }, ErrorCode::ValidationError));
}

TEST(Residue, LogarithmicFormAtBothSheets) {
    // dx/(x - x0) = 2y/(x - x0) omega has residue 1 at (x0, y0) and at (x0, -y0)
    const Curve c = make_curve(kLam);
    const CurvePoint pt = c.point_at({-1.2, 0.4});
    const FieldElement h(kLam, Polynomial{}, Polynomial{2.0}, Polynomial{-pt.x, 1.0});
    EXPECT_TRUE(close(residue_of_form(h, c, pt), 1.0, 1e-12));
    EXPECT_TRUE(close(residue_of_form(h, c, CurvePoint::affine(pt.x, -pt.y)), 1.0, 1e-12));
    EXPECT_TRUE(close(residue_of_form(h, c, c.point_at(3.0)), 0.0, 1e-14));
}

TEST(Residue, ExactFormsHaveNoResidues) {
    const Curve c = make_curve(kLam);
    const CurvePoint pt = c.point_at({0.5, 1.5});
    // f has poles at (x0, +-y0) and at w0
    const FieldElement f(kLam, Polynomial{1.0, 2.0}, Polynomial{{0.5, -1.0}}, Polynomial{-pt.x, 1.0} * Polynomial{0.0, 1.0});
    const FieldElement df = f.derivative_over_omega();
    for (const auto& q : {pt, CurvePoint::affine(pt.x, -pt.y), c.weierstrass(Weierstrass::w0)})
        EXPECT_TRUE(close(residue_of_form(df, c, q), 0.0, 1e-10));
}

TEST(Residue, BasisFormValuesAtWeierstrassPoints) {
    const Curve c = make_curve(kLam);
    const Divisor d = divisor_at(c, {{2.0, 0.5}, {-1.0, -1.0}});
    const BasisForms b = basis_forms(c, d);
    const auto w = c.affine_weierstrass();
    // phi0: O(y), dy/y, -dy/y
    EXPECT_TRUE(close(residue_of_form(b.phi0, c, w[0]), 0.0, 1e-12));
    EXPECT_TRUE(close(residue_of_form(b.phi0, c, w[1]), 1.0, 1e-12));
    EXPECT_TRUE(close(residue_of_form(b.phi0, c, w[2]), -1.0, 1e-12));
    // phi1: dy/y, O(y), -dy/y
    EXPECT_TRUE(close(residue_of_form(b.phi1, c, w[0]), 1.0, 1e-12));
    EXPECT_TRUE(close(residue_of_form(b.phi1, c, w[1]), 0.0, 1e-12));
    EXPECT_TRUE(close(residue_of_form(b.phi1, c, w[2]), -1.0, 1e-12));
    // theta_k: -dy/y at w0, dx/(x - x_k) at t_k, holomorphic elsewhere
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_TRUE(close(residue_of_form(b.theta[k], c, w[0]), -1.0, 1e-12));
        EXPECT_TRUE(close(residue_of_form(b.theta[k], c, w[1]), 0.0, 1e-12));
        EXPECT_TRUE(close(residue_of_form(b.theta[k], c, w[2]), 0.0, 1e-12));
        for (std::size_t j = 0; j < 2; ++j)
            EXPECT_TRUE(close(residue_of_form(b.theta[k], c, d.point(j)), j == k ? 1.0 : 0.0, 1e-12));
    }
    // omega has no pole; its constant term at w0 is 1/p'(0) = 1/lambda
    const Chart ch = chart_at(c, w[0]);
    EXPECT_TRUE(close((expand_function(b.omega, ch) * ch.omega_series).coefficient(0), 1.0 / kLam, 1e-14));
}

TEST(Residue, BasisFormsHolomorphicAtInfinity) {
    const Curve c = make_curve(kLam);
    const Divisor d = divisor_at(c, {{2.0, 0.5}, {-1.0, -1.0}, {0.3, 2.0}});
    // omega never vanishes, so h omega is holomorphic at infinity iff ord(h) >= 0
    for (const auto& f : basis_forms(c, d).all()) EXPECT_GE(f.order_at_infinity().value(), 0);
}

TEST(Divisor, PolarDivisorValidation) {
    const Curve c = make_curve(kLam);
    const CurvePoint a = c.point_at(2.0), b = c.point_at({0.0, 2.0});
    EXPECT_NO_THROW(validate_polar_divisor(c, Divisor::reduced(std::vector{a, b})));
    EXPECT_TRUE(throws_code([&] { validate_polar_divisor(c, Divisor::reduced(std::vector{a, CurvePoint::affine(2.0, 1.0)})); },
                            ErrorCode::InvalidDivisor));
    EXPECT_TRUE(throws_code([&] { validate_polar_divisor(c, Divisor::reduced(std::vector{c.weierstrass(Weierstrass::w1)})); },
                            ErrorCode::InvalidDivisor));
    EXPECT_TRUE(throws_code([&] { validate_polar_divisor(c, Divisor({{a, 2}})); }, ErrorCode::InvalidDivisor));
    EXPECT_ANY_THROW(validate_polar_divisor(c, Divisor::reduced(std::vector{a, a})));
}

TEST(Expansion, ChartMatchesDirectEvaluation) {
    const Curve c = make_curve(kLam);
    const FieldElement f(kLam, Polynomial{1.0, -0.5, 0.25}, Polynomial{{0.0, 1.0}}, Polynomial{{3.0, 1.0}, 1.0});
    for (const CurvePoint& center : {c.weierstrass(Weierstrass::wlambda), c.point_at({1.5, -0.5})}) {
        const Chart ch = chart_at(c, center);
        const cplx tau = std::polar(1e-2, 0.7);
        const cplx x = ch.x_series.eval(tau), y = ch.y_series.eval(tau);
        EXPECT_TRUE(close(expand_function(f, ch).eval(tau), f.eval(x, y), 1e-9));
    }
}

TEST(Expansion, ValuationIsOrderOfVanishing) {
    const Curve c = make_curve(kLam);
    const Chart ch = chart_at(c, c.weierstrass(Weierstrass::w0));
    // x vanishes to order 2 in tau = y, y to order 1, 1/x has a double pole
    EXPECT_EQ(expand_function(c.x(), ch).valuation(), 2);
    EXPECT_EQ(expand_function(c.y(), ch).valuation(), 1);
    EXPECT_EQ(expand_function(c.constant(1.0) / c.x(), ch).valuation(), -2);
}
