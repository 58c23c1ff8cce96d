#include <algorithm>
#include <random>

#include "support.hpp"

#include "ellcon/field_element.hpp"
#include "ellcon/laurent_series.hpp"
#include "ellcon/polynomial.hpp"

using namespace ellcon;
using ellcon::test::close;
using ellcon::test::throws_code;

namespace {

const cplx kLam{0.3, 0.7};

std::vector<cplx> naive_product(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t n) {
    std::vector<cplx> c(n);
    for (std::size_t i = 0; i < n && i < a.size(); ++i)
        for (std::size_t j = 0; i + j < n && j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

}  // namespace

TEST(Polynomial, StripsTrailingZeros) {
    const Polynomial p{1.0, 2.0, 0.0, 0.0};
    ASSERT_TRUE(p.degree().has_value());
    EXPECT_EQ(*p.degree(), 1u);
    EXPECT_FALSE(Polynomial{}.degree().has_value());
    EXPECT_TRUE(Polynomial({0.0, 0.0}).is_zero());
}

TEST(Polynomial, RootsOfProductOfLinearFactors) {
    const std::vector<cplx> roots{{1.0, 0.5}, {-2.0, 0.0}, {0.0, 3.0}, {0.25, -0.75}};
    const Polynomial p = Polynomial::from_roots(roots);
    EXPECT_TRUE(close(p.leading(), 1.0, 0.0));
    for (cplx r : p.roots()) {
        const double best = std::abs(*std::min_element(roots.begin(), roots.end(), [&](cplx a, cplx b) {
                                         return std::abs(a - r) < std::abs(b - r);
                                     }) - r);
        EXPECT_LT(best, 1e-10);
    }
}

TEST(Polynomial, DivmodReconstructs) {
    const Polynomial a{{1.0, 2.0}, -3.0, 0.5, {0.0, 1.0}, 2.0};
    const Polynomial b{2.0, {1.0, -1.0}, 1.0};
    const auto [q, r] = a.divmod(b);
    ASSERT_TRUE(r.degree().value_or(0) < 2);
    const Polynomial back = q * b + r;
    for (std::size_t k = 0; k <= 4; ++k) EXPECT_TRUE(close(back[k], a[k], 1e-14));
}

TEST(Polynomial, DivmodByZeroThrows) {
    EXPECT_ANY_THROW(Polynomial({1.0, 1.0}).divmod(Polynomial{}));
}

TEST(Polynomial, DerivativeMatchesCentralDifference) {
    const Polynomial p{0.5, {1.0, 1.0}, -2.0, 0.75};
    const cplx x{0.4, -0.3};
    const double h = 1e-5;
    const cplx fd = (p(x + h) - p(x - h)) / (2.0 * h);
    EXPECT_TRUE(close(p.derivative()(x), fd, 1e-9));
}

TEST(LaurentSeries, InverseAgreesWithNewtonReciprocal) {
    // g <- g (2 - f g) doubles the number of correct terms
    const std::vector<cplx> f{{2.0, 1.0}, -1.0, {0.5, 0.5}, 3.0, 0.25, -1.0, 0.0, 2.0};
    const std::size_t n = f.size();
    std::vector<cplx> g{1.0 / f[0]};
    g.resize(n);
    for (int it = 0; it < 5; ++it) {
        std::vector<cplx> fg = naive_product(f, g, n);
        for (auto& c : fg) c = -c;
        fg[0] += 2.0;
        g = naive_product(g, fg, n);
    }
    const LaurentSeries s(-2, f, static_cast<int>(n) - 2);
    const LaurentSeries inv = s.inverse();
    EXPECT_EQ(inv.valuation(), 2);
    for (std::size_t k = 0; k < n; ++k) EXPECT_TRUE(close(inv.coefficient(2 + static_cast<int>(k)), g[k], 1e-12)) << k;
}

TEST(LaurentSeries, ProductEvaluatesPointwise) {
    const LaurentSeries a(-1, {1.0, 2.0, {0.0, 1.0}, -1.0, 0.5, 0.25, 0.1, 0.05, 0.0, 0.0}, 9);
    const LaurentSeries b(0, {3.0, -1.0, 0.5, 0.25, 0.125, 0.0625, 0.03, 0.01, 0.0, 0.0}, 10);
    const cplx t{1e-2, 5e-3};
    // truncation at tau^8: the neglected tail is ~|t|^8
    EXPECT_TRUE(close((a * b).eval(t) * t, a.eval(t) * b.eval(t) * t, 1e-12));
    EXPECT_EQ((a * b).truncation(), 9);
}

TEST(LaurentSeries, CoefficientPastTruncationThrows) {
    const LaurentSeries s = LaurentSeries::tau(4);
    EXPECT_TRUE(close(s.coefficient(1), 1.0, 0.0));
    EXPECT_TRUE(close(s.coefficient(-3), 0.0, 0.0));
    EXPECT_TRUE(throws_code([&] { s.coefficient(4); }, ErrorCode::TruncationExceeded));
}

TEST(LaurentSeries, StripDropsRoundingNoise) {
    const LaurentSeries noisy(0, {1e-17, 2e-18, 1.0, 3.0}, 4);
    const LaurentSeries scale(0, {1.0, 1.0, 1.0, 3.0}, 4);
    const LaurentSeries s = noisy.strip_negligible_leading(scale, 1e-12);
    EXPECT_EQ(s.valuation(), 2);
    EXPECT_TRUE(close(s.leading(), 1.0, 0.0));
}

TEST(FieldElement, YSquaredReducesToCurvePolynomial) {
    const FieldElement y = FieldElement::y(kLam);
    const FieldElement p(kLam, FieldElement::x(kLam).curve_polynomial(), Polynomial{});
    EXPECT_TRUE(approx_equal(y * y, p, 1e-14));
}

TEST(FieldElement, ArithmeticMatchesPointwiseEvaluation) {
    const FieldElement a(kLam, Polynomial{1.0, 2.0, {0.0, 1.0}}, Polynomial{-1.0, 0.5}, Polynomial{{-0.5, 1.0}, 1.0});
    const FieldElement b(kLam, Polynomial{{2.0, -1.0}, 0.0, 1.0}, Polynomial{0.3}, Polynomial{2.0, 1.0});
    const cplx x{1.7, -0.4};
    const cplx p = x * (x - 1.0) * (x - kLam);
    for (cplx y : {std::sqrt(p), -std::sqrt(p)}) {
        const cplx va = a.eval(x, y), vb = b.eval(x, y);
        EXPECT_TRUE(close((a + b).eval(x, y), va + vb, 1e-12));
        EXPECT_TRUE(close((a - b).eval(x, y), va - vb, 1e-12));
        EXPECT_TRUE(close((a * b).eval(x, y), va * vb, 1e-12 * std::abs(va * vb)));
        EXPECT_TRUE(close((a / b).eval(x, y), va / vb, 1e-12 * std::abs(va / vb)));
        EXPECT_TRUE(close(a.conjugate().eval(x, y), a.eval(x, -y), 1e-12));
    }
}

TEST(FieldElement, DivisionByZeroThrows) {
    const FieldElement a = FieldElement::x(kLam);
    EXPECT_TRUE(throws_code([&] { a / FieldElement::zero(kLam); }, ErrorCode::DivisionByZeroElement));
}

TEST(FieldElement, EvaluationAtPoleThrows) {
    const FieldElement a(kLam, Polynomial{1.0}, Polynomial{}, Polynomial{-2.0, 1.0});
    const cplx x = 2.0;
    EXPECT_TRUE(throws_code([&] { a.eval(x, std::sqrt(x * (x - 1.0) * (x - kLam))); }, ErrorCode::EvaluationAtPole));
}

TEST(FieldElement, OrderAtInfinityFromDegrees) {
    EXPECT_EQ(FieldElement::x(kLam).order_at_infinity().value(), -2);
    EXPECT_EQ(FieldElement::y(kLam).order_at_infinity().value(), -3);
    EXPECT_EQ((FieldElement::constant(kLam, 1.0) / FieldElement::x(kLam)).order_at_infinity().value(), 2);
    EXPECT_EQ((FieldElement::y(kLam) / FieldElement::x(kLam)).order_at_infinity().value(), -1);
    EXPECT_FALSE(FieldElement::zero(kLam).order_at_infinity().has_value());
}

TEST(FieldElement, DerivativeOverOmegaMatchesFiniteDifference) {
    // d/omega = 2y d/dx along the branch through (x0, y0)
    const FieldElement a(kLam, Polynomial{0.5, -1.0, 0.25}, Polynomial{1.0, {0.0, 2.0}}, Polynomial{{1.0, 1.0}, 1.0});
    const cplx x0{2.1, 0.6};
    auto p = [](cplx x) { return x * (x - 1.0) * (x - kLam); };
    const cplx y0 = std::sqrt(p(x0));
    auto y_at = [&](cplx x) { return y0 * std::sqrt(p(x) / p(x0)); };
    const double h = 1e-4;
    const cplx dadx = (a.eval(x0 + h, y_at(x0 + h)) - a.eval(x0 - h, y_at(x0 - h))) / (2.0 * h);
    EXPECT_TRUE(close(a.derivative_over_omega().eval(x0, y0), 2.0 * y0 * dadx, 1e-6 * std::abs(y0 * dadx)));
}

TEST(FieldElement, LeibnizRule) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    auto rnd = [&] { return cplx{g(rng), g(rng)}; };
    for (int trial = 0; trial < 20; ++trial) {
        const FieldElement a(kLam, Polynomial{rnd(), rnd()}, Polynomial{rnd()}, Polynomial{rnd(), 1.0});
        const FieldElement b(kLam, Polynomial{rnd(), rnd(), rnd()}, Polynomial{rnd(), rnd()});
        const FieldElement lhs = (a * b).derivative_over_omega();
        const FieldElement rhs = a.derivative_over_omega() * b + a * b.derivative_over_omega();
        EXPECT_TRUE(approx_equal(lhs, rhs, 1e-10));
    }
}

TEST(FieldElement, OverDenominatorRequiresMultiple) {
    const FieldElement a(kLam, Polynomial{1.0}, Polynomial{}, Polynomial{-2.0, 1.0});
    const Polynomial target = Polynomial{-2.0, 1.0} * Polynomial{3.0, 1.0};
    const FieldElement b = a.over_denominator(target);
    EXPECT_TRUE(approx_equal(a, b, 1e-14));
    EXPECT_TRUE(throws_code([&] { a.over_denominator(Polynomial{3.0, 1.0}); }, ErrorCode::ValidationError));
}

TEST(FieldElement, MixedCurvesRejected) {
    EXPECT_ANY_THROW(FieldElement::x(kLam) + FieldElement::x(cplx{2.0}));
}
