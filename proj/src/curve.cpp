#include "ellcon/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ellcon/error.hpp"

namespace ellcon {

namespace {

constexpr double kDegenerateLambda = 1e-10;
constexpr double kOnCurveTolerance = 1e-10;
constexpr double kWeierstrassMatch = 1e-10;
// Rounding in a Horner evaluation is bounded by a few ulps of sum |a_k||x|^k.
constexpr double kNegligible = 1e-12;
constexpr int kMaxNewtonSteps = 12;

struct Bounded {
    LaurentSeries value;
    LaurentSeries bound;
};

/// f(x0 + delta) as a series in tau, with a companion series bounding the rounding scale.
Bounded eval_poly(const Polynomial& f, cplx x0, const LaurentSeries& delta) {
    const int t = delta.truncation();
    if (f.is_zero()) return {LaurentSeries::zero(t), LaurentSeries::zero(t)};
    std::vector<cplx> s = f.coefficients();
    std::vector<double> b(s.size());
    std::transform(s.begin(), s.end(), b.begin(), [](cplx c) { return std::abs(c); });
    const double ax = std::abs(x0);
    const std::size_t deg = s.size() - 1;
    for (std::size_t k = 0; k < deg; ++k)
        for (std::size_t i = deg; i-- > k;) {
            s[i] += x0 * s[i + 1];
            b[i] += ax * b[i + 1];
        }
    for (std::size_t k = 0; k <= deg; ++k)
        if (std::abs(s[k]) <= kNegligible * b[k]) s[k] = cplx{};

    const LaurentSeries abs_delta = delta.abs();
    LaurentSeries value = LaurentSeries::constant(s[deg], t);
    LaurentSeries bound = LaurentSeries::constant(b[deg], t);
    for (std::size_t k = deg; k-- > 0;) {
        value = value * delta + LaurentSeries::constant(s[k], t);
        bound = bound * abs_delta + LaurentSeries::constant(b[k], t);
    }
    return {value, bound};
}

/// Defect of the chart equation y^2 - p(x), reported as its valuation.
int defect_valuation(const LaurentSeries& defect) { return defect.valuation(); }

Chart weierstrass_chart(const Curve& curve, cplx a, int order) {
    const cplx lam = curve.lambda();
    const cplx dp = 3.0 * a * a - 2.0 * (1.0 + lam) * a + lam;
    const cplx c2 = 3.0 * a - (1.0 + lam);
    const LaurentSeries tau = LaurentSeries::tau(order);
    const LaurentSeries tau2 = tau * tau;
    // Solve p(a + delta) = dp delta + c2 delta^2 + delta^3 = tau^2 for delta = O(tau^2).
    LaurentSeries delta = tau2 * (1.0 / dp);
    int last = -1;
    for (int step = 0; step < kMaxNewtonSteps; ++step) {
        const LaurentSeries d2 = delta * delta;
        const LaurentSeries ad = delta.abs();
        const LaurentSeries scale = ad * std::abs(dp) + ad * ad * std::abs(c2) + ad * ad * ad + tau2;
        const LaurentSeries g = (delta * dp + d2 * c2 + d2 * delta - tau2).strip_negligible_leading(scale, kNegligible);
        if (g.is_zero()) break;
        const int v = defect_valuation(g);
        if (v <= last) throw Error(ErrorCode::NewtonStall, "series Newton iteration for x(y) does not converge");
        last = v;
        const LaurentSeries dg = LaurentSeries::constant(dp, order) + delta * (2.0 * c2) + d2 * 3.0;
        delta -= g / dg;
    }
    Chart chart;
    chart.center = CurvePoint::affine(a, 0.0);
    chart.kind = Chart::Kind::y_at_weierstrass;
    chart.x_series = LaurentSeries::constant(a, order) + delta;
    chart.y_series = tau;
    const Bounded dpx = eval_poly(curve.p().derivative(), a, delta);
    chart.omega_series = dpx.value.strip_negligible_leading(dpx.bound, kNegligible).inverse();
    return chart;
}

Chart generic_chart(const Curve& curve, const CurvePoint& pt, int order) {
    const LaurentSeries tau = LaurentSeries::tau(order);
    const Bounded px = eval_poly(curve.p(), pt.x, tau);
    LaurentSeries y = LaurentSeries::constant(pt.y, order);
    int last = -1;
    for (int step = 0; step < kMaxNewtonSteps; ++step) {
        const LaurentSeries ay = y.abs();
        const LaurentSeries defect = (y * y - px.value).strip_negligible_leading(ay * ay + px.bound, kNegligible);
        if (defect.is_zero()) break;
        const int v = defect_valuation(defect);
        if (v <= last) throw Error(ErrorCode::NewtonStall, "series Newton iteration for y(x) does not converge");
        last = v;
        y = (y + px.value / y) * 0.5;
    }
    Chart chart;
    chart.center = pt;
    chart.kind = Chart::Kind::xshift_at_generic;
    chart.x_series = LaurentSeries::constant(pt.x, order) + tau;
    chart.y_series = y;
    chart.omega_series = (y * 2.0).inverse();
    return chart;
}

}  // namespace

Curve make_curve(cplx lambda) {
    if (std::abs(lambda) <= kDegenerateLambda || std::abs(lambda - 1.0) <= kDegenerateLambda)
        throw Error(ErrorCode::DegenerateCurve, "lambda must avoid 0 and 1");
    return Curve(lambda, Polynomial::from_roots({cplx{0.0}, cplx{1.0}, lambda}));
}

CurvePoint Curve::weierstrass(Weierstrass w) const {
    switch (w) {
        case Weierstrass::w0: return CurvePoint::affine(0.0, 0.0);
        case Weierstrass::w1: return CurvePoint::affine(1.0, 0.0);
        case Weierstrass::wlambda: return CurvePoint::affine(lambda_, 0.0);
    }
    return CurvePoint::infinity();
}

std::array<CurvePoint, 3> Curve::affine_weierstrass() const {
    return {weierstrass(Weierstrass::w0), weierstrass(Weierstrass::w1), weierstrass(Weierstrass::wlambda)};
}

bool Curve::contains(const CurvePoint& pt) const {
    if (!pt.is_affine()) return true;
    const cplx px = p_(pt.x);
    return std::abs(pt.y * pt.y - px) <= kOnCurveTolerance * (1.0 + std::abs(px) + std::norm(pt.y));
}

CurvePoint Curve::point_at(cplx x) const { return CurvePoint::affine(x, std::sqrt(p_(x))); }

Divisor::Divisor(std::vector<DivisorEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].multiplicity == 0) throw Error(ErrorCode::InvalidDivisor, "zero multiplicity");
        for (std::size_t j = 0; j < i; ++j) {
            const auto& a = entries_[i].point;
            const auto& b = entries_[j].point;
            const bool same = a.kind == b.kind && (!a.is_affine() || (a.x == b.x && a.y == b.y));
            if (same) throw Error(ErrorCode::InvalidDivisor, "repeated point in divisor");
        }
    }
}

Divisor Divisor::reduced(std::span<const CurvePoint> points) {
    std::vector<DivisorEntry> e;
    e.reserve(points.size());
    for (const auto& p : points) e.push_back({p, 1});
    return Divisor(std::move(e));
}

void validate_polar_divisor(const Curve& curve, const Divisor& d) {
    const double margin = 1e-10;
    for (std::size_t j = 0; j < d.size(); ++j) {
        const auto& e = d.entries()[j];
        if (e.multiplicity != 1) throw Error(ErrorCode::InvalidDivisor, "polar divisor must be reduced");
        if (!e.point.is_affine()) throw Error(ErrorCode::InvalidDivisor, "polar divisor must be affine");
        if (!curve.contains(e.point)) throw Error(ErrorCode::InvalidDivisor, "point t_" + std::to_string(j + 1) + " is not on the curve");
        for (const auto& w : curve.affine_weierstrass())
            if (std::abs(e.point.x - w.x) <= margin)
                throw Error(ErrorCode::InvalidDivisor, "point t_" + std::to_string(j + 1) + " collides with a Weierstrass point");
        for (std::size_t k = 0; k < j; ++k) {
            const auto& o = d.entries()[k].point;
            if (std::abs(o.x - e.point.x) <= margin && std::abs(o.y - e.point.y) <= margin * (1.0 + std::abs(o.y)))
                throw Error(ErrorCode::InvalidDivisor, "repeated point in polar divisor");
        }
    }
}

Chart chart_at(const Curve& curve, const CurvePoint& pt, int order) {
    if (!pt.is_affine()) throw Error(ErrorCode::ValidationError, "charts exist only at affine points");
    if (order < 4) throw Error(ErrorCode::ValidationError, "chart order must be at least 4");
    for (const auto& w : curve.affine_weierstrass())
        if (std::abs(pt.x - w.x) <= kWeierstrassMatch) return weierstrass_chart(curve, w.x, order);
    if (!curve.contains(pt)) throw Error(ErrorCode::ValidationError, "chart center is not on the curve");
    return generic_chart(curve, pt, order);
}

LaurentSeries expand_function(const FieldElement& a, const Chart& chart) {
    const int order = chart.x_series.truncation();
    if (a.is_zero()) return LaurentSeries::zero(order);
    const cplx x0 = chart.center.x;
    const LaurentSeries delta = chart.x_series - LaurentSeries::constant(x0, order);
    const Bounded p = eval_poly(a.p_part(), x0, delta);
    const Bounded q = eval_poly(a.q_part(), x0, delta);
    const Bounded r = eval_poly(a.denominator(), x0, delta);
    const LaurentSeries num = (p.value + q.value * chart.y_series)
                                  .strip_negligible_leading(p.bound + q.bound * chart.y_series.abs(), kNegligible);
    const LaurentSeries den = r.value.strip_negligible_leading(r.bound, kNegligible);
    if (num.is_zero() || den.is_zero())
        throw Error(ErrorCode::TruncationExceeded, "chart order too small to resolve the order of the function");
    return num / den;
}

cplx residue_of_form(const FieldElement& h, const Curve& curve, const CurvePoint& pt) {
    if (h.is_zero()) return {};
    const Chart chart = chart_at(curve, pt);
    return (expand_function(h, chart) * chart.omega_series).coefficient(-1);
}

cplx fe_eval(const FieldElement& a, const CurvePoint& pt) {
    if (!pt.is_affine()) throw Error(ErrorCode::ValidationError, "evaluation only at affine points");
    return a.eval(pt.x, pt.y);
}

FieldElement fe_derivative_over_omega(const FieldElement& a, const Curve& curve) {
    if (a.lambda() != curve.lambda()) throw Error(ErrorCode::ValidationError, "element belongs to another curve");
    return a.derivative_over_omega();
}

std::vector<FieldElement> BasisForms::all() const {
    std::vector<FieldElement> out{omega, phi0, phi1};
    out.insert(out.end(), theta.begin(), theta.end());
    return out;
}

BasisForms basis_forms(const Curve& curve, const Divisor& d) {
    validate_polar_divisor(curve, d);
    const cplx lam = curve.lambda();
    const Polynomial y1 = Polynomial::constant(1.0);
    // phi0/omega = (1-lambda) x / y = (1-lambda) y / ((x-1)(x-lambda))
    // phi1/omega = -lambda (x-1) / y = -lambda y / (x (x-lambda))
    BasisForms b{
        curve.constant(1.0),
        FieldElement(lam, {}, Polynomial::constant(1.0 - lam), Polynomial::from_roots({cplx{1.0}, lam})),
        FieldElement(lam, {}, Polynomial::constant(-lam), Polynomial::from_roots({cplx{0.0}, lam})),
        {},
    };
    // theta_j/omega = x_j (x_j x - lambda) / (x_j y - y_j x); rationalizing and cancelling the
    // common factor x_j (x - x_j)(x_j x - lambda) leaves (y_j x + x_j y) / (x (x - x_j)).
    for (const auto& e : d.entries()) {
        const cplx xj = e.point.x;
        const cplx yj = e.point.y;
        b.theta.emplace_back(lam, Polynomial({cplx{0.0}, yj}), Polynomial::constant(xj), Polynomial::from_roots({cplx{0.0}, xj}));
    }
    return b;
}

Polynomial basis_common_denominator(const Curve& curve, const Divisor& d) {
    std::vector<cplx> roots{cplx{0.0}, cplx{1.0}, curve.lambda()};
    for (const auto& e : d.entries()) roots.push_back(e.point.x);
    return Polynomial::from_roots(roots);
}

CurvePoint sample_curve_point(const Curve& curve, std::mt19937_64& rng, std::span<const cplx> avoid, double margin,
                              double radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        const double r = radius * std::sqrt(unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        const cplx x = std::polar(r, phi);
        bool ok = std::abs(x) > margin && std::abs(x - 1.0) > margin && std::abs(x - curve.lambda()) > margin;
        for (const cplx& a : avoid) ok = ok && std::abs(x - a) > margin;
        if (ok) return curve.point_at(x);
    }
}

}  // namespace ellcon
