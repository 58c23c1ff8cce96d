#include "ellcon/apparent.hpp"

#include <cmath>
#include <cstring>

#include <Eigen/SVD>

#include "ellcon/error.hpp"
#include "ellcon/stability.hpp"

namespace ellcon {

namespace {

constexpr double kSampleMargin = 1e-3;

Polynomial linear(cplx root) { return Polynomial::from_roots({root}); }

}  // namespace

SectionS section_s(const Curve& curve) {
    const cplx lam = curve.lambda();
    return {FieldElement(lam, {}, Polynomial::constant(1.0), Polynomial::from_roots({cplx{0.0}, cplx{1.0}})),
            FieldElement(lam, {}, Polynomial::constant(1.0 - lam), Polynomial::from_roots({cplx{1.0}, lam}))};
}

bool app_defined(const EigenData& nu) {
    bool ok = true;
    for_each_sign_sum(nu, [&](cplx s) {
        if (std::abs(s) <= kIntegerTolerance) ok = false;
    });
    return ok;
}

namespace {

/// Numerators over the common denominator L of the four matrix entries.
struct MatrixNumerators {
    Polynomial denominator;
    std::array<Polynomial, 4> p;
    std::array<Polynomial, 4> q;
};

MatrixNumerators matrix_numerators(const FuchsianSystem& sys) {
    const Polynomial l = basis_common_denominator(sys.curve, sys.divisor);
    const auto forms = basis_forms(sys.curve, sys.divisor).all();
    const auto coeffs = sys.coefficients();
    MatrixNumerators out{l, {}, {}};
    for (std::size_t k = 0; k < forms.size(); ++k) {
        const FieldElement f = forms[k].over_denominator(l);
        for (int e = 0; e < 4; ++e) {
            const cplx c = coeffs[k](e / 2, e % 2);
            if (c == cplx{}) continue;
            out.p[e] += f.p_part() * c;
            out.q[e] += f.q_part() * c;
        }
    }
    return out;
}

}  // namespace

std::array<FieldElement, 4> connection_matrix(const FuchsianSystem& sys) {
    const MatrixNumerators m = matrix_numerators(sys);
    const cplx lam = sys.curve.lambda();
    return {FieldElement(lam, m.p[0], m.q[0], m.denominator), FieldElement(lam, m.p[1], m.q[1], m.denominator),
            FieldElement(lam, m.p[2], m.q[2], m.denominator), FieldElement(lam, m.p[3], m.q[3], m.denominator)};
}

FieldElement app_form(const FuchsianSystem& sys) {
    // With A trace-free, F = scale (ds1 s2 - ds2 s1) + 2 A00 s1 s2 + A01 s2^2 - A10 s1^2, and on the curve
    //   s1 s2 = (1-lambda)/(x-1),  s1^2 = (x-lambda)/(x(x-1)),  s2^2 = (1-lambda)^2 x/((x-1)(x-lambda)),
    //   ds1 s2 - ds2 s1 = -s1^2 d(s2/s1) = 2 lambda (1-lambda) y / p.
    // Everything is put over L p.
    const cplx lam = sys.curve.lambda();
    const MatrixNumerators m = matrix_numerators(sys);
    const Polynomial x = Polynomial::x();
    const Polynomial xl = linear(lam);
    const Polynomial w00 = x * xl * (2.0 * (1.0 - lam));
    const Polynomial w01 = x * x * ((1.0 - lam) * (1.0 - lam));
    const Polynomial w10 = xl * xl * -1.0;
    Polynomial np = w00 * m.p[0] + w01 * m.p[1] + w10 * m.p[2];
    Polynomial nq = w00 * m.q[0] + w01 * m.q[1] + w10 * m.q[2] + m.denominator * (2.0 * lam * (1.0 - lam) * sys.scale);
    return FieldElement(lam, std::move(np), std::move(nq), m.denominator * sys.curve.p());
}

AppVector app_eval(const FuchsianSystem& sys, const std::vector<CurvePoint>& samples) {
    if (samples.size() < sys.divisor.size() + 1)
        throw Error(ErrorCode::ValidationError, "need at least n+1 samples");
    std::vector<cplx> poles{cplx{0.0}, cplx{1.0}, sys.curve.lambda()};
    for (const auto& e : sys.divisor.entries()) poles.push_back(e.point.x);
    const FieldElement f = app_form(sys);
    AppVector v;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const CurvePoint& s = samples[i];
        if (!s.is_affine()) throw Error(ErrorCode::SampleAtPole, "sample at infinity");
        for (const cplx& p : poles)
            if (std::abs(s.x - p) <= kSampleMargin)
                throw Error(ErrorCode::SampleAtPole, "sample " + std::to_string(i) + " is within 1e-3 of a pole");
        try {
            v.values.push_back(f.eval(s.x, s.y));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EvaluationAtPole) throw;
            throw Error(ErrorCode::SampleAtPole, "sample " + std::to_string(i) + " hits a pole of F");
        }
    }
    return v;
}

double projective_deviation(const AppVector& a, const AppVector& b) {
    if (a.values.size() != b.values.size()) throw Error(ErrorCode::ValidationError, "App vectors differ in length");
    double na = 0.0, nb = 0.0, dev = 0.0;
    for (const cplx& c : a.values) na += std::norm(c);
    for (const cplx& c : b.values) nb += std::norm(c);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        for (std::size_t k = i + 1; k < a.values.size(); ++k)
            dev = std::max(dev, std::abs(a.values[i] * b.values[k] - a.values[k] * b.values[i]));
    const double scale = std::sqrt(na * nb);
    return scale == 0.0 ? (na == nb ? 0.0 : 1.0) : dev / scale;
}

std::uint64_t instance_hash(const Curve& curve, const Divisor& d) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 1099511628211ull;
        }
    };
    mix(curve.lambda().real());
    mix(curve.lambda().imag());
    for (const auto& e : d.entries()) {
        mix(e.point.x.real());
        mix(e.point.x.imag());
        mix(e.point.y.real());
        mix(e.point.y.imag());
    }
    return h;
}

std::vector<CurvePoint> app_samples(const Curve& curve, const Divisor& d, std::size_t m) {
    std::mt19937_64 rng(instance_hash(curve, d));
    std::vector<cplx> avoid;
    for (const auto& e : d.entries()) avoid.push_back(e.point.x);
    std::vector<CurvePoint> out;
    // twice the pole margin so that the app_eval check never trips on a boundary sample
    for (std::size_t i = 0; i < m; ++i) out.push_back(sample_curve_point(curve, rng, avoid, 2.0 * kSampleMargin));
    return out;
}

std::vector<CurvePoint> app_samples(const Curve& curve, const Divisor& d) {
    return app_samples(curve, d, 2 * (d.size() + 1) + 2);
}

FiberRank fiber_rank_app(const Curve& curve, const Divisor& d, const EigenData& nu, const std::vector<cplx>& z,
                         const std::vector<CurvePoint>& samples) {
    const std::size_t n = d.size();
    if (!app_defined(nu)) throw Error(ErrorCode::ValidationError, "App is not a morphism for this nu (a signed sum vanishes)");
    if (z.size() != n) throw Error(ErrorCode::ValidationError, "z must have n entries");
    if (samples.size() < n + 2) throw Error(ErrorCode::ValidationError, "need at least n+2 samples");

    const auto m = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXcd rows(static_cast<Eigen::Index>(n + 1), m);
    const std::vector<cplx> zero(n);
    auto put = [&](Eigen::Index row, const FuchsianSystem& sys) {
        const AppVector v = app_eval(sys, samples);
        for (Eigen::Index i = 0; i < m; ++i) rows(row, i) = v.values[static_cast<std::size_t>(i)];
    };
    put(0, chart_connection(curve, d, nu, ChartTag::U0, z, zero, 1.0));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> e(n);
        e[j] = 1.0;
        put(static_cast<Eigen::Index>(j + 1), chart_connection(curve, d, nu, ChartTag::U0, z, e, 0.0));
    }

    FiberRank out;
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rows);
    const auto& sv = svd.singularValues();
    const double threshold = kRankThreshold * (sv.size() > 0 ? sv(0) : 0.0);
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        out.singular_values.push_back(sv(i));
        if (sv(i) > threshold) ++out.matrix_rank;
        if (sv(i) > 0.1 * threshold && sv(i) < 10.0 * threshold)
            throw Error(ErrorCode::RankUnstable, "singular value " + std::to_string(sv(i)) + " is within a factor 10 of the threshold");
    }

    const SectionS s = section_s(curve);
    out.expected = 1;
    for (std::size_t j = 0; j < n; ++j) {
        const CurvePoint& t = d.point(j);
        const Direction sj{s.s1.eval(t.x, t.y), s.s2.eval(t.x, t.y)};
        if (projective_distance(Direction{z[j], 1.0}, sj) > kRankThreshold) ++out.expected;
    }
    return out;
}

}  // namespace ellcon
