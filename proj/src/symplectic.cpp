#include "ellcon/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include "ellcon/error.hpp"

namespace ellcon {

namespace {

constexpr double kOffDiagonal = 1e-10;
constexpr double kFdRelTolerance = 1e-4;

void require_shape(const ChartPoint& pt, const TangentVector& t) {
    if (t.tag != pt.tag) throw Error(ErrorCode::ChartMismatch, "tangent vector lives on a different chart");
    if (pt.fiber.size() != pt.n() || t.d_base.size() != pt.n() || t.d_fiber.size() != pt.n())
        throw Error(ErrorCode::ValidationError, "chart point and tangent vector sizes differ");
}

ChartPoint displaced(const ChartPoint& pt, const TangentVector& t, double h) {
    ChartPoint q = pt;
    for (std::size_t j = 0; j < q.n(); ++j) {
        q.base[j] += h * t.d_base[j];
        q.fiber[j] += h * t.d_fiber[j];
    }
    return q;
}

TangentVector central_difference(const ChartMap& map, const ChartPoint& pt, const TangentVector& t, double h) {
    const ChartPoint fp = map(displaced(pt, t, h));
    const ChartPoint fm = map(displaced(pt, t, -h));
    TangentVector out{fp.tag, {}, {}};
    for (std::size_t j = 0; j < fp.n(); ++j) {
        out.d_base.push_back((fp.base[j] - fm.base[j]) / (2.0 * h));
        out.d_fiber.push_back((fp.fiber[j] - fm.fiber[j]) / (2.0 * h));
    }
    return out;
}

TangentVector richardson(const TangentVector& coarse, const TangentVector& fine) {
    TangentVector out = fine;
    for (std::size_t j = 0; j < out.d_base.size(); ++j) {
        out.d_base[j] = (4.0 * fine.d_base[j] - coarse.d_base[j]) / 3.0;
        out.d_fiber[j] = (4.0 * fine.d_fiber[j] - coarse.d_fiber[j]) / 3.0;
    }
    return out;
}

}  // namespace

CoordTag coordinates_of(TwoFormTag form) {
    switch (form) {
        case TwoFormTag::darboux_u0: return CoordTag::u0;
        case TwoFormTag::darboux_uinf: return CoordTag::uinf;
        case TwoFormTag::omega_nu: return CoordTag::sn;
    }
    return CoordTag::u0;
}

cplx two_form_eval(TwoFormTag form, const EigenData* nu, const ChartPoint& pt, const TangentVector& t1,
                   const TangentVector& t2) {
    if (pt.tag != coordinates_of(form)) throw Error(ErrorCode::ChartMismatch, "point is not in the form's chart");
    require_shape(pt, t1);
    require_shape(pt, t2);
    if (form == TwoFormTag::omega_nu && (nu == nullptr || nu->n() != pt.n()))
        throw Error(ErrorCode::ValidationError, "omega_nu needs eigenvalue data of matching size");
    cplx total{};
    for (std::size_t j = 0; j < pt.n(); ++j) {
        const cplx wedge = t1.d_base[j] * t2.d_fiber[j] - t2.d_base[j] * t1.d_fiber[j];
        switch (form) {
            case TwoFormTag::darboux_u0: total += wedge; break;
            case TwoFormTag::darboux_uinf: total -= wedge; break;
            case TwoFormTag::omega_nu: {
                const cplx gap = pt.base[j] - pt.fiber[j];
                if (std::abs(gap) <= kOffDiagonal)
                    throw Error(ErrorCode::DiagonalPoint, "z_" + std::to_string(j + 1) + " = zeta_" + std::to_string(j + 1));
                total += nu->nu(j) * wedge / (gap * gap);
                break;
            }
        }
    }
    return total;
}

ChartMap transition_chart_map(const EigenData& nu) {
    return [nu](const ChartPoint& p) {
        if (p.tag != CoordTag::uinf) throw Error(ErrorCode::ChartMismatch, "transition map starts on U_inf");
        const ChartCoordinates zr = transition_map(nu, p.base, p.fiber);
        return ChartPoint{CoordTag::u0, zr.base, zr.fiber};
    };
}

ChartMap substitution_map(const EigenData& nu) {
    return [nu](const ChartPoint& p) {
        if (p.tag != CoordTag::u0) throw Error(ErrorCode::ChartMismatch, "substitution starts on U_0");
        ChartPoint out{CoordTag::sn, p.base, p.base};
        for (std::size_t j = 0; j < p.n(); ++j) {
            if (std::abs(p.fiber[j]) <= kOffDiagonal)
                throw Error(ErrorCode::ChartBoundary, "r_" + std::to_string(j + 1) + " = 0 has no image in S^n");
            out.fiber[j] = p.base[j] - nu.nu(j) / p.fiber[j];
        }
        return out;
    };
}

ChartMap identity_map() {
    return [](const ChartPoint& p) { return p; };
}

PullbackResult pullback_two_form(const ChartMap& map, const ChartPoint& pt, const TangentVector& t1,
                                 const TangentVector& t2, TwoFormTag target_form, const EigenData* nu, double fd_step) {
    require_shape(pt, t1);
    require_shape(pt, t2);
    const ChartPoint image = map(pt);
    const TangentVector c1 = central_difference(map, pt, t1, fd_step);
    const TangentVector c2 = central_difference(map, pt, t2, fd_step);
    const TangentVector f1 = central_difference(map, pt, t1, 0.5 * fd_step);
    const TangentVector f2 = central_difference(map, pt, t2, 0.5 * fd_step);
    const cplx coarse = two_form_eval(target_form, nu, image, c1, c2);
    const cplx fine = two_form_eval(target_form, nu, image, f1, f2);
    PullbackResult r;
    r.fd_discrepancy = std::abs(coarse - fine) / std::max(1.0, std::abs(fine));
    if (r.fd_discrepancy > kFdRelTolerance)
        throw Error(ErrorCode::FDInconsistent, "finite differences at h and h/2 disagree");
    r.value = two_form_eval(target_form, nu, image, richardson(c1, f1), richardson(c2, f2));
    return r;
}

FieldElement serre_pairing_form(const Curve& curve, const Divisor& d, std::size_t k, const std::vector<cplx>& z) {
    if (k >= d.size() || z.size() != d.size()) throw Error(ErrorCode::ValidationError, "index or z out of range");
    const BasisForms b = basis_forms(curve, d);
    const CurvePoint& t = d.point(k);
    return b.phi0 * (-z[k]) + b.phi1 + curve.constant(t.y / t.x) + b.theta[k];
}

cplx serre_pairing_residue(const Curve& curve, const Divisor& d, std::size_t k, std::size_t j, const std::vector<cplx>& z) {
    if (j >= d.size()) throw Error(ErrorCode::ValidationError, "index out of range");
    return residue_of_form(serre_pairing_form(curve, d, k, z), curve, d.point(j));
}

cplx Moebius::operator()(cplx t) const {
    const cplx den = c * t + d;
    if (std::abs(den) <= kOffDiagonal * (std::abs(c * t) + std::abs(d)))
        throw Error(ErrorCode::ChartBoundary, "Moebius map sends the point to infinity");
    return (a * t + b) / den;
}

cplx Moebius::derivative(cplx t) const {
    const cplx den = c * t + d;
    return (a * d - b * c) / (den * den);
}

std::pair<cplx, cplx> mobius_transport(const std::vector<std::size_t>& sigma, const std::vector<Moebius>& maps,
                                       const ChartPoint& pt, const TangentVector& t1, const TangentVector& t2,
                                       const EigenData& nu, bool permute_weights) {
    const std::size_t n = pt.n();
    if (sigma.size() != n || maps.size() != n || nu.n() != n)
        throw Error(ErrorCode::ValidationError, "sigma, maps, nu and the point must have the same size");
    std::vector<std::size_t> seen(sigma);
    std::sort(seen.begin(), seen.end());
    for (std::size_t j = 0; j < n; ++j)
        if (seen[j] != j) throw Error(ErrorCode::ValidationError, "sigma is not a permutation");
    for (const Moebius& m : maps) {
        const double scale = std::max({std::abs(m.a * m.d), std::abs(m.b * m.c), 1e-300});
        if (std::abs(m.a * m.d - m.b * m.c) <= 1e-12 * scale)
            throw Error(ErrorCode::DegenerateMoebius, "ad - bc vanishes");
    }
    const cplx before = two_form_eval(TwoFormTag::omega_nu, &nu, pt, t1, t2);

    ChartPoint image{CoordTag::sn, std::vector<cplx>(n), std::vector<cplx>(n)};
    TangentVector v1{CoordTag::sn, std::vector<cplx>(n), std::vector<cplx>(n)};
    TangentVector v2 = v1;
    EigenData weights = nu;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = sigma[j];
        const Moebius& m = maps[j];
        image.base[j] = m(pt.base[i]);
        image.fiber[j] = m(pt.fiber[i]);
        v1.d_base[j] = m.derivative(pt.base[i]) * t1.d_base[i];
        v1.d_fiber[j] = m.derivative(pt.fiber[i]) * t1.d_fiber[i];
        v2.d_base[j] = m.derivative(pt.base[i]) * t2.d_base[i];
        v2.d_fiber[j] = m.derivative(pt.fiber[i]) * t2.d_fiber[i];
        if (permute_weights) weights.pairs[j] = nu.pairs[i];
    }
    return {before, two_form_eval(TwoFormTag::omega_nu, &weights, image, v1, v2)};
}

}  // namespace ellcon
