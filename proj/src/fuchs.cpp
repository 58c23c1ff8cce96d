#include "ellcon/fuchs.hpp"

#include <algorithm>
#include <cmath>

#include "ellcon/error.hpp"

namespace ellcon {

namespace {

constexpr double kTraceTolerance = 1e-10;
constexpr double kEigenvalueTolerance = 1e-8;
constexpr double kDegenerateNu = 1e-10;
constexpr double kDiagonalTolerance = 1e-10;

Mat2 sl2(cplx a, cplx b, cplx c) {
    Mat2 m;
    m << a, b, c, -a;
    return m;
}

bool same_divisor(const Divisor& a, const Divisor& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a.point(j).x != b.point(j).x || a.point(j).y != b.point(j).y) return false;
    return true;
}

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw Error(ErrorCode::ValidationError,
                    std::string(what) + " has " + std::to_string(got) + " entries, expected " + std::to_string(want));
}

void require_nonzero(const std::vector<cplx>& v, const char* what) {
    for (std::size_t j = 0; j < v.size(); ++j)
        if (std::abs(v[j]) <= kDiagonalTolerance)
            throw Error(ErrorCode::ChartBoundary, std::string(what) + "_" + std::to_string(j + 1) + " is zero");
}

}  // namespace

std::vector<cplx> EigenData::reduced() const {
    std::vector<cplx> out;
    out.reserve(n());
    for (std::size_t j = 0; j < n(); ++j) out.push_back(nu(j));
    return out;
}

cplx EigenData::fuchs_defect() const {
    cplx s{1.0};
    for (const auto& [p, m] : pairs) s += p + m;
    return s;
}

void EigenData::require_fuchs(double tol) const {
    if (std::abs(fuchs_defect()) > tol)
        throw Error(ErrorCode::FuchsRelationViolated, "1 + sum of eigenvalues is not zero");
}

std::vector<Mat2> FuchsianSystem::coefficients() const {
    std::vector<Mat2> out{a_omega, a_phi0, a_phi1};
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

FuchsianSystem& FuchsianSystem::operator+=(const FuchsianSystem& rhs) {
    if (curve.lambda() != rhs.curve.lambda() || !same_divisor(divisor, rhs.divisor))
        throw Error(ErrorCode::ValidationError, "systems live over different (curve, D)");
    a_phi0 += rhs.a_phi0;
    a_phi1 += rhs.a_phi1;
    a_omega += rhs.a_omega;
    for (std::size_t j = 0; j < b.size(); ++j) b[j] += rhs.b[j];
    scale += rhs.scale;
    return *this;
}

FuchsianSystem& FuchsianSystem::operator*=(cplx s) {
    a_phi0 *= s;
    a_phi1 *= s;
    a_omega *= s;
    for (auto& m : b) m *= s;
    scale *= s;
    return *this;
}

double max_deviation(const FuchsianSystem& a, const FuchsianSystem& b) {
    const auto ca = a.coefficients();
    const auto cb = b.coefficients();
    require_size(cb.size(), ca.size(), "system");
    double dev = std::abs(a.scale - b.scale);
    for (std::size_t k = 0; k < ca.size(); ++k) dev = std::max(dev, max_abs(ca[k] - cb[k]));
    return dev;
}

double max_trace(const FuchsianSystem& sys) {
    double t = 0.0;
    for (const Mat2& m : sys.coefficients()) t = std::max(t, std::abs(m.trace()));
    return t;
}

LocalExpansion local_expansion(const FuchsianSystem& sys, const CurvePoint& pt) {
    const auto forms = basis_forms(sys.curve, sys.divisor).all();
    const auto coeffs = sys.coefficients();
    const Chart chart = chart_at(sys.curve, pt);
    LocalExpansion e{Mat2::Zero(), Mat2::Zero()};
    for (std::size_t k = 0; k < forms.size(); ++k) {
        const LaurentSeries s = expand_function(forms[k], chart) * chart.omega_series;
        e.residue += s.coefficient(-1) * coeffs[k];
        e.constant += s.coefficient(0) * coeffs[k];
    }
    return e;
}

FuchsianSystem build_system(const Curve& curve, const Divisor& d, const std::vector<Mat2>& residues, cplx scale) {
    validate_polar_divisor(curve, d);
    require_size(residues.size(), d.size(), "residue list");
    cplx sa{}, sg{}, a2{}, b2{}, c2{};
    const cplx lam = curve.lambda();
    for (std::size_t j = 0; j < residues.size(); ++j) {
        const Mat2& r = residues[j];
        if (std::abs(r.trace()) > kTraceTolerance * std::max(1.0, max_abs(r)))
            throw Error(ErrorCode::InvalidResidues, "residue " + std::to_string(j + 1) + " is not trace-free");
        const cplx al = 0.5 * (r(0, 0) - r(1, 1));
        const cplx be = r(0, 1);
        const cplx ga = r(1, 0);
        const cplx xj = d.point(j).x;
        const cplx yj = d.point(j).y;
        sa += al;
        sg += ga;
        a2 += 0.5 * yj * ((2.0 * al + be - ga) / (xj - 1.0) + ga / xj - be / (xj - lam));
        b2 += yj * be / (xj - lam);
        c2 += yj * ga / xj;
    }
    const cplx h = 0.5 * scale;
    FuchsianSystem sys{curve, d, sl2(-sa, h + sa, h - sa), sl2(h + sa, -h - sa, sg), sl2(a2, b2, c2), {}, scale};
    for (const Mat2& r : residues) sys.b.push_back(sl2(0.5 * (r(0, 0) - r(1, 1)), r(0, 1), r(1, 0)));
    return sys;
}

Direction prescribed_eigenspace(Weierstrass w) {
    switch (w) {
        case Weierstrass::w0: return {1.0, 0.0};
        case Weierstrass::w1: return {1.0, 1.0};
        case Weierstrass::wlambda: return {0.0, 1.0};
    }
    return {};
}

ApparentReport check_apparent(const FuchsianSystem& sys, const CurvePoint& wpt) {
    if (std::abs(sys.scale) <= kDegenerateNu)
        throw Error(ErrorCode::NotAConnection, "apparentness is defined only for scale != 0");
    std::optional<Weierstrass> which;
    for (Weierstrass w : {Weierstrass::w0, Weierstrass::w1, Weierstrass::wlambda})
        if (wpt.is_affine() && std::abs(wpt.x - sys.curve.weierstrass(w).x) <= 1e-10) which = w;
    if (!which) throw Error(ErrorCode::ValidationError, "check_apparent needs a finite Weierstrass point");

    const LocalExpansion e = local_expansion(sys, sys.curve.weierstrass(*which));
    const Mat2 r = e.residue / sys.scale;
    const Mat2 c = e.constant / sys.scale;
    const Eigen2 eig = eig2(r);
    const double d1 = std::max(std::abs(eig.values[0] - 0.5), std::abs(eig.values[1] + 0.5));
    const double d2 = std::max(std::abs(eig.values[0] + 0.5), std::abs(eig.values[1] - 0.5));

    ApparentReport rep;
    rep.point = sys.curve.weierstrass(*which);
    rep.eigenvalue_defect = std::min(d1, d2);
    const Direction v = eigenvector(r, 0.5);
    rep.eigenspace_defect = projective_distance(v, prescribed_eigenspace(*which));
    const Vec2 u = v.vector();
    const Vec2 cu = c * u;
    const cplx rayleigh = u.dot(cu) / u.dot(u);
    rep.invariance_defect = (cu - rayleigh * u).norm() / std::max(cu.norm(), 1.0);
    rep.passed = rep.eigenvalue_defect <= kApparentTolerance && rep.eigenspace_defect <= kApparentTolerance &&
                 rep.invariance_defect <= kApparentTolerance;
    return rep;
}

void ParPoint::validate() const {
    for (std::size_t j = 0; j < pairs.size(); ++j)
        if (projective_distance(pairs[j].plus, pairs[j].minus) <= kDiagonalTolerance)
            throw Error(ErrorCode::DiagonalPoint, "directions over t_" + std::to_string(j + 1) + " coincide");
}

double projective_distance(const ParPoint& p, const ParPoint& q) {
    require_size(q.n(), p.n(), "ParPoint");
    double dev = 0.0;
    for (std::size_t j = 0; j < p.n(); ++j) {
        dev = std::max(dev, projective_distance(p.pairs[j].plus, q.pairs[j].plus));
        dev = std::max(dev, projective_distance(p.pairs[j].minus, q.pairs[j].minus));
    }
    return dev;
}

ParPoint par(const FuchsianSystem& sys, const EigenData& nu) {
    require_size(nu.n(), sys.b.size(), "eigenvalue data");
    if (std::abs(sys.scale) <= kDegenerateNu)
        throw Error(ErrorCode::NotAConnection, "Par needs a connection (scale != 0)");
    ParPoint pp;
    for (std::size_t j = 0; j < nu.n(); ++j) {
        const cplx v = nu.nu(j);
        if (std::abs(v) <= kDegenerateNu)
            throw Error(ErrorCode::DegenerateResidue, "nu_" + std::to_string(j + 1) + " vanishes");
        const Mat2 r = sys.b[j] / sys.scale;
        const Eigen2 e = eig2(r);
        const double tol = kEigenvalueTolerance * std::max(1.0, std::abs(v));
        const double fwd = std::max(std::abs(e.values[0] - 0.5 * v), std::abs(e.values[1] + 0.5 * v));
        const double bwd = std::max(std::abs(e.values[1] - 0.5 * v), std::abs(e.values[0] + 0.5 * v));
        if (std::min(fwd, bwd) > tol)
            throw Error(ErrorCode::EigenvalueMismatch, "residue at t_" + std::to_string(j + 1) + " does not have eigenvalues +-nu/2");
        pp.pairs.push_back({eigenvector(r, 0.5 * v), eigenvector(r, -0.5 * v)});
    }
    return pp;
}

Mat2 residue_from_directions(cplx nu, const ParPair& pair) {
    const Direction p = pair.plus.normalized();
    const Direction m = pair.minus.normalized();
    const cplx z = p.a, w = p.b, u = m.a, v = m.b;
    const cplx det = z * v - w * u;
    if (std::abs(det) <= kDiagonalTolerance) throw Error(ErrorCode::DiagonalPoint, "eigenspaces coincide");
    Mat2 s, s_inv_scaled, diag;
    s << z, u, w, v;
    s_inv_scaled << v, -u, -w, z;
    diag << 0.5 * nu, 0.0, 0.0, -0.5 * nu;
    return s * diag * s_inv_scaled / det;
}

FuchsianSystem par_inverse(const Curve& curve, const Divisor& d, const EigenData& nu, const ParPoint& pp) {
    require_size(pp.n(), d.size(), "ParPoint");
    require_size(nu.n(), d.size(), "eigenvalue data");
    pp.validate();
    std::vector<Mat2> residues;
    for (std::size_t j = 0; j < pp.n(); ++j) {
        if (std::abs(nu.nu(j)) <= kDegenerateNu)
            throw Error(ErrorCode::DegenerateResidue, "nu_" + std::to_string(j + 1) + " vanishes");
        residues.push_back(residue_from_directions(nu.nu(j), pp.pairs[j]));
    }
    return build_system(curve, d, residues, 1.0);
}

FuchsianSystem chart_connection(const Curve& curve, const Divisor& d, const EigenData& nu, ChartTag tag,
                                const std::vector<cplx>& base, const std::vector<cplx>& fiber, cplx scale) {
    validate_polar_divisor(curve, d);
    const std::size_t n = d.size();
    require_size(nu.n(), n, "eigenvalue data");
    require_size(base.size(), n, "base coordinates");
    require_size(fiber.size(), n, "fiber coordinates");
    const cplx lam = curve.lambda();

    cplx half_nu{};
    for (std::size_t j = 0; j < n; ++j) half_nu += 0.5 * nu.nu(j);

    // the connection part
    FuchsianSystem sys{curve, d, Mat2::Zero(), Mat2::Zero(), Mat2::Zero(), std::vector<Mat2>(n, Mat2::Zero()), 1.0};
    cplx a2{}, b2{}, c1{}, c2{};
    for (std::size_t j = 0; j < n; ++j) {
        const cplx v = nu.nu(j), t = base[j], xj = d.point(j).x, yj = d.point(j).y;
        if (tag == ChartTag::U0) {
            a2 += 0.5 * v * yj * ((t - 1.0) / (xj - 1.0) - t / (xj - lam));
            b2 += v * yj * t / (xj - lam);
            sys.b[j] = 0.5 * v * sl2(-1.0, 2.0 * t, 0.0);
        } else {
            c1 += v * t;
            a2 += 0.5 * v * yj * ((1.0 - t) / (xj - 1.0) + t / xj);
            c2 += yj * v * t / xj;
            sys.b[j] = 0.5 * v * sl2(1.0, 0.0, 2.0 * t);
        }
    }
    if (tag == ChartTag::U0) {
        sys.a_phi0 = sl2(half_nu, 0.5 - half_nu, 0.5 + half_nu);
        sys.a_phi1 = sl2(0.5 - half_nu, -0.5 + half_nu, 0.0);
        sys.a_omega = sl2(a2, b2, 0.0);
    } else {
        sys.a_phi0 = sl2(-half_nu, 0.5 + half_nu, 0.5 - half_nu);
        sys.a_phi1 = sl2(0.5 + half_nu, -0.5 - half_nu, c1);
        sys.a_omega = sl2(a2, 0.0, c2);
    }
    sys *= scale;

    // the strongly parabolic Higgs fields
    for (std::size_t j = 0; j < n; ++j) {
        const cplx f = fiber[j], t = base[j], xj = d.point(j).x, yj = d.point(j).y;
        if (f == cplx{}) continue;
        if (tag == ChartTag::U0) {
            const cplx diag = 0.5 * yj * (-(t - 1.0) * (t - 1.0) / (xj - 1.0) + 1.0 / xj + t * t / (xj - lam));
            sys.a_phi0 += f * sl2(-t, t, -t);
            sys.a_phi1 += f * sl2(t, -t, 1.0);
            sys.a_omega += f * sl2(diag, -yj * t * t / (xj - lam), yj / xj);
            sys.b[j] += f * sl2(t, -t * t, 1.0);
        } else {
            const cplx diag = 0.5 * yj * (-(1.0 - t) * (1.0 - t) / (xj - 1.0) + t * t / xj + 1.0 / (xj - lam));
            sys.a_phi0 += f * sl2(-t, t, -t);
            sys.a_phi1 += f * sl2(t, -t, t * t);
            sys.a_omega += f * sl2(diag, -yj / (xj - lam), yj * t * t / xj);
            sys.b[j] += f * sl2(t, -1.0, t * t);
        }
    }
    return sys;
}

ChartCoordinates transition_map(const EigenData& nu, const std::vector<cplx>& w, const std::vector<cplx>& s) {
    require_size(w.size(), nu.n(), "w");
    require_size(s.size(), nu.n(), "s");
    require_nonzero(w, "w");
    ChartCoordinates out;
    for (std::size_t j = 0; j < w.size(); ++j) {
        out.base.push_back(1.0 / w[j]);
        out.fiber.push_back(w[j] * w[j] * s[j] + nu.nu(j) * w[j]);
    }
    return out;
}

ChartCoordinates transition_inverse(const EigenData& nu, const std::vector<cplx>& z, const std::vector<cplx>& r) {
    require_size(z.size(), nu.n(), "z");
    require_size(r.size(), nu.n(), "r");
    require_nonzero(z, "z");
    ChartCoordinates out;
    for (std::size_t j = 0; j < z.size(); ++j) {
        // w = 1/z, s = (r - nu w) / w^2 = z^2 r - nu z
        out.base.push_back(1.0 / z[j]);
        out.fiber.push_back(z[j] * z[j] * r[j] - nu.nu(j) * z[j]);
    }
    return out;
}

double SplittingReport::max() const { return std::max({cocycle_deviation, chart_identity_deviation, higgs_deviation}); }

SplittingReport splitting_check(const Curve& curve, const Divisor& d, const EigenData& nu, const std::vector<cplx>& w,
                                const std::vector<cplx>& s) {
    const std::size_t n = d.size();
    require_size(w.size(), n, "w");
    require_size(s.size(), n, "s");
    require_nonzero(w, "w");
    SplittingReport rep;

    const std::vector<cplx> zero(n);
    const ChartCoordinates at_zero = transition_map(nu, w, zero);
    rep.cocycle_deviation = max_deviation(chart_connection(curve, d, nu, ChartTag::Uinf, w, zero, 1.0),
                                          chart_connection(curve, d, nu, ChartTag::U0, at_zero.base, at_zero.fiber, 1.0));

    const ChartCoordinates zr = transition_map(nu, w, s);
    rep.chart_identity_deviation = max_deviation(chart_connection(curve, d, nu, ChartTag::Uinf, w, s, 1.0),
                                                 chart_connection(curve, d, nu, ChartTag::U0, zr.base, zr.fiber, 1.0));

    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> e(n), e_scaled(n);
        e[j] = 1.0;
        e_scaled[j] = w[j] * w[j];
        rep.higgs_deviation =
            std::max(rep.higgs_deviation, max_deviation(chart_connection(curve, d, nu, ChartTag::Uinf, w, e, 0.0),
                                                        chart_connection(curve, d, nu, ChartTag::U0, zr.base, e_scaled, 0.0)));
    }
    return rep;
}

Eigen::MatrixXcd lambda_transition_matrix(const EigenData& nu, const std::vector<cplx>& w) {
    require_size(w.size(), nu.n(), "w");
    require_nonzero(w, "w");
    const auto n = static_cast<Eigen::Index>(w.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    m(0, 0) = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        m(j + 1, 0) = nu.nu(static_cast<std::size_t>(j)) * w[static_cast<std::size_t>(j)];
        m(j + 1, j + 1) = w[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)];
    }
    return m;
}

}  // namespace ellcon
