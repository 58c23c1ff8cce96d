#include "ellcon/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "ellcon/error.hpp"
#include "ellcon/stability.hpp"
#include "ellcon/symplectic.hpp"

namespace ellcon {

bool SuiteResult::passed() const {
    return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.passed(); });
}

double Sampler::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

int Sampler::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

cplx Sampler::disc(double radius) {
    return std::polar(radius * std::sqrt(uniform(0.0, 1.0)), uniform(0.0, 2.0 * std::numbers::pi));
}

cplx Sampler::annulus(double lo, double hi) {
    return std::polar(std::sqrt(uniform(lo * lo, hi * hi)), uniform(0.0, 2.0 * std::numbers::pi));
}

Mat2 Sampler::trace_free(double radius) {
    const cplx a = disc(radius), b = disc(radius), c = disc(radius);
    Mat2 m;
    m << a, b, c, -a;
    return m;
}

Direction Sampler::direction() {
    const cplx a = disc(1.0), b = disc(1.0);
    return Direction{a, b}.normalized();
}

Curve Sampler::curve() {
    for (;;) {
        const cplx lam = disc(3.0);
        if (std::abs(lam) >= 0.3 && std::abs(lam - 1.0) >= 0.3) return make_curve(lam);
    }
}

Divisor Sampler::divisor(const Curve& curve, std::size_t n) {
    std::vector<CurvePoint> pts;
    std::vector<cplx> xs;
    while (pts.size() < n) {
        const CurvePoint p = sample_curve_point(curve, rng_, xs, 0.1, 2.5);
        pts.push_back(p);
        xs.push_back(p.x);
    }
    return Divisor::reduced(pts);
}

EigenData Sampler::eigen_data(std::size_t n) {
    for (;;) {
        EigenData nu;
        cplx total{1.0};
        for (std::size_t j = 0; j < n; ++j) {
            const cplx p = disc(1.0);
            const cplx m = j + 1 < n ? disc(1.0) : cplx{};
            nu.pairs.emplace_back(p, m);
            total += p + m;
        }
        nu.pairs.back().second -= total;
        bool ok = true;
        for (std::size_t j = 0; j < n; ++j) ok = ok && std::abs(nu.nu(j)) >= 0.1;
        for_each_sign_sum(nu, [&](cplx s) { ok = ok && std::abs(s) >= 1e-3 && !is_integer(s, 1e-3); });
        if (ok) return nu;
    }
}

ParPoint Sampler::par_point(std::size_t n) {
    ParPoint pp;
    while (pp.pairs.size() < n) {
        const Direction a = direction(), b = direction();
        if (projective_distance(a, b) >= 0.05) pp.pairs.push_back({a, b});
    }
    return pp;
}

void Tolerances::set(const std::string& name, double value) {
    double* slot = nullptr;
    if (name == "residue") slot = &residue;
    if (name == "apparent") slot = &apparent;
    if (name == "par") slot = &par;
    if (name == "par_system") slot = &par_system;
    if (name == "splitting") slot = &splitting;
    if (name == "lambda_matrix") slot = &lambda_matrix;
    if (name == "symplectic") slot = &symplectic;
    if (name == "serre") slot = &serre;
    if (name == "linearity") slot = &linearity;
    if (name == "derivation") slot = &derivation;
    if (name == "chart") slot = &chart;
    if (slot == nullptr) throw Error(ErrorCode::ValidationError, "unknown tolerance '" + name + "'");
    if (!(value > 0.0)) throw Error(ErrorCode::ValidationError, "tolerance '" + name + "' must be positive");
    *slot = value;
}

namespace {

std::vector<CurvePoint> table_columns(const Curve& curve, const Divisor& d) {
    std::vector<CurvePoint> cols;
    for (const auto& w : curve.affine_weierstrass()) cols.push_back(w);
    for (const auto& e : d.entries()) cols.push_back(e.point);
    return cols;
}

double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

Metric count_metric(std::string name, int violations, std::string anchor) {
    return {std::move(name), static_cast<double>(violations), 0.0, std::move(anchor)};
}

}  // namespace

ResidueTable residue_table(const Curve& curve, const Divisor& d) {
    const auto forms = basis_forms(curve, d).all();
    const auto cols = table_columns(curve, d);
    ResidueTable t;
    t.residues.assign(forms.size(), std::vector<cplx>(cols.size()));
    t.constants = t.residues;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const Chart chart = chart_at(curve, cols[c]);
        for (std::size_t k = 0; k < forms.size(); ++k) {
            const LaurentSeries s = expand_function(forms[k], chart) * chart.omega_series;
            t.residues[k][c] = s.coefficient(-1);
            t.constants[k][c] = s.coefficient(0);
        }
    }
    return t;
}

ResidueTable expected_residue_table(const Curve& curve, const Divisor& d) {
    const std::size_t n = d.size();
    const cplx lam = curve.lambda();
    ResidueTable t;
    t.residues.assign(n + 3, std::vector<cplx>(n + 3));
    t.constants = t.residues;
    // omega has no poles; its constant terms are 1/p'(a)
    t.constants[0] = {1.0 / lam, 1.0 / (1.0 - lam), 1.0 / (lam * (lam - 1.0))};
    t.constants[0].resize(n + 3);
    // phi0 = O(y), dy/y + O(y), -dy/y + O(y)
    t.residues[1][1] = 1.0;
    t.residues[1][2] = -1.0;
    // phi1 = dy/y + O(y), O(y), -dy/y + O(y)
    t.residues[2][0] = 1.0;
    t.residues[2][2] = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx xk = d.point(k).x, yk = d.point(k).y;
        auto& res = t.residues[k + 3];
        auto& con = t.constants[k + 3];
        res[0] = -1.0;
        res[3 + k] = 1.0;
        con[0] = -yk / (lam * xk);
        // x_k(x_k x - lambda)/(x_k y - y_k x) at (1, 0) and (lambda, 0), times the constant term of omega
        con[1] = xk * (xk - lam) / (-yk) / (1.0 - lam);
        con[2] = xk * (xk * lam - lam) / (-yk * lam) / (lam * (lam - 1.0));
    }
    return t;
}

std::pair<double, double> residue_table_deviation(const Curve& curve, const Divisor& d) {
    const ResidueTable got = residue_table(curve, d);
    const ResidueTable want = expected_residue_table(curve, d);
    double dr = 0.0, dc = 0.0;
    for (std::size_t k = 0; k < got.residues.size(); ++k)
        for (std::size_t c = 0; c < got.residues[k].size(); ++c) {
            dr = std::max(dr, std::abs(got.residues[k][c] - want.residues[k][c]));
            // constant terms are tabulated at the Weierstrass points only
            if (c < 3) dc = std::max(dc, rel(got.constants[k][c], want.constants[k][c]));
        }
    return {dr, dc};
}

std::array<double, 3> apparent_defects(const FuchsianSystem& sys) {
    std::array<double, 3> worst{};
    for (const auto& w : sys.curve.affine_weierstrass()) {
        const ApparentReport r = check_apparent(sys, w);
        worst[0] = std::max(worst[0], r.eigenvalue_defect);
        worst[1] = std::max(worst[1], r.eigenspace_defect);
        worst[2] = std::max(worst[2], r.invariance_defect);
    }
    return worst;
}

std::pair<double, double> par_roundtrip(const Curve& curve, const Divisor& d, const EigenData& nu, const ParPoint& pp) {
    const FuchsianSystem sys = par_inverse(curve, d, nu, pp);
    const ParPoint back = par(sys, nu);
    const FuchsianSystem again = par_inverse(curve, d, nu, back);
    double scale = 1.0;
    for (const Mat2& m : sys.coefficients()) scale = std::max(scale, max_abs(m));
    return {projective_distance(pp, back), max_deviation(sys, again) / scale};
}

double lambda_matrix_deviation(const EigenData& nu, const std::vector<cplx>& w, const std::vector<cplx>& s) {
    const Eigen::MatrixXcd m = lambda_transition_matrix(nu, w);
    const ChartCoordinates zr = transition_map(nu, w, s);
    const auto n = static_cast<Eigen::Index>(w.size());
    Eigen::VectorXcd one(n + 1), zero(n + 1);
    one(0) = 1.0;
    zero(0) = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) one(j + 1) = zero(j + 1) = s[static_cast<std::size_t>(j)];
    const Eigen::VectorXcd a = m * one, b = m * zero;
    double dev = std::max(std::abs(a(0) - 1.0), std::abs(b(0)));
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        dev = std::max(dev, rel(a(j + 1), zr.fiber[k]));
        dev = std::max(dev, rel(b(j + 1), w[k] * w[k] * s[k]));
    }
    cplx det{1.0};
    for (const cplx& x : w) det *= x * x;
    return std::max(dev, rel(m.determinant(), det));
}

double serre_matrix_deviation(const Curve& curve, const Divisor& d, const std::vector<cplx>& z) {
    double dev = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k)
        for (std::size_t j = 0; j < d.size(); ++j)
            dev = std::max(dev, std::abs(serre_pairing_residue(curve, d, k, j, z) - (k == j ? 1.0 : 0.0)));
    return dev;
}

SuiteResult suite_residue_table(std::uint64_t seed, const Tolerances& tol) {
    Sampler s(seed);
    double dr = 0.0, dc = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Curve c = s.curve();
        const Divisor d = s.divisor(c, 1 + static_cast<std::size_t>(trial % 5));
        const auto [r, k] = residue_table_deviation(c, d);
        dr = std::max(dr, r);
        dc = std::max(dc, k);
    }
    return {"residue-table",
            {{"basis residues at w0, w1, wlambda, t_j", dr, tol.residue, "residue table of the one-form basis"},
             {"basis constant terms at w0, w1, wlambda", dc, tol.residue, "constant terms of the one-form basis"}}};
}

SuiteResult suite_apparentness(std::uint64_t seed, int trials, const Tolerances& tol) {
    Sampler s(seed);
    std::array<double, 3> worst{};
    double trace = 0.0, residues = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const Curve c = s.curve();
        const Divisor d = s.divisor(c, static_cast<std::size_t>(s.integer(1, 4)));
        std::vector<Mat2> res;
        for (std::size_t j = 0; j < d.size(); ++j) res.push_back(s.trace_free(1.0));
        const FuchsianSystem sys = build_system(c, d, res);
        const auto defects = apparent_defects(sys);
        for (int i = 0; i < 3; ++i) worst[i] = std::max(worst[i], defects[i]);
        trace = std::max(trace, max_trace(sys));
        for (std::size_t j = 0; j < d.size(); ++j)
            residues = std::max(residues, max_abs(local_expansion(sys, d.point(j)).residue - res[j]));
    }
    const std::string anchor = "apparent singularities imposed at w0, w1, wlambda";
    return {"apparentness",
            {{"eigenvalue defect of Res vs {1/2, -1/2}", worst[0], tol.apparent, anchor},
             {"1/2-eigenspace defect vs (1:0), (1:1), (0:1)", worst[1], tol.apparent, anchor},
             {"invariance of the 1/2-eigenspace by the constant part", worst[2], tol.apparent, anchor},
             {"max |trace| of coefficient matrices", trace, 1e-12, "sl2-valued Fuchsian system"},
             {"residue at t_j reproduces B_j", residues, tol.residue, "system determined by its residues"}}};
}

SuiteResult suite_par(std::uint64_t seed, int trials, const Tolerances& tol) {
    Sampler s(seed);
    double e1 = 0.0, e2 = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const Curve c = s.curve();
        const std::size_t n = static_cast<std::size_t>(s.integer(1, 4));
        const Divisor d = s.divisor(c, n);
        const EigenData nu = s.eigen_data(n);
        const auto [a, b] = par_roundtrip(c, d, nu, s.par_point(n));
        e1 = std::max(e1, a);
        e2 = std::max(e2, b);
    }
    return {"par-bijection",
            {{"par o par_inverse projective error", e1, tol.par, "Par is an isomorphism onto S^n"},
             {"par_inverse o par relative coefficient error", e2, tol.par_system, "Par is an isomorphism onto S^n"}}};
}

SuiteResult suite_transition(std::uint64_t seed, int trials, const Tolerances& tol) {
    Sampler s(seed);
    double cocycle = 0.0, chart = 0.0, higgs = 0.0, lam = 0.0, round = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const Curve c = s.curve();
        const std::size_t n = static_cast<std::size_t>(s.integer(1, 4));
        const Divisor d = s.divisor(c, n);
        const EigenData nu = s.eigen_data(n);
        std::vector<cplx> w, f;
        for (std::size_t j = 0; j < n; ++j) {
            w.push_back(s.annulus(0.5, 2.0));
            f.push_back(s.disc(1.0));
        }
        const SplittingReport r = splitting_check(c, d, nu, w, f);
        cocycle = std::max(cocycle, r.cocycle_deviation);
        chart = std::max(chart, r.chart_identity_deviation);
        higgs = std::max(higgs, r.higgs_deviation);
        lam = std::max(lam, lambda_matrix_deviation(nu, w, f));
        const ChartCoordinates zr = transition_map(nu, w, f);
        const ChartCoordinates ws = transition_inverse(nu, zr.base, zr.fiber);
        for (std::size_t j = 0; j < n; ++j)
            round = std::max({round, rel(ws.base[j], w[j]), rel(ws.fiber[j], f[j])});
    }
    const std::string anchor = "splitting cocycle of nabla_inf and nabla_0";
    return {"transition-splitting",
            {{"splitting cocycle deviation", cocycle, tol.splitting, anchor},
             {"chart identity deviation", chart, tol.splitting, "affine transition between the U_0 and U_inf trivializations"},
             {"Theta^inf = w^2 Theta^0(1/w) deviation", higgs, tol.splitting, anchor},
             {"lambda transition matrix vs transition map", lam, tol.lambda_matrix, "transition matrix of the lambda-connection bundle"},
             {"transition round trip", round, tol.lambda_matrix, "affine transition between the U_0 and U_inf trivializations"}}};
}

SuiteResult suite_symplectic(std::uint64_t seed, int trials, const Tolerances& tol) {
    Sampler s(seed);
    auto vec = [&](std::size_t n, double r) {
        std::vector<cplx> v;
        for (std::size_t j = 0; j < n; ++j) v.push_back(s.disc(r));
        return v;
    };
    double transition = 0.0, substitution = 0.0, serre = 0.0, moebius = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t n = static_cast<std::size_t>(s.integer(1, 4));
        const EigenData nu = s.eigen_data(n);
        {
            ChartPoint p{CoordTag::uinf, {}, vec(n, 1.0)};
            for (std::size_t j = 0; j < n; ++j) p.base.push_back(s.annulus(0.5, 2.0));
            const TangentVector t1{CoordTag::uinf, vec(n, 1.0), vec(n, 1.0)};
            const TangentVector t2{CoordTag::uinf, vec(n, 1.0), vec(n, 1.0)};
            const cplx want = two_form_eval(TwoFormTag::darboux_uinf, nullptr, p, t1, t2);
            const cplx got = pullback_two_form(transition_chart_map(nu), p, t1, t2, TwoFormTag::darboux_u0, nullptr).value;
            transition = std::max(transition, rel(got, want));
        }
        {
            ChartPoint p{CoordTag::u0, vec(n, 2.0), {}};
            for (std::size_t j = 0; j < n; ++j) p.fiber.push_back(s.annulus(0.5, 2.0));
            const TangentVector t1{CoordTag::u0, vec(n, 1.0), vec(n, 1.0)};
            const TangentVector t2{CoordTag::u0, vec(n, 1.0), vec(n, 1.0)};
            const cplx want = two_form_eval(TwoFormTag::darboux_u0, nullptr, p, t1, t2);
            const cplx got = pullback_two_form(substitution_map(nu), p, t1, t2, TwoFormTag::omega_nu, &nu).value;
            substitution = std::max(substitution, rel(got, want));
        }
    }
    for (std::size_t n = 1; n <= 5; ++n)
        for (int rep = 0; rep < 4; ++rep) {
            const Curve c = s.curve();
            const Divisor d = s.divisor(c, n);
            serre = std::max(serre, serre_matrix_deviation(c, d, vec(n, 2.0)));
        }
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = static_cast<std::size_t>(s.integer(1, 4));
        const EigenData nu = s.eigen_data(n);
        std::vector<std::size_t> sigma(n);
        for (std::size_t j = 0; j < n; ++j) sigma[j] = j;
        std::shuffle(sigma.begin(), sigma.end(), s.rng());
        std::vector<Moebius> maps;
        while (maps.size() < n) {
            const Moebius m{s.disc(1.0), s.disc(1.0), s.disc(1.0), s.disc(1.0)};
            if (std::abs(m.a * m.d - m.b * m.c) >= 0.2) maps.push_back(m);
        }
        ChartPoint p{CoordTag::sn, {}, {}};
        for (std::size_t j = 0; j < n; ++j) {
            // keep the point and its images away from the diagonal and from the poles of the maps
            for (;;) {
                const cplx z = s.disc(1.5), zeta = s.disc(1.5);
                const Moebius& m = maps[std::find(sigma.begin(), sigma.end(), j) - sigma.begin()];
                if (std::abs(z - zeta) >= 0.3 && std::abs(m.c * z + m.d) >= 0.2 && std::abs(m.c * zeta + m.d) >= 0.2) {
                    p.base.push_back(z);
                    p.fiber.push_back(zeta);
                    break;
                }
            }
        }
        const TangentVector t1{CoordTag::sn, vec(n, 1.0), vec(n, 1.0)};
        const TangentVector t2{CoordTag::sn, vec(n, 1.0), vec(n, 1.0)};
        const auto [before, after] = mobius_transport(sigma, maps, p, t1, t2, nu);
        moebius = std::max(moebius, rel(after, before));
    }
    return {"symplectic",
            {{"transition pullback of sum dz^dr vs -sum dw^ds", transition, tol.symplectic, "Darboux coordinates on U_0 and U_inf"},
             {"substitution pullback of omega_nu vs sum dz^dr", substitution, tol.symplectic, "omega_nu after the substitution zeta = z - nu/r"},
             {"Serre pairing matrix vs identity", serre, tol.serre, "Serre pairing residues form the Kronecker symbol"},
             {"Moebius transport of omega_nu", moebius, tol.symplectic, "Moebius invariance of omega_nu"}}};
}

SuiteResult suite_stability(std::uint64_t seed) {
    Sampler s(seed);
    auto chamber_point = [&](std::size_t n) {
        // first n coordinates of a uniform point on the (n+1)-simplex: sum < 1, each in (0, 1)
        std::exponential_distribution<double> e(1.0);
        std::vector<double> g(n + 1);
        double total = 0.0;
        for (double& x : g) total += (x = e(s.rng()) + 1e-9);
        WeightVector mu;
        for (std::size_t k = 0; k < n; ++k) mu.mu.push_back(g[k] / total);
        return mu;
    };
    auto random_subset = [&](std::size_t n, bool even) {
        IndexSet i;
        for (std::size_t k = 0; k < n; ++k)
            if (s.integer(0, 1)) i.push_back(k);
        if (even && i.size() % 2 == 1) i.pop_back();
        return i;
    };

    int wall_violations = 0;
    double min_margin = 1.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = static_cast<std::size_t>(s.integer(1, 6));
        const WeightVector mu = chamber_point(n);
        const double bound = 1.0 - mu.sum();
        min_margin = std::min(min_margin, bound);
        for (int d = -static_cast<int>(n); d <= static_cast<int>(n); ++d)
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                IndexSet on;
                for (std::size_t k = 0; k < n; ++k)
                    if (mask >> k & 1u) on.push_back(k);
                const double v = std::abs(wall_value({d, on}, mu));
                if (!(v > 0.0) || v < bound - 1e-12) ++wall_violations;
            }
    }

    double involution = 0.0;
    int image_violations = 0;
    double wall_transport = 0.0;
    int remark_violations = 0;
    double slope = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = static_cast<std::size_t>(s.integer(1, 6));
        const WeightVector mu = chamber_point(n);
        const IndexSet i = random_subset(n, true);
        const WeightVector image = phi_I(mu, i);
        const WeightVector back = phi_I(image, i);
        for (std::size_t k = 0; k < n; ++k) involution = std::max(involution, std::abs(back.mu[k] - mu.mu[k]));
        if (!chamber_membership(image, i)) ++image_violations;
        const IndexSet j = random_subset(n, false);
        const int d = s.integer(-static_cast<int>(n), static_cast<int>(n));
        wall_transport = std::max(wall_transport, std::abs(wall_value(phi_I_wall({d, j}, i, n), image) - wall_value({d, j}, mu)));
        slope = std::max(slope, std::abs(stab_value(1, d + 1, j, mu) - stab_value(1, d, j, mu) + 2.0));

        // degE = 1 and 2 degL = n + 1 needs n odd
        const std::size_t m = 2 * static_cast<std::size_t>(s.integer(0, 2)) + 1;
        const WeightVector nu = chamber_point(m);
        WeightVector any;
        for (std::size_t k = 0; k < m; ++k) any.mu.push_back(s.uniform(1e-6, 1.0 - 1e-6));
        for (const WeightVector* w : {&nu, static_cast<const WeightVector*>(&any)}) {
            const double v = stab_value(1, static_cast<int>(m + 1) / 2, {}, *w);
            if (!(v < 0.0) || std::abs(v - (w->sum() - static_cast<double>(m))) > 1e-12) ++remark_violations;
        }
    }
    return {"stability",
            {count_metric("chamber c meets a wall (|value| < 1 - sum mu)", wall_violations, "c is a chamber"),
             {"negated minimum of 1 - sum mu over samples", -min_margin, 0.0, "c is a chamber"},
             {"phi_I involution deviation", involution, 2.3e-16, "weight involution phi_I"},
             count_metric("phi_I(c) outside c_I", image_violations, "phi_I maps c onto the chamber c_I"),
             {"wall value transported by phi_I", wall_transport, 1e-12, "phi_I permutes the walls"},
             count_metric("bundles with 2 degL = n+1 not unstable", remark_violations, "instability value -n + sum mu"),
             {"slope of Stab in degL vs -2", slope, 1e-12, "parabolic stability value"}}};
}

SuiteResult suite_eigenvalue_calculus(std::uint64_t seed) {
    Sampler s(seed);
    double sum_dev = 0.0, inv_dev = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = static_cast<std::size_t>(s.integer(1, 6));
        const EigenData nu = s.eigen_data(n);
        IndexSet i;
        for (std::size_t k = 0; k < n; ++k)
            if (s.integer(0, 1)) i.push_back(k);
        if (i.size() % 2 == 1) i.pop_back();
        SignVector eps;
        for (std::size_t k = 0; k < n; ++k) eps.push_back(s.integer(0, 1) ? Sign::plus : Sign::minus);
        const EigenData once = elm_eigenvalues(nu, i, eps);
        const EigenData twice = elm_eigenvalues(once, i, eps);
        sum_dev = std::max(sum_dev, std::abs(once.fuchs_defect() - nu.fuchs_defect()));
        for (std::size_t k = 0; k < n; ++k)
            inv_dev = std::max({inv_dev, std::abs(twice.plus(k) - nu.plus(k)), std::abs(twice.minus(k) - nu.minus(k))});
    }

    int flag_errors = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2;
        EigenData nu = s.eigen_data(n);
        GenericityReport r;
        switch (trial % 4) {
            case 0:  // nu_1^+ = nu_1^-
                nu.pairs[0].second = nu.pairs[0].first;
                r = genericity_report(nu);
                if (r.distinct_pairs || r.strong_condition) ++flag_errors;
                break;
            case 1:  // nu_1^+ + nu_2^+ = 1
                nu.pairs[1].first = 1.0 - nu.pairs[0].first;
                r = genericity_report(nu);
                if (r.no_integer_sums) ++flag_errors;
                break;
            case 2:  // nu_1 = 1
                nu.pairs[0].second = nu.pairs[0].first - 1.0;
                r = genericity_report(nu);
                if (r.strong_condition) ++flag_errors;
                break;
            default:  // Fuchs relation broken
                nu.pairs[0].first += 0.25;
                r = genericity_report(nu);
                if (r.fuchs_ok) ++flag_errors;
        }
    }
    int generic_errors = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const GenericityReport r = genericity_report(s.eigen_data(static_cast<std::size_t>(s.integer(1, 5))));
        if (!(r.fuchs_ok && r.no_integer_sums && r.distinct_pairs && r.strong_condition)) ++generic_errors;
    }

    double zn = 0.0;
    int even_errors = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 * static_cast<std::size_t>(trial % 3) + 1;
        const EigenData nu = s.eigen_data(n);
        const DirectionPair p = zn_directions(nu);
        // with the Fuchs relation the first entry is (n-1)/2 - nu_1^+ - nu_1^-
        cplx second = 0.5 * static_cast<double>(n + 1);
        for (std::size_t j = 0; j < n; ++j) second += nu.minus(j);
        const Direction want{0.5 * static_cast<double>(n - 1) - nu.plus(0) - nu.minus(0), second};
        zn = std::max({zn, projective_distance(p.plus, Direction{1.0, 1.0}), projective_distance(p.minus, want)});
        if (n == 1) zn = std::max(zn, projective_distance(p.minus, Direction{1.0, 1.0 + nu.minus(0)}));
        try {
            zn_directions(s.eigen_data(n + 1));
            ++even_errors;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EvenN) ++even_errors;
        }
    }

    double lame = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const cplx v = trial == 0 ? cplx{0.5} : s.disc(3.0);
        if (is_integer(v, 1e-3)) continue;
        const auto theta = lame_theta(v);
        cplx fuchs{1.0};
        for (const auto& [p, m] : theta) fuchs += p + m;
        lame = std::max({lame, std::abs(theta[3].first + theta[3].second + 1.0), std::abs(fuchs)});
        if (trial == 0) lame = std::max({lame, std::abs(theta[3].first), std::abs(theta[3].second + 1.0)});
    }
    return {"eigenvalue-calculus",
            {{"elm changes the eigenvalue sum", sum_dev, 1e-12, "elementary transformation of eigenvalues"},
             {"elm applied twice deviation", inv_dev, 1e-12, "elementary transformation of eigenvalues"},
             count_metric("degenerate nu not flagged", flag_errors, "genericity conditions on the eigenvalues"),
             count_metric("generic nu flagged", generic_errors, "genericity conditions on the eigenvalues"),
             {"Z_n directions over t_1 vs closed form", zn, 1e-12, "directions over t_1 for the unstable locus Z_n"},
             count_metric("even n accepted by zn_directions", even_errors, "Z_n is empty for even n"),
             {"Lame eigenvalue relations", lame, 1e-12, "eigenvalues of the associated Painleve VI connection"}}};
}

namespace {

/// Every subset-sum by explicit set growth: a different enumeration from the bitmask walk.
bool brute_force_defined(const EigenData& nu) {
    std::vector<cplx> sums{cplx{}};
    for (const auto& [p, m] : nu.pairs) {
        std::vector<cplx> next;
        for (const cplx& s : sums) {
            next.push_back(s + p);
            next.push_back(s + m);
        }
        sums.swap(next);
    }
    return std::none_of(sums.begin(), sums.end(), [](cplx s) { return std::abs(s) <= 1e-8; });
}

}  // namespace

SuiteResult suite_apparent_map(std::uint64_t seed, int trials, const Tolerances& tol) {
    Sampler s(seed);
    int defined_mismatch = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(s.integer(1, 10));
        EigenData nu;
        for (std::size_t j = 0; j < n; ++j) nu.pairs.emplace_back(s.disc(1.0), s.disc(1.0));
        if (trial % 2 == 1) {
            // force one signed sum to vanish
            cplx rest{};
            for (std::size_t j = 1; j < n; ++j) rest += s.integer(0, 1) ? nu.plus(j) : nu.minus(j);
            (s.integer(0, 1) ? nu.pairs[0].first : nu.pairs[0].second) = -rest;
        }
        if (app_defined(nu) != brute_force_defined(nu)) ++defined_mismatch;
    }

    auto rank_case = [&](std::size_t n, std::size_t degenerate, int& mismatches, int& unstable) {
        const Curve c = s.curve();
        const Divisor d = s.divisor(c, n);
        const EigenData nu = s.eigen_data(n);
        const SectionS sec = section_s(c);
        std::vector<cplx> z;
        for (std::size_t j = 0; j < n; ++j) {
            const CurvePoint& t = d.point(j);
            z.push_back(j < degenerate ? sec.s1.eval(t.x, t.y) / sec.s2.eval(t.x, t.y) : s.disc(2.0));
        }
        try {
            const FiberRank r = fiber_rank_app(c, d, nu, z, app_samples(c, d));
            const int want = static_cast<int>(n - degenerate) + 1;
            if (r.matrix_rank != r.expected || r.expected != want) ++mismatches;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::RankUnstable) throw;
            ++unstable;
        }
    };
    int generic_mismatch = 0, degenerate_mismatch = 0, unstable = 0;
    for (int trial = 0; trial < trials; ++trial)
        rank_case(static_cast<std::size_t>(s.integer(1, 4)), 0, generic_mismatch, unstable);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = static_cast<std::size_t>(s.integer(1, 4));
        rank_case(n, 0, degenerate_mismatch, unstable);
        rank_case(n, 1, degenerate_mismatch, unstable);
        rank_case(n, n, degenerate_mismatch, unstable);
    }

    double linearity = 0.0;
    int zero_forms = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Curve c = s.curve();
        const Divisor d = s.divisor(c, static_cast<std::size_t>(s.integer(1, 4)));
        auto random_system = [&] {
            std::vector<Mat2> res;
            for (std::size_t j = 0; j < d.size(); ++j) res.push_back(s.trace_free(1.0));
            return build_system(c, d, res, s.annulus(0.5, 1.5));
        };
        const FuchsianSystem a = random_system(), b = random_system();
        const cplx alpha = s.disc(2.0), beta = s.disc(2.0);
        const auto samples = app_samples(c, d);
        const AppVector va = app_eval(a, samples), vb = app_eval(b, samples);
        const AppVector vc = app_eval(alpha * a + beta * b, samples);
        double scale = 0.0, dev = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const cplx want = alpha * va.values[i] + beta * vb.values[i];
            scale = std::max({scale, std::abs(alpha * va.values[i]), std::abs(beta * vb.values[i])});
            dev = std::max(dev, std::abs(vc.values[i] - want));
        }
        linearity = std::max(linearity, dev / scale);
        double biggest = 0.0;
        for (const cplx& v : va.values) biggest = std::max(biggest, std::abs(v));
        if (biggest <= 1e-8) ++zero_forms;
    }
    return {"apparent-map",
            {count_metric("app_defined disagrees with brute-force enumeration", defined_mismatch, "App is a morphism iff no signed sum vanishes"),
             count_metric("generic fibers with matrix_rank != expected = n+1", generic_mismatch, "fiber rank of pi_+ x App"),
             count_metric("degenerate fibers (0, 1, n directions) with wrong rank", degenerate_mismatch, "fiber rank of pi_+ x App"),
             count_metric("rank decisions too close to the threshold", unstable, "fiber rank of pi_+ x App"),
             {"linearity of app_eval", linearity, tol.linearity, "App form nabla(s) ^ s"},
             count_metric("connections with identically vanishing App form", zero_forms, "App is a morphism iff no signed sum vanishes")}};
}

namespace {

Polynomial random_polynomial(Sampler& s, int degree) {
    std::vector<cplx> c;
    for (int k = 0; k <= degree; ++k) c.push_back(s.disc(1.0));
    return Polynomial(c);
}

/// Poles kept `margin` away from every x in `avoid`.
FieldElement random_element(Sampler& s, const Curve& c, std::span<const cplx> avoid = {}, double margin = 0.0) {
    std::vector<cplx> roots;
    const int dr = s.integer(0, 2);
    while (roots.size() < static_cast<std::size_t>(dr)) {
        const cplx r = s.disc(2.0);
        if (std::none_of(avoid.begin(), avoid.end(), [&](cplx a) { return std::abs(r - a) < margin; })) roots.push_back(r);
    }
    return FieldElement(c.lambda(), random_polynomial(s, s.integer(0, 3)), random_polynomial(s, s.integer(0, 2)),
                        Polynomial::from_roots(roots));
}

}  // namespace

SuiteResult suite_algebra(std::uint64_t seed, const Tolerances& tol) {
    Sampler s(seed);
    double residue_sum = 0.0;
    int uncertified = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const Curve c = s.curve();
        const Divisor d = s.divisor(c, static_cast<std::size_t>(s.integer(1, 5)));
        const auto forms = basis_forms(c, d).all();
        std::vector<FieldElement> tested(forms);
        for (int k = 0; k < 5; ++k) {
            // over the common denominator, so no spurious factors reach the chart centers
            FieldElement combo = FieldElement::zero(c.lambda());
            for (const auto& f : forms) combo += f.over_denominator(basis_common_denominator(c, d)) * s.disc(1.0);
            tested.push_back(combo);
        }
        const auto cols = table_columns(c, d);
        for (const auto& f : tested) {
            const auto ord = f.order_at_infinity();
            if (ord && *ord < 0) {
                ++uncertified;
                continue;
            }
            cplx total{};
            for (const auto& p : cols) total += residue_of_form(f, c, p);
            residue_sum = std::max(residue_sum, std::abs(total));
        }
    }

    double derivation = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Curve c = s.curve();
        const FieldElement a = random_element(s, c), b = random_element(s, c);
        const FieldElement da = a.derivative_over_omega(), db = b.derivative_over_omega();
        const FieldElement lhs = (a * b).derivative_over_omega();
        std::vector<cplx> avoid;
        for (const auto& r : a.denominator().roots()) avoid.push_back(r);
        for (const auto& r : b.denominator().roots()) avoid.push_back(r);
        for (int k = 0; k < 5; ++k) {
            const CurvePoint p = sample_curve_point(c, s.rng(), avoid, 0.05);
            const cplx x = p.x, y = p.y;
            const cplx t1 = a.eval(x, y) * db.eval(x, y), t2 = b.eval(x, y) * da.eval(x, y);
            const double scale = std::max({std::abs(t1), std::abs(t2), 1e-300});
            derivation = std::max(derivation, std::abs(lhs.eval(x, y) - t1 - t2) / scale);
        }
    }

    double chart = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Curve c = s.curve();
        const Divisor d = s.divisor(c, static_cast<std::size_t>(s.integer(1, 3)));
        std::vector<FieldElement> tested = basis_forms(c, d).all();
        std::vector<CurvePoint> centers = table_columns(c, d);
        std::vector<cplx> xs;
        for (const auto& p : centers) xs.push_back(p.x);
        // the series converge up to the nearest pole or branch point, so keep those well outside |tau|
        centers.push_back(sample_curve_point(c, s.rng(), xs, 0.2));
        xs.push_back(centers.back().x);
        tested.push_back(random_element(s, c, xs, 0.3));
        for (const auto& center : centers) {
            const Chart ch = chart_at(c, center);
            const cplx tau = std::polar(1e-2, s.uniform(0.0, 2.0 * std::numbers::pi));
            const cplx x = ch.x_series.eval(tau), y = ch.y_series.eval(tau);
            for (const auto& f : tested) {
                cplx want;
                try {
                    want = f.eval(x, y);
                } catch (const Error&) {
                    continue;  // the random element may have a pole right here
                }
                chart = std::max(chart, std::abs(expand_function(f, ch).eval(tau) - want) / std::max(1.0, std::abs(want)));
            }
        }
    }
    return {"algebra",
            {{"sum of residues of basis forms and combinations", residue_sum, tol.residue, "residue theorem on the curve"},
             count_metric("forms with a pole at infinity", uncertified, "residue theorem on the curve"),
             {"Leibniz rule for d/omega", derivation, tol.derivation, "omega = dx/2y"},
             {"chart expansion vs direct evaluation at |tau| = 1e-2", chart, tol.chart, "local expansions in the coordinate y"}}};
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed, int trials, const Tolerances& tol) {
    // each suite gets its own stream so that changing one does not shift the others
    return {suite_residue_table(seed + 1, tol),
            suite_apparentness(seed + 2, trials, tol),
            suite_par(seed + 3, trials, tol),
            suite_transition(seed + 4, trials, tol),
            suite_symplectic(seed + 5, trials, tol),
            suite_stability(seed + 6),
            suite_eigenvalue_calculus(seed + 7),
            suite_apparent_map(seed + 8, std::max(1, trials / 2), tol),
            suite_algebra(seed + 9, tol)};
}

}  // namespace ellcon
