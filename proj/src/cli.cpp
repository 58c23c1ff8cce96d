#include "ellcon/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "ellcon/apparent.hpp"
#include "ellcon/error.hpp"
#include "ellcon/stability.hpp"
#include "ellcon/symplectic.hpp"

namespace ellcon::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double kWeierstrassMargin = 1e-6;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }
[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

cplx read_complex(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        parse_error(where + ": complex scalars are [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json write(cplx c) { return json::array({c.real(), c.imag()}); }

json write(const Mat2& m) {
    return json::array({json::array({write(m(0, 0)), write(m(0, 1))}), json::array({write(m(1, 0)), write(m(1, 1))})});
}

json write(const Direction& d) {
    const Direction n = d.normalized();
    return json::array({write(n.a), write(n.b)});
}

json write(const std::vector<cplx>& v) {
    json a = json::array();
    for (const cplx& c : v) a.push_back(write(c));
    return a;
}

json write(const FuchsianSystem& sys) {
    json b = json::array();
    for (const Mat2& m : sys.b) b.push_back(write(m));
    return json{{"A_phi0", write(sys.a_phi0)}, {"A_phi1", write(sys.a_phi1)}, {"A_omega", write(sys.a_omega)},
                {"B", b},                      {"scale", write(sys.scale)}};
}

json write(const ParPoint& pp) {
    json a = json::array();
    for (const auto& p : pp.pairs) a.push_back(json{{"plus", write(p.plus)}, {"minus", write(p.minus)}});
    return a;
}

json write(const EigenData& nu) {
    json a = json::array();
    for (const auto& [p, m] : nu.pairs) a.push_back(json::array({write(p), write(m)}));
    return a;
}

double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

Metric count(std::string name, int violations, std::string anchor) {
    return {std::move(name), static_cast<double>(violations), 0.0, std::move(anchor)};
}

/// Everything a command handler sees.
struct Context {
    const ProblemInstance* instance = nullptr;
    const Options* opts = nullptr;
    std::uint64_t seed = 0;
    Tolerances tol;
    Report* report = nullptr;

    const ProblemInstance& need_instance() const {
        if (instance == nullptr) invalid("command '" + report->command + "' needs a problem instance (--input)");
        return *instance;
    }
    const EigenData& need_nu() const {
        const ProblemInstance& p = need_instance();
        if (!p.nu) invalid("command '" + report->command + "' needs eigenvalue data 'nu'");
        return *p.nu;
    }
    /// Connection-level commands require the Fuchs relation.
    const EigenData& need_fuchs_nu() const {
        const EigenData& nu = need_nu();
        try {
            nu.require_fuchs();
        } catch (const Error& e) {
            invalid(std::string("nu must satisfy the Fuchs relation 1 + sum nu_j^+ + nu_j^- = 0 (") + e.what() + ")");
        }
        return nu;
    }
    int trials() const { return std::max(1, opts->trials); }
    void add(Metric m) const { report->metrics.push_back(std::move(m)); }
    json& artifacts() const { return report->artifacts; }
};

/// Trial 0 uses the reference point p_j^+ = (1:0), p_j^- = (0:1); later trials are seeded.
ParPoint trial_par_point(Sampler& s, std::size_t n, int trial) {
    if (trial > 0) return s.par_point(n);
    ParPoint pp;
    for (std::size_t j = 0; j < n; ++j) pp.pairs.push_back({Direction{1.0, 0.0}, Direction{0.0, 1.0}});
    return pp;
}

std::vector<cplx> random_vector(Sampler& s, std::size_t n, double lo, double hi) {
    std::vector<cplx> v;
    for (std::size_t j = 0; j < n; ++j) v.push_back(lo > 0.0 ? s.annulus(lo, hi) : s.disc(hi));
    return v;
}

void cmd_residue_table(const Context& c) {
    const ProblemInstance& p = c.need_instance();
    const Curve curve = p.curve();
    const Divisor d = p.divisor();
    const ResidueTable got = residue_table(curve, d);
    const auto [dr, dc] = residue_table_deviation(curve, d);
    c.add({"basis residues at w0, w1, wlambda, t_j", dr, c.tol.residue, "residue table of the one-form basis"});
    c.add({"basis constant terms at w0, w1, wlambda", dc, c.tol.residue, "constant terms of the one-form basis"});
    static const std::vector<std::string> rows{"omega", "phi0", "phi1"};
    json res = json::object(), con = json::object();
    for (std::size_t k = 0; k < got.residues.size(); ++k) {
        const std::string name = k < 3 ? rows[k] : "theta" + std::to_string(k - 2);
        res[name] = write(got.residues[k]);
        con[name] = write(std::vector<cplx>(got.constants[k].begin(), got.constants[k].begin() + 3));
    }
    c.artifacts()["columns"] = "w0, w1, wlambda, t_1..t_n";
    c.artifacts()["residues"] = res;
    c.artifacts()["constant_terms"] = con;
}

FuchsianSystem seeded_system(const Context& c, Sampler& s) {
    const ProblemInstance& p = c.need_instance();
    const Curve curve = p.curve();
    const Divisor d = p.divisor();
    std::vector<Mat2> res;
    if (p.nu) {
        // residues with the instance's exponents and seeded eigendirections
        const ParPoint pp = s.par_point(d.size());
        for (std::size_t j = 0; j < d.size(); ++j) res.push_back(residue_from_directions(p.nu->nu(j), pp.pairs[j]));
    } else {
        for (std::size_t j = 0; j < d.size(); ++j) res.push_back(s.trace_free(1.0));
    }
    return build_system(curve, d, res);
}

void report_apparentness(const Context& c, const FuchsianSystem& sys) {
    const auto defects = apparent_defects(sys);
    const std::string anchor = "apparent singularities imposed at w0, w1, wlambda";
    c.add({"eigenvalue defect of Res vs {1/2, -1/2}", defects[0], c.tol.apparent, anchor});
    c.add({"1/2-eigenspace defect vs (1:0), (1:1), (0:1)", defects[1], c.tol.apparent, anchor});
    c.add({"invariance of the 1/2-eigenspace by the constant part", defects[2], c.tol.apparent, anchor});
}

void cmd_build(const Context& c) {
    Sampler s(c.seed);
    const FuchsianSystem sys = seeded_system(c, s);
    report_apparentness(c, sys);
    double residues = 0.0;
    for (std::size_t j = 0; j < sys.divisor.size(); ++j)
        residues = std::max(residues, max_abs(local_expansion(sys, sys.divisor.point(j)).residue - sys.b[j]));
    c.add({"residue at t_j reproduces B_j", residues, c.tol.residue, "system determined by its residues"});
    c.add({"max |trace| of coefficient matrices", max_trace(sys), 1e-12, "sl2-valued Fuchsian system"});
    c.artifacts()["system"] = write(sys);
}

void cmd_check_apparent(const Context& c) {
    Sampler s(c.seed);
    const FuchsianSystem sys = seeded_system(c, s);
    report_apparentness(c, sys);
    static const char* names[] = {"w0", "w1", "wlambda"};
    json per = json::object();
    const auto ws = sys.curve.affine_weierstrass();
    for (std::size_t k = 0; k < 3; ++k) {
        const ApparentReport r = check_apparent(sys, ws[k]);
        per[names[k]] = json{{"eigenvalue_defect", r.eigenvalue_defect},
                             {"eigenspace_defect", r.eigenspace_defect},
                             {"invariance_defect", r.invariance_defect}};
    }
    c.artifacts()["defects"] = per;
    c.artifacts()["system"] = write(sys);
}

void cmd_par(const Context& c) {
    const ProblemInstance& p = c.need_instance();
    const EigenData& nu = c.need_fuchs_nu();
    const Curve curve = p.curve();
    const Divisor d = p.divisor();
    Sampler s(c.seed);
    double e1 = 0.0, e2 = 0.0;
    for (int trial = 0; trial < c.trials(); ++trial) {
        const ParPoint pp = trial_par_point(s, d.size(), trial);
        const auto [a, b] = par_roundtrip(curve, d, nu, pp);
        e1 = std::max(e1, a);
        e2 = std::max(e2, b);
        if (trial == 0) c.artifacts()["par"] = write(par(par_inverse(curve, d, nu, pp), nu));
    }
    c.add({"par o par_inverse projective error", e1, c.tol.par, "Par is an isomorphism onto S^n"});
    c.add({"par_inverse o par relative coefficient error", e2, c.tol.par_system, "Par is an isomorphism onto S^n"});
}

void cmd_par_inverse(const Context& c) {
    const ProblemInstance& p = c.need_instance();
    const EigenData& nu = c.need_fuchs_nu();
    Sampler s(c.seed);
    const ParPoint pp = s.par_point(p.points.size());
    const FuchsianSystem sys = par_inverse(p.curve(), p.divisor(), nu, pp);
    report_apparentness(c, sys);
    c.add({"par of the constructed system vs input point", projective_distance(par(sys, nu), pp), c.tol.par,
           "Par is an isomorphism onto S^n"});
    c.artifacts()["par_point"] = write(pp);
    c.artifacts()["system"] = write(sys);
}

void cmd_transition(const Context& c) {
    const EigenData& nu = c.need_fuchs_nu();
    const std::size_t n = nu.n();
    Sampler s(c.seed);
    double round = 0.0;
    for (int trial = 0; trial < c.trials(); ++trial) {
        const auto w = random_vector(s, n, 0.5, 2.0), f = random_vector(s, n, 0.0, 1.0);
        const ChartCoordinates zr = transition_map(nu, w, f);
        const ChartCoordinates back = transition_inverse(nu, zr.base, zr.fiber);
        for (std::size_t j = 0; j < n; ++j) round = std::max({round, rel(back.base[j], w[j]), rel(back.fiber[j], f[j])});
        if (trial == 0) c.artifacts()["sample"] = json{{"w", write(w)}, {"s", write(f)}, {"z", write(zr.base)}, {"r", write(zr.fiber)}};
    }
    c.add({"transition round trip", round, c.tol.lambda_matrix, "affine transition between the U_0 and U_inf trivializations"});
}

void cmd_splitting(const Context& c) {
    const ProblemInstance& p = c.need_instance();
    const EigenData& nu = c.need_fuchs_nu();
    const Curve curve = p.curve();
    const Divisor d = p.divisor();
    Sampler s(c.seed);
    SplittingReport worst;
    for (int trial = 0; trial < c.trials(); ++trial) {
        const SplittingReport r =
            splitting_check(curve, d, nu, random_vector(s, d.size(), 0.5, 2.0), random_vector(s, d.size(), 0.0, 1.0));
        worst.cocycle_deviation = std::max(worst.cocycle_deviation, r.cocycle_deviation);
        worst.chart_identity_deviation = std::max(worst.chart_identity_deviation, r.chart_identity_deviation);
        worst.higgs_deviation = std::max(worst.higgs_deviation, r.higgs_deviation);
    }
    c.add({"splitting cocycle deviation", worst.cocycle_deviation, c.tol.splitting, "splitting cocycle of nabla_inf and nabla_0"});
    c.add({"chart identity deviation", worst.chart_identity_deviation, c.tol.splitting,
           "affine transition between the U_0 and U_inf trivializations"});
    c.add({"Theta^inf = w^2 Theta^0(1/w) deviation", worst.higgs_deviation, c.tol.splitting,
           "splitting cocycle of nabla_inf and nabla_0"});
}

void cmd_lambda_matrix(const Context& c) {
    const EigenData& nu = c.need_fuchs_nu();
    Sampler s(c.seed);
    double dev = 0.0;
    for (int trial = 0; trial < c.trials(); ++trial) {
        const auto w = random_vector(s, nu.n(), 0.5, 2.0), f = random_vector(s, nu.n(), 0.0, 1.0);
        dev = std::max(dev, lambda_matrix_deviation(nu, w, f));
        if (trial == 0) {
            const Eigen::MatrixXcd m = lambda_transition_matrix(nu, w);
            json rows = json::array();
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                json row = json::array();
                for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(write(m(i, k)));
                rows.push_back(row);
            }
            c.artifacts()["w"] = write(w);
            c.artifacts()["matrix"] = rows;
        }
    }
    c.add({"lambda transition matrix vs transition map", dev, c.tol.lambda_matrix,
           "transition matrix of the lambda-connection bundle"});
}

void cmd_symplectic(const Context& c) {
    const std::string& sub = c.opts->sub;
    Sampler s(c.seed);
    if (sub == "serre") {
        const ProblemInstance& p = c.need_instance();
        const Curve curve = p.curve();
        const Divisor d = p.divisor();
        double dev = 0.0;
        for (int trial = 0; trial < c.trials(); ++trial)
            dev = std::max(dev, serre_matrix_deviation(curve, d, random_vector(s, d.size(), 0.0, 2.0)));
        c.add({"Serre pairing matrix vs identity", dev, c.tol.serre, "Serre pairing residues form the Kronecker symbol"});
        return;
    }
    const EigenData& nu = c.need_fuchs_nu();
    const std::size_t n = nu.n();
    auto tangent = [&](CoordTag tag) {
        return TangentVector{tag, random_vector(s, n, 0.0, 1.0), random_vector(s, n, 0.0, 1.0)};
    };
    double dev = 0.0;
    for (int trial = 0; trial < c.trials(); ++trial) {
        if (sub == "darboux") {
            const ChartPoint pt{CoordTag::uinf, random_vector(s, n, 0.5, 2.0), random_vector(s, n, 0.0, 1.0)};
            const TangentVector t1 = tangent(CoordTag::uinf), t2 = tangent(CoordTag::uinf);
            const cplx want = two_form_eval(TwoFormTag::darboux_uinf, nullptr, pt, t1, t2);
            dev = std::max(dev, rel(pullback_two_form(transition_chart_map(nu), pt, t1, t2, TwoFormTag::darboux_u0, nullptr).value, want));
        } else if (sub == "omega-nu") {
            const ChartPoint pt{CoordTag::u0, random_vector(s, n, 0.0, 2.0), random_vector(s, n, 0.5, 2.0)};
            const TangentVector t1 = tangent(CoordTag::u0), t2 = tangent(CoordTag::u0);
            const cplx want = two_form_eval(TwoFormTag::darboux_u0, nullptr, pt, t1, t2);
            dev = std::max(dev, rel(pullback_two_form(substitution_map(nu), pt, t1, t2, TwoFormTag::omega_nu, &nu).value, want));
        } else if (sub == "moebius") {
            std::vector<std::size_t> sigma(n);
            std::iota(sigma.begin(), sigma.end(), std::size_t{0});
            std::shuffle(sigma.begin(), sigma.end(), s.rng());
            std::vector<Moebius> maps;
            while (maps.size() < n) {
                const Moebius m{s.disc(1.0), s.disc(1.0), s.disc(1.0), s.disc(1.0)};
                if (std::abs(m.a * m.d - m.b * m.c) >= 0.2) maps.push_back(m);
            }
            ChartPoint pt{CoordTag::sn, {}, {}};
            for (std::size_t j = 0; j < n; ++j) {
                const Moebius& m = maps[static_cast<std::size_t>(std::find(sigma.begin(), sigma.end(), j) - sigma.begin())];
                for (;;) {
                    const cplx z = s.disc(1.5), zeta = s.disc(1.5);
                    if (std::abs(z - zeta) >= 0.3 && std::abs(m.c * z + m.d) >= 0.2 && std::abs(m.c * zeta + m.d) >= 0.2) {
                        pt.base.push_back(z);
                        pt.fiber.push_back(zeta);
                        break;
                    }
                }
            }
            const TangentVector t1 = tangent(CoordTag::sn), t2 = tangent(CoordTag::sn);
            const auto [before, after] = mobius_transport(sigma, maps, pt, t1, t2, nu);
            dev = std::max(dev, rel(after, before));
        } else {
            invalid("symplectic needs --sub darboux | omega-nu | serre | moebius");
        }
    }
    static const std::map<std::string, std::pair<std::string, std::string>> labels{
        {"darboux", {"transition pullback of sum dz^dr vs -sum dw^ds", "Darboux coordinates on U_0 and U_inf"}},
        {"omega-nu", {"substitution pullback of omega_nu vs sum dz^dr", "omega_nu after the substitution zeta = z - nu/r"}},
        {"moebius", {"Moebius transport of omega_nu", "Moebius invariance of omega_nu"}}};
    const auto& [name, anchor] = labels.at(sub);
    c.add({name, dev, c.tol.symplectic, anchor});
}

/// Uniform point of the open simplex {mu_j > 0, sum < 1}.
WeightVector chamber_point(Sampler& s, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> g(n + 1);
    double total = 0.0;
    for (double& x : g) total += (x = e(s.rng()) + 1e-9);
    WeightVector mu;
    for (std::size_t k = 0; k < n; ++k) mu.mu.push_back(g[k] / total);
    return mu;
}

IndexSet all_indices_mask(unsigned mask, std::size_t n) {
    IndexSet on;
    for (std::size_t k = 0; k < n; ++k)
        if (mask >> k & 1u) on.push_back(k);
    return on;
}

void cmd_stability(const Context& c) {
    const std::string& sub = c.opts->sub;
    const std::size_t n = c.instance ? c.instance->points.size() : 3;
    if (n > 16 && sub != "elm" && sub != "genericity" && sub != "zn" && sub != "lame")
        throw Error(ErrorCode::ExponentialBlowup, "wall enumeration over 2^n subsets refused for n > 16");
    Sampler s(c.seed);
    if (sub == "stab") {
        const WeightVector mu = chamber_point(s, n);
        json values = json::array();
        double slope = 0.0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            const IndexSet on = all_indices_mask(mask, n);
            values.push_back(json{{"on", on}, {"degL_0", stab_value(1, 0, on, mu)}});
            slope = std::max(slope, std::abs(stab_value(1, 1, on, mu) - stab_value(1, 0, on, mu) + 2.0));
        }
        c.add({"slope of Stab in degL vs -2", slope, 1e-12, "parabolic stability value"});
        if (n % 2 == 1) {
            const double v = stab_value(1, static_cast<int>(n + 1) / 2, {}, mu);
            c.add({"instability value vs -n + sum mu", std::abs(v - (mu.sum() - static_cast<double>(n))), 1e-12,
                   "instability value -n + sum mu"});
            c.add(count("2 degL = n+1 bundle not unstable", v < 0.0 ? 0 : 1, "instability value -n + sum mu"));
        }
        c.artifacts()["mu"] = mu.mu;
        c.artifacts()["stab_degE_1"] = values;
    } else if (sub == "chamber") {
        int violations = 0;
        for (int trial = 0; trial < c.trials(); ++trial) {
            const WeightVector mu = chamber_point(s, n);
            for (int d = -static_cast<int>(n); d <= static_cast<int>(n); ++d)
                for (unsigned mask = 0; mask < (1u << n); ++mask) {
                    const double v = std::abs(wall_value({d, all_indices_mask(mask, n)}, mu));
                    if (!(v > 0.0) || v < 1.0 - mu.sum() - 1e-12) ++violations;
                }
        }
        c.add(count("chamber c meets a wall (|value| < 1 - sum mu)", violations, "c is a chamber"));
    } else if (sub == "phi") {
        double involution = 0.0;
        int image = 0;
        for (int trial = 0; trial < c.trials(); ++trial) {
            const WeightVector mu = chamber_point(s, n);
            IndexSet i;
            for (std::size_t k = 0; k < n; ++k)
                if (s.integer(0, 1)) i.push_back(k);
            if (i.size() % 2 == 1) i.pop_back();
            const WeightVector m1 = phi_I(mu, i), m2 = phi_I(m1, i);
            for (std::size_t k = 0; k < n; ++k) involution = std::max(involution, std::abs(m2.mu[k] - mu.mu[k]));
            if (!chamber_membership(m1, i)) ++image;
        }
        c.add({"phi_I involution deviation", involution, 2.3e-16, "weight involution phi_I"});
        c.add(count("phi_I(c) outside c_I", image, "phi_I maps c onto the chamber c_I"));
    } else if (sub == "elm") {
        const EigenData& nu = c.need_nu();
        double sum = 0.0, inv = 0.0;
        json table = json::array();
        for (unsigned mask = 0; mask < (1u << std::min<std::size_t>(nu.n(), 12)); ++mask) {
            const IndexSet i = all_indices_mask(mask, nu.n());
            if (i.size() % 2 == 1) continue;
            for (Sign e : {Sign::plus, Sign::minus}) {
                const SignVector eps(nu.n(), e);
                const EigenData once = elm_eigenvalues(nu, i, eps), twice = elm_eigenvalues(once, i, eps);
                sum = std::max(sum, std::abs(once.fuchs_defect() - nu.fuchs_defect()));
                for (std::size_t k = 0; k < nu.n(); ++k)
                    inv = std::max({inv, std::abs(twice.plus(k) - nu.plus(k)), std::abs(twice.minus(k) - nu.minus(k))});
                if (e == Sign::plus) table.push_back(json{{"I", i}, {"nu", write(once)}});
            }
        }
        c.add({"elm changes the eigenvalue sum", sum, 1e-12, "elementary transformation of eigenvalues"});
        c.add({"elm applied twice deviation", inv, 1e-12, "elementary transformation of eigenvalues"});
        c.artifacts()["elm_plus"] = table;
    } else if (sub == "genericity") {
        const GenericityReport r = genericity_report(c.need_nu());
        const std::string anchor = "genericity conditions on the eigenvalues";
        c.add(count("Fuchs relation fails", r.fuchs_ok ? 0 : 1, anchor));
        c.add(count("some signed sum is an integer", r.no_integer_sums ? 0 : 1, anchor));
        c.add(count("some nu_j^+ = nu_j^-", r.distinct_pairs ? 0 : 1, anchor));
        c.add(count("strong genericity fails", r.strong_condition ? 0 : 1, anchor));
    } else if (sub == "zn") {
        const EigenData& nu = c.need_fuchs_nu();
        const DirectionPair p = zn_directions(nu);
        cplx second = 0.5 * static_cast<double>(nu.n() + 1);
        for (std::size_t j = 0; j < nu.n(); ++j) second += nu.minus(j);
        const Direction want{0.5 * static_cast<double>(nu.n() - 1) - nu.plus(0) - nu.minus(0), second};
        const std::string anchor = "directions over t_1 for the unstable locus Z_n";
        c.add({"p_1^+ vs (1:1)", projective_distance(p.plus, Direction{1.0, 1.0}), 1e-12, anchor});
        c.add({"p_1^- vs closed form", projective_distance(p.minus, want), 1e-12, anchor});
        c.artifacts()["p_plus"] = write(p.plus);
        c.artifacts()["p_minus"] = write(p.minus);
    } else if (sub == "lame") {
        const cplx v = c.need_nu().plus(0);
        const auto theta = lame_theta(v);
        cplx fuchs{1.0};
        json out = json::array();
        for (const auto& [a, b] : theta) {
            fuchs += a + b;
            out.push_back(json::array({write(a), write(b)}));
        }
        c.add({"Fuchs relation of the Painleve VI exponents", std::abs(fuchs), 1e-12,
               "eigenvalues of the associated Painleve VI connection"});
        c.artifacts()["theta"] = out;
    } else {
        invalid("stability needs --sub stab | chamber | phi | elm | genericity | zn | lame");
    }
}

void cmd_app(const Context& c) {
    const std::string& sub = c.opts->sub;
    if (sub == "defined") {
        const EigenData& nu = c.need_nu();
        const bool defined = app_defined(nu);
        cplx closest{};
        double best = INFINITY;
        for_each_sign_sum(nu, [&](cplx sum) {
            if (std::abs(sum) < best) best = std::abs(sum), closest = sum;
        });
        c.add(count("app_defined disagrees with the smallest signed sum", defined == (best > 1e-8) ? 0 : 1,
                    "App is a morphism iff no signed sum vanishes"));
        c.artifacts()["defined"] = defined;
        c.artifacts()["smallest_signed_sum"] = write(closest);
        return;
    }
    const ProblemInstance& p = c.need_instance();
    const EigenData& nu = c.need_fuchs_nu();
    const Curve curve = p.curve();
    const Divisor d = p.divisor();
    Sampler s(c.seed);
    if (sub == "eval") {
        if (!app_defined(nu)) invalid("App is undefined: some signed sum of nu vanishes");
        const FuchsianSystem sys = par_inverse(curve, d, nu, s.par_point(d.size()));
        const auto samples = app_samples(curve, d);
        const AppVector v = app_eval(sys, samples);
        const cplx alpha = s.annulus(0.5, 2.0);
        const AppVector w = app_eval(alpha * sys, samples);
        double dev = 0.0, big = 0.0;
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            dev = std::max(dev, std::abs(w.values[i] - alpha * v.values[i]));
            big = std::max(big, std::abs(alpha * v.values[i]));
        }
        c.add({"linearity of app_eval", dev / std::max(big, 1e-300), c.tol.linearity, "App form nabla(s) ^ s"});
        // only the projective class is meaningful
        std::vector<cplx> normalized = v.values;
        const auto top = *std::max_element(v.values.begin(), v.values.end(),
                                           [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
        for (cplx& x : normalized) x /= top;
        c.artifacts()["app_projective"] = write(normalized);
    } else if (sub == "fiber-rank") {
        const FiberRank r = fiber_rank_app(curve, d, nu, random_vector(s, d.size(), 0.0, 2.0), app_samples(curve, d));
        c.add({"|matrix_rank - expected|", static_cast<double>(std::abs(r.matrix_rank - r.expected)), 0.0,
               "fiber rank of pi_+ x App"});
        c.artifacts()["matrix_rank"] = r.matrix_rank;
        c.artifacts()["expected"] = r.expected;
        c.artifacts()["singular_values"] = r.singular_values;
    } else {
        invalid("app needs --sub defined | eval | fiber-rank");
    }
}

void cmd_suite(const Context& c) {
    json suites = json::array();
    for (const SuiteResult& r : run_all_suites(c.seed, c.trials(), c.tol)) {
        for (const Metric& m : r.metrics) c.add({r.name + ": " + m.name, m.value, m.tolerance, m.anchor});
        suites.push_back(json{{"name", r.name}, {"status", r.passed() ? "pass" : "fail"}});
    }
    c.artifacts()["suites"] = suites;
}

using Handler = std::function<void(const Context&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table{
        {"residue-table", cmd_residue_table}, {"build", cmd_build},
        {"check-apparent", cmd_check_apparent}, {"par", cmd_par},
        {"par-roundtrip", cmd_par}, {"par-inverse", cmd_par_inverse},
        {"transition", cmd_transition}, {"splitting", cmd_splitting},
        {"lambda-matrix", cmd_lambda_matrix}, {"symplectic", cmd_symplectic},
        {"stability", cmd_stability}, {"app", cmd_app},
        {"suite", cmd_suite}};
    return table;
}

json echo_instance(const ProblemInstance& p) {
    json pts = json::array();
    for (const auto& q : p.points) pts.push_back(json{{"x", write(q.x)}, {"y", write(q.y)}});
    json j{{"lambda", write(p.lambda)}, {"points", pts}};
    if (p.nu) j["nu"] = write(*p.nu);
    return j;
}

std::string status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        default: return "error";
    }
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

}  // namespace

ProblemInstance parse_instance(std::string_view text) {
    const nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) parse_error("input is not valid JSON");
    if (!doc.is_object()) parse_error("input must be a JSON object");
    static const std::set<std::string> known{"lambda", "points", "nu", "seed", "tolerances"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key)) parse_error("unknown field '" + key + "'");
    if (!doc.contains("lambda")) parse_error("missing field 'lambda'");

    ProblemInstance p;
    p.lambda = read_complex(doc["lambda"], "lambda");
    const Curve curve = make_curve(p.lambda);

    if (doc.contains("points")) {
        if (!doc["points"].is_array()) parse_error("points: expected a list");
        for (std::size_t k = 0; k < doc["points"].size(); ++k) {
            const auto& q = doc["points"][k];
            const std::string where = "points[" + std::to_string(k) + "]";
            if (!q.is_object() || q.size() != 2 || !q.contains("x") || !q.contains("y"))
                parse_error(where + ": expected {x: [re, im], y: [re, im]}");
            const CurvePoint pt = CurvePoint::affine(read_complex(q["x"], where + ".x"), read_complex(q["y"], where + ".y"));
            if (!curve.contains(pt)) invalid(where + " is not on y^2 = x(x-1)(x-lambda)");
            for (cplx a : {cplx{0.0}, cplx{1.0}, p.lambda})
                if (std::abs(pt.x - a) < kWeierstrassMargin)
                    invalid(where + " lies within 1e-6 of a Weierstrass x-coordinate (D + w0 + w1 + wlambda must be reduced)");
            for (const auto& other : p.points)
                if (std::abs(other.x - pt.x) < kWeierstrassMargin && std::abs(other.y - pt.y) < kWeierstrassMargin)
                    invalid(where + " repeats an earlier point (D must be reduced)");
            p.points.push_back(pt);
        }
    }
    if (doc.contains("nu")) {
        if (!doc["nu"].is_array()) parse_error("nu: expected a list of pairs");
        EigenData nu;
        for (std::size_t k = 0; k < doc["nu"].size(); ++k) {
            const auto& pair = doc["nu"][k];
            const std::string where = "nu[" + std::to_string(k) + "]";
            if (!pair.is_array() || pair.size() != 2) parse_error(where + ": expected [[re, im], [re, im]]");
            nu.pairs.emplace_back(read_complex(pair[0], where + "[0]"), read_complex(pair[1], where + "[1]"));
        }
        if (nu.n() != p.points.size()) invalid("nu must have one pair per point");
        p.nu = nu;
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<std::int64_t>() >= 0))
            parse_error("seed: expected a non-negative integer");
        p.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("tolerances")) {
        if (!doc["tolerances"].is_object()) parse_error("tolerances: expected a map of name to number");
        for (const auto& [key, value] : doc["tolerances"].items()) {
            if (!value.is_number()) parse_error("tolerances." + key + ": expected a number");
            p.tolerances.set(key, value.get<double>());
        }
    }
    // same checks the library applies, so a bad divisor fails here rather than mid-command
    if (!p.points.empty()) validate_polar_divisor(curve, p.divisor());
    return p;
}

const std::vector<std::string>& commands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, h] : handlers()) v.push_back(k);
        return v;
    }();
    return names;
}

Report error_report(const std::string& command, const std::string& sub, const std::string& message) {
    Report r;
    r.command = command;
    r.sub = sub;
    r.status = Status::error;
    r.error = message;
    return r;
}

Report execute(const std::string& command, const std::optional<ProblemInstance>& instance, const Options& opts) {
    Report report;
    report.command = command;
    report.sub = opts.sub;
    try {
        const auto it = handlers().find(command);
        if (it == handlers().end()) invalid("unknown command '" + command + "'");
        Context ctx;
        ctx.instance = instance ? &*instance : nullptr;
        ctx.opts = &opts;
        ctx.seed = opts.seed ? *opts.seed : (instance ? instance->seed : 0);
        ctx.tol = instance ? instance->tolerances : Tolerances{};
        for (const auto& [name, value] : opts.tolerances) ctx.tol.set(name, value);
        ctx.report = &report;
        if (instance) report.artifacts["instance"] = echo_instance(*instance);
        report.artifacts["seed"] = ctx.seed;
        it->second(ctx);
        report.status = std::all_of(report.metrics.begin(), report.metrics.end(), [](const Metric& m) { return m.passed(); })
                            ? Status::pass
                            : Status::fail;
    } catch (const std::exception& e) {
        report.status = Status::error;
        report.error = e.what();
    }
    return report;
}

std::string to_json(const Report& report, bool timestamp) {
    json metrics = json::array();
    for (const Metric& m : report.metrics)
        metrics.push_back(json{{"name", m.name},
                               {"value", m.value},
                               {"tolerance", m.tolerance},
                               {"passed", m.passed()},
                               {"anchor", m.anchor}});
    json j{{"command", report.command}};
    if (!report.sub.empty()) j["sub"] = report.sub;
    j["status"] = status_name(report.status);
    j["metrics"] = metrics;
    j["artifacts"] = report.artifacts;
    if (report.status == Status::error) j["error"] = report.error;
    if (timestamp) j["timestamp"] = utc_now();
    return j.dump(2);
}

std::string summary(const Report& report) {
    std::ostringstream out;
    out << std::setprecision(3);
    for (const Metric& m : report.metrics) {
        out << (m.passed() ? "  ok   " : "  FAIL ") << m.name << ": " << m.value << " (tol " << m.tolerance << ")";
        if (!m.passed()) out << "  [" << m.anchor << "]";
        out << '\n';
    }
    out << report.command << (report.sub.empty() ? "" : " " + report.sub) << ": " << status_name(report.status);
    if (report.status == Status::error) out << ": " << report.error;
    out << '\n';
    return out.str();
}

int exit_code(const Report& report) {
    switch (report.status) {
        case Status::pass: return 0;
        case Status::fail: return 1;
        default: return 2;
    }
}

}  // namespace ellcon::cli
