#include "ellcon/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ellcon/error.hpp"

namespace ellcon {

namespace {

constexpr double kWeightMargin = 1e-12;

void require_even(const IndexSet& i) {
    if (i.size() % 2 != 0) throw Error(ErrorCode::OddCardinality, "|I| = " + std::to_string(i.size()) + " is odd");
}

}  // namespace

double WeightVector::sum() const { return std::accumulate(mu.begin(), mu.end(), 0.0); }

void WeightVector::validate() const {
    for (std::size_t k = 0; k < mu.size(); ++k)
        if (!(mu[k] > kWeightMargin && mu[k] < 1.0 - kWeightMargin))
            throw Error(ErrorCode::ValidationError, "weight mu_" + std::to_string(k + 1) + " outside (0,1)");
}

IndexSet make_index_set(std::vector<std::size_t> indices, std::size_t n) {
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw Error(ErrorCode::ValidationError, "repeated index in subset");
    if (!indices.empty() && indices.back() >= n) throw Error(ErrorCode::ValidationError, "subset index out of range");
    return indices;
}

bool contains(const IndexSet& s, std::size_t k) { return std::binary_search(s.begin(), s.end(), k); }

double stab_value(int deg_e, int deg_l, const IndexSet& on_l, const WeightVector& mu) {
    double v = static_cast<double>(deg_e) - 2.0 * static_cast<double>(deg_l);
    for (std::size_t k = 0; k < mu.n(); ++k) v += contains(on_l, k) ? -mu.mu[k] : mu.mu[k];
    return v;
}

double wall_value(const WallSpec& wall, const WeightVector& mu) { return stab_value(1, wall.d, wall.on, mu); }

double chamber_margin(const WeightVector& mu, const IndexSet& i) {
    require_even(i);
    double s = static_cast<double>(i.size());
    for (std::size_t k = 0; k < mu.n(); ++k) s += contains(i, k) ? -mu.mu[k] : mu.mu[k];
    return 1.0 - s;
}

bool chamber_membership(const WeightVector& mu, const IndexSet& i) { return chamber_margin(mu, i) > kWeightMargin; }

WeightVector phi_I(const WeightVector& mu, const IndexSet& i) {
    require_even(i);
    WeightVector out = mu;
    for (std::size_t k : i) out.mu.at(k) = 1.0 - mu.mu.at(k);
    return out;
}

WallSpec phi_I_wall(const WallSpec& wall, const IndexSet& i, std::size_t n) {
    require_even(i);
    // i in I and J: -mu_i becomes +(1 - mu_i), a shift of +1; i in I \ J: +mu_i becomes -(1 - mu_i), a shift of -1
    IndexSet sym;
    int in_both = 0, only_i = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const bool a = contains(i, k), b = contains(wall.on, k);
        if (a && b) ++in_both;
        if (a && !b) ++only_i;
        if (a != b) sym.push_back(k);
    }
    return {wall.d + (in_both - only_i) / 2, sym};
}

EigenData elm_eigenvalues(const EigenData& nu, const IndexSet& i, const SignVector& eps) {
    require_even(i);
    if (eps.size() != nu.n()) throw Error(ErrorCode::ValidationError, "sign vector length differs from n");
    EigenData out = nu;
    for (std::size_t k : i) {
        auto& [p, m] = out.pairs.at(k);
        const cplx np = nu.plus(k), nm = nu.minus(k);
        if (eps[k] == Sign::plus) {
            m = np - 0.5;
            p = nm + 0.5;
        } else {
            p = nm - 0.5;
            m = np + 0.5;
        }
    }
    return out;
}

bool is_integer(cplx c, double tol) {
    return std::abs(c.imag()) <= tol && std::abs(c.real() - std::round(c.real())) <= tol;
}

void throw_exponential_blowup(std::size_t n) {
    throw Error(ErrorCode::ExponentialBlowup, "sign enumeration refused for n = " + std::to_string(n) + " > 20");
}

GenericityReport genericity_report(const EigenData& nu) {
    GenericityReport r;
    r.fuchs_ok = std::abs(nu.fuchs_defect()) <= 1e-9;
    r.no_integer_sums = true;
    for_each_sign_sum(nu, [&](cplx s) {
        if (is_integer(s)) r.no_integer_sums = false;
    });
    r.distinct_pairs = true;
    r.strong_condition = true;
    for (std::size_t k = 0; k < nu.n(); ++k) {
        const cplx v = nu.nu(k);
        if (std::abs(v) <= kIntegerTolerance) r.distinct_pairs = false;
        if (std::abs(v) <= kIntegerTolerance || std::abs(v - 1.0) <= kIntegerTolerance || std::abs(v + 1.0) <= kIntegerTolerance)
            r.strong_condition = false;
    }
    return r;
}

DirectionPair zn_directions(const EigenData& nu) {
    const std::size_t n = nu.n();
    if (n % 2 == 0) throw Error(ErrorCode::EvenN, "Z_n is empty for even n = " + std::to_string(n));
    nu.require_fuchs();
    const cplx half = 0.5 * static_cast<double>(n + 1);
    cplx first = half, second = half;
    for (std::size_t j = 0; j < n; ++j) {
        if (j >= 1) first += nu.minus(j) + nu.plus(j);
        second += nu.minus(j);
    }
    return {{1.0, 1.0}, {first, second}};
}

std::vector<std::pair<cplx, cplx>> lame_theta(cplx nu_plus) {
    if (is_integer(nu_plus)) throw Error(ErrorCode::IntegerNu, "nu must not be an integer");
    const cplx tp = 0.5 * nu_plus - 0.25;
    return {{0.25, -0.25}, {0.25, -0.25}, {0.25, -0.25}, {tp, -tp - 1.0}};
}

}  // namespace ellcon
