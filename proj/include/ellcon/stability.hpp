#pragma once

#include <cstddef>
#include <vector>

#include "ellcon/fuchs.hpp"
#include "ellcon/linalg.hpp"

namespace ellcon {

/// Parabolic weights, each strictly inside (0, 1).
struct WeightVector {
    std::vector<double> mu;

    std::size_t n() const noexcept { return mu.size(); }
    double sum() const;
    /// Throws ValidationError unless 1e-12 < mu_k < 1 - 1e-12.
    void validate() const;
};

/// Sorted, duplicate-free 0-based subset of {0..n-1}.
using IndexSet = std::vector<std::size_t>;

IndexSet make_index_set(std::vector<std::size_t> indices, std::size_t n);
bool contains(const IndexSet& s, std::size_t k);

/// Wall H(d, I): destabilizing subbundle of degree d passing through the directions in I.
struct WallSpec {
    int d = 0;
    IndexSet on;
};

enum class Sign { plus, minus };
using SignVector = std::vector<Sign>;

/// degE - 2 degL + sum_{k not in onL} mu_k - sum_{k in onL} mu_k
double stab_value(int deg_e, int deg_l, const IndexSet& on_l, const WeightVector& mu);

/// Stab of the wall's subbundle in a bundle of degree 1.
double wall_value(const WallSpec& wall, const WeightVector& mu);

/// Strict inequality sum_{not I} mu - sum_I mu + |I| < 1 with margin 1e-12. I empty is the chamber c.
bool chamber_membership(const WeightVector& mu, const IndexSet& i);
/// 1 - (sum_{not I} mu - sum_I mu + |I|); positive inside the chamber.
double chamber_margin(const WeightVector& mu, const IndexSet& i);

/// mu_i -> 1 - mu_i for i in I.
WeightVector phi_I(const WeightVector& mu, const IndexSet& i);

/// Image wall under phi_I: the wall value of the image at phi_I(mu) equals the original at mu.
WallSpec phi_I_wall(const WallSpec& wall, const IndexSet& i, std::size_t n);

/// Eigenvalues after the elementary transformation elm_I centered on the eps directions.
EigenData elm_eigenvalues(const EigenData& nu, const IndexSet& i, const SignVector& eps);

struct GenericityReport {
    bool fuchs_ok = false;
    bool no_integer_sums = false;
    bool distinct_pairs = false;
    bool strong_condition = false;
};

constexpr double kIntegerTolerance = 1e-8;
constexpr std::size_t kMaxSignEnumeration = 20;

/// |Im c| <= tol and |Re c - round(Re c)| <= tol
bool is_integer(cplx c, double tol = kIntegerTolerance);

/// Calls f(sum) for each of the 2^n sign choices sum_j nu_j^{eps_j}; ExponentialBlowup past n = 20.
template <class F>
void for_each_sign_sum(const EigenData& nu, F&& f);

GenericityReport genericity_report(const EigenData& nu);

struct DirectionPair {
    Direction plus;
    Direction minus;
};

/// Closed-form directions over t_1 for the unstable configuration Z_n (n odd).
DirectionPair zn_directions(const EigenData& nu);

/// Eigenvalue tuple (+-1/4, +-1/4, +-1/4, theta+-) of the associated Painleve VI data.
std::vector<std::pair<cplx, cplx>> lame_theta(cplx nu_plus);

// --- implementation of the template

void throw_exponential_blowup(std::size_t n);

template <class F>
void for_each_sign_sum(const EigenData& nu, F&& f) {
    const std::size_t n = nu.n();
    if (n > kMaxSignEnumeration) throw_exponential_blowup(n);
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        cplx s{};
        for (std::size_t j = 0; j < n; ++j) s += (mask >> j) & 1ul ? nu.minus(j) : nu.plus(j);
        f(s);
    }
}

}  // namespace ellcon
