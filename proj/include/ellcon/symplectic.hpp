#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ellcon/curve.hpp"
#include "ellcon/fuchs.hpp"

namespace ellcon {

/// Coordinate systems: (z, r) on U_0, (w, s) on U_inf, (z, zeta) on S^n.
enum class CoordTag { u0, uinf, sn };

struct ChartPoint {
    CoordTag tag = CoordTag::u0;
    std::vector<cplx> base;
    std::vector<cplx> fiber;

    std::size_t n() const noexcept { return base.size(); }
};

struct TangentVector {
    CoordTag tag = CoordTag::u0;
    std::vector<cplx> d_base;
    std::vector<cplx> d_fiber;
};

enum class TwoFormTag { darboux_u0, darboux_uinf, omega_nu };

CoordTag coordinates_of(TwoFormTag form);

/// sum_j weight_j (d1 base_j d2 fiber_j - d2 base_j d1 fiber_j) with weight 1, -1, or nu_j / (z_j - zeta_j)^2.
/// `nu` is only read for omega_nu.
cplx two_form_eval(TwoFormTag form, const EigenData* nu, const ChartPoint& pt, const TangentVector& t1,
                   const TangentVector& t2);

using ChartMap = std::function<ChartPoint(const ChartPoint&)>;

/// (w, s) -> (z, r) = (1/w, w^2 s + nu w)
ChartMap transition_chart_map(const EigenData& nu);
/// (z, r) -> (z, zeta) = (z, z - nu / r)
ChartMap substitution_map(const EigenData& nu);
ChartMap identity_map();

struct PullbackResult {
    cplx value;
    /// |value(h) - value(h/2)| / max(1, |value(h/2)|)
    double fd_discrepancy = 0.0;
};

constexpr double kDefaultFdStep = 1e-5;

/// target_form at map(pt) on central-difference pushforwards, Richardson-extrapolated from steps h and h/2.
/// Throws FDInconsistent when the two steps disagree beyond 1e-4 relative.
PullbackResult pullback_two_form(const ChartMap& map, const ChartPoint& pt, const TangentVector& t1,
                                 const TangentVector& t2, TwoFormTag target_form, const EigenData* nu,
                                 double fd_step = kDefaultFdStep);

/// -z_k phi0 + phi1 + (y_k / x_k) omega + theta_k, divided by omega.
FieldElement serre_pairing_form(const Curve& curve, const Divisor& d, std::size_t k, const std::vector<cplx>& z);

/// Res_{t_j} of serre_pairing_form(k); the Kronecker symbol.
cplx serre_pairing_residue(const Curve& curve, const Divisor& d, std::size_t k, std::size_t j, const std::vector<cplx>& z);

struct Moebius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    cplx operator()(cplx t) const;
    cplx derivative(cplx t) const;
};

/// Returns (omega_nu(t1, t2) at pt, omega_{nu^sigma}(Xi_* t1, Xi_* t2) at Xi(pt)), where Xi puts
/// (phi_j(z_sigma(j)), phi_j(zeta_sigma(j))) in slot j. With permute_weights false the second value
/// uses nu itself instead of nu^sigma.
std::pair<cplx, cplx> mobius_transport(const std::vector<std::size_t>& sigma, const std::vector<Moebius>& maps,
                                       const ChartPoint& pt, const TangentVector& t1, const TangentVector& t2,
                                       const EigenData& nu, bool permute_weights = true);

}  // namespace ellcon
