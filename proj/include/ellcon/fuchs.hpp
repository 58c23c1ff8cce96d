#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ellcon/curve.hpp"
#include "ellcon/linalg.hpp"

namespace ellcon {

/// Residual eigenvalues (nu+_j, nu-_j) over the poles t_j.
struct EigenData {
    std::vector<std::pair<cplx, cplx>> pairs;

    std::size_t n() const noexcept { return pairs.size(); }
    cplx plus(std::size_t j) const { return pairs.at(j).first; }
    cplx minus(std::size_t j) const { return pairs.at(j).second; }
    /// nu_j = nu+_j - nu-_j
    cplx nu(std::size_t j) const { return plus(j) - minus(j); }
    std::vector<cplx> reduced() const;
    /// 1 + sum of all eigenvalues; vanishes for connections on a degree -1 determinant.
    cplx fuchs_defect() const;
    /// Throws FuchsRelationViolated when |fuchs_defect| > tol.
    void require_fuchs(double tol = 1e-9) const;
};

/// d + A_phi0 phi0 + A_phi1 phi1 + A_omega omega + sum_j B_j theta_j, times a lambda-connection scale on d.
struct FuchsianSystem {
    Curve curve;
    Divisor divisor;
    Mat2 a_phi0 = Mat2::Zero();
    Mat2 a_phi1 = Mat2::Zero();
    Mat2 a_omega = Mat2::Zero();
    std::vector<Mat2> b;
    cplx scale{1.0};

    /// Coefficients in basis order omega, phi0, phi1, theta_1..theta_n (matches BasisForms::all).
    std::vector<Mat2> coefficients() const;

    FuchsianSystem& operator+=(const FuchsianSystem& rhs);
    FuchsianSystem& operator*=(cplx s);
    friend FuchsianSystem operator+(FuchsianSystem a, const FuchsianSystem& b) { return a += b; }
    friend FuchsianSystem operator*(cplx s, FuchsianSystem a) { return a *= s; }
};

/// Largest entry-wise deviation over all coefficient matrices and the scale.
double max_deviation(const FuchsianSystem& a, const FuchsianSystem& b);
/// Largest |trace| over all coefficient matrices.
double max_trace(const FuchsianSystem& sys);

/// Polar and constant parts of the connection matrix in the chart at pt: (R/tau + C + O(tau)) dtau.
struct LocalExpansion {
    Mat2 residue;
    Mat2 constant;
};

LocalExpansion local_expansion(const FuchsianSystem& sys, const CurvePoint& pt);

/// Fixes B_j = residues and solves the apparentness conditions at w0, w1, wlambda.
FuchsianSystem build_system(const Curve& curve, const Divisor& d, const std::vector<Mat2>& residues, cplx scale = 1.0);

struct ApparentReport {
    CurvePoint point;
    double eigenvalue_defect = 0.0;
    double eigenspace_defect = 0.0;
    double invariance_defect = 0.0;
    bool passed = false;
};

constexpr double kApparentTolerance = 1e-8;

/// The 1/2-eigenspaces prescribed at w0, w1, wlambda are (1:0), (1:1), (0:1).
Direction prescribed_eigenspace(Weierstrass w);

ApparentReport check_apparent(const FuchsianSystem& sys, const CurvePoint& wpt);

struct ParPair {
    Direction plus;
    Direction minus;
};

/// A point of S^n: n pairs of distinct directions.
struct ParPoint {
    std::vector<ParPair> pairs;

    std::size_t n() const noexcept { return pairs.size(); }
    /// Throws DiagonalPoint if some pair has coinciding directions.
    void validate() const;
};

double projective_distance(const ParPoint& p, const ParPoint& q);

/// Eigenspaces of the residues B_j / scale, the + direction carrying +nu_j/2.
ParPoint par(const FuchsianSystem& sys, const EigenData& nu);

/// Residue with eigenvector `plus` for +nu/2 and `minus` for -nu/2.
Mat2 residue_from_directions(cplx nu, const ParPair& pair);

FuchsianSystem par_inverse(const Curve& curve, const Divisor& d, const EigenData& nu, const ParPoint& pp);

enum class ChartTag { U0, Uinf };

/// scale * nabla_chart(base) + sum_j fiber_j Theta_j^chart(base_j), from the explicit trivialization tables.
FuchsianSystem chart_connection(const Curve& curve, const Divisor& d, const EigenData& nu, ChartTag tag,
                                const std::vector<cplx>& base, const std::vector<cplx>& fiber, cplx scale);

struct ChartCoordinates {
    std::vector<cplx> base;
    std::vector<cplx> fiber;
};

/// (w, s) on U_inf to (z, r) on U_0: z = 1/w, r = w^2 s + nu w.
ChartCoordinates transition_map(const EigenData& nu, const std::vector<cplx>& w, const std::vector<cplx>& s);
/// (z, r) on U_0 to (w, s) on U_inf.
ChartCoordinates transition_inverse(const EigenData& nu, const std::vector<cplx>& z, const std::vector<cplx>& r);

struct SplittingReport {
    /// nabla_inf(w) against nabla_0(1/w) + sum nu_j w_j Theta_j^0(1/w_j)
    double cocycle_deviation = 0.0;
    /// chart_connection(Uinf, w, s, 1) against chart_connection(U0, 1/w, w^2 s + nu w, 1)
    double chart_identity_deviation = 0.0;
    /// Theta_j^inf(w_j) against w_j^2 Theta_j^0(1/w_j), worst j
    double higgs_deviation = 0.0;

    double max() const;
};

SplittingReport splitting_check(const Curve& curve, const Divisor& d, const EigenData& nu, const std::vector<cplx>& w,
                                const std::vector<cplx>& s);

/// Lower-triangular (n+1)x(n+1) transition matrix acting on (lambda, s).
Eigen::MatrixXcd lambda_transition_matrix(const EigenData& nu, const std::vector<cplx>& w);

}  // namespace ellcon
