#pragma once

#include <cstdint>
#include <vector>

#include "ellcon/curve.hpp"
#include "ellcon/fuchs.hpp"

namespace ellcon {

/// The cyclic section s = (s1, s2) of the trivial bundle used to read off App.
struct SectionS {
    /// (x - lambda)/y = y/(x(x-1))
    FieldElement s1;
    /// (1 - lambda) x / y = (1 - lambda) y/((x-1)(x-lambda))
    FieldElement s2;
};

SectionS section_s(const Curve& curve);

/// False iff some signed sum nu_1^{eps_1} + ... + nu_n^{eps_n} vanishes to 1e-8.
bool app_defined(const EigenData& nu);

/// Entries of the connection matrix divided by omega, (row, column) order 00, 01, 10, 11.
std::array<FieldElement, 4> connection_matrix(const FuchsianSystem& sys);

/// F/omega for F = nabla(s) ^ s.
FieldElement app_form(const FuchsianSystem& sys);

struct AppVector {
    std::vector<cplx> values;
};

/// Values of F/omega at the samples; SampleAtPole within 1e-3 of a pole in x.
AppVector app_eval(const FuchsianSystem& sys, const std::vector<CurvePoint>& samples);

/// max |a_i b_k - a_k b_i| / (|a| |b|); zero iff the vectors are proportional.
double projective_deviation(const AppVector& a, const AppVector& b);

/// FNV-1a over the bit patterns of lambda and the points of D.
std::uint64_t instance_hash(const Curve& curve, const Divisor& d);

/// m points drawn from a generator seeded by instance_hash, avoiding the poles of F/omega.
std::vector<CurvePoint> app_samples(const Curve& curve, const Divisor& d, std::size_t m);
/// Default sample count 2(n+1) + 2.
std::vector<CurvePoint> app_samples(const Curve& curve, const Divisor& d);

struct FiberRank {
    int matrix_rank = 0;
    int expected = 0;
    std::vector<double> singular_values;
};

constexpr double kRankThreshold = 1e-8;

/// Rank of the App vectors of nabla_0(z), Theta_1^0(z_1), ..., Theta_n^0(z_n) against the count predicted by
/// how many (z_j:1) differ from (s1(t_j):s2(t_j)).
FiberRank fiber_rank_app(const Curve& curve, const Divisor& d, const EigenData& nu, const std::vector<cplx>& z,
                         const std::vector<CurvePoint>& samples);

}  // namespace ellcon
