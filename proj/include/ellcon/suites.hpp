#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ellcon/apparent.hpp"
#include "ellcon/curve.hpp"
#include "ellcon/fuchs.hpp"

namespace ellcon {

/// One checked quantity: passes when value <= tolerance. Counts of violations use tolerance 0.
struct Metric {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    /// Which statement of the theory the metric exercises.
    std::string anchor;

    bool passed() const noexcept { return value <= tolerance; }
};

struct SuiteResult {
    std::string name;
    std::vector<Metric> metrics;

    bool passed() const;
};

/// Random data used by the suites and by commands that need auxiliary inputs.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() noexcept { return rng_; }
    double uniform(double lo, double hi);
    int integer(int lo, int hi);
    /// Uniform in the disc of the given radius.
    cplx disc(double radius);
    /// Uniform in the annulus lo <= |c| <= hi.
    cplx annulus(double lo, double hi);
    Mat2 trace_free(double radius);
    Direction direction();

    /// lambda at distance >= 0.3 from 0 and 1.
    Curve curve();
    /// n points, separated from each other and from the Weierstrass points by 0.1.
    Divisor divisor(const Curve& curve, std::size_t n);
    /// nu satisfying the Fuchs relation, with |nu_j| >= 0.1, no integer signed sum and every signed sum >= 1e-3 in modulus.
    EigenData eigen_data(std::size_t n);
    ParPoint par_point(std::size_t n);

private:
    std::mt19937_64 rng_;
};

/// Tolerances for the per-instance checks; overridable from the command line.
struct Tolerances {
    double residue = 1e-9;
    double apparent = 1e-8;
    double par = 1e-9;
    double par_system = 1e-8;
    double splitting = 1e-9;
    double lambda_matrix = 1e-12;
    double symplectic = 1e-6;
    double serre = 1e-8;
    double linearity = 1e-9;
    double derivation = 1e-9;
    double chart = 1e-7;

    /// Throws ValidationError for an unknown name.
    void set(const std::string& name, double value);
};

// Per-instance checks, shared by the suites and the CLI commands.

struct ResidueTable {
    /// rows: omega, phi0, phi1, theta_1..theta_n; columns: w0, w1, wlambda, t_1..t_n
    std::vector<std::vector<cplx>> residues;
    std::vector<std::vector<cplx>> constants;
};

ResidueTable residue_table(const Curve& curve, const Divisor& d);
/// The residues and constant terms implied by the basis definitions.
ResidueTable expected_residue_table(const Curve& curve, const Divisor& d);
/// (residue deviation, constant term deviation), the latter relative to max(1, |expected|).
std::pair<double, double> residue_table_deviation(const Curve& curve, const Divisor& d);

/// Worst eigenvalue, eigenspace and invariance defects over w0, w1, wlambda.
std::array<double, 3> apparent_defects(const FuchsianSystem& sys);

/// (par o par_inverse projective error, par_inverse o par relative coefficient error).
std::pair<double, double> par_roundtrip(const Curve& curve, const Divisor& d, const EigenData& nu, const ParPoint& pp);

/// Consistency of lambda_transition_matrix with transition_map (lambda = 1) and the Higgs scaling (lambda = 0).
double lambda_matrix_deviation(const EigenData& nu, const std::vector<cplx>& w, const std::vector<cplx>& s);

/// Max deviation of the Kronecker matrix Res_{t_j}(serre form k) from the identity.
double serre_matrix_deviation(const Curve& curve, const Divisor& d, const std::vector<cplx>& z);

// Acceptance suites, one per criterion 1-9. Fully determined by the seed.

SuiteResult suite_residue_table(std::uint64_t seed, const Tolerances& tol = {});
SuiteResult suite_apparentness(std::uint64_t seed, int trials = 100, const Tolerances& tol = {});
SuiteResult suite_par(std::uint64_t seed, int trials = 100, const Tolerances& tol = {});
SuiteResult suite_transition(std::uint64_t seed, int trials = 100, const Tolerances& tol = {});
SuiteResult suite_symplectic(std::uint64_t seed, int trials = 100, const Tolerances& tol = {});
SuiteResult suite_stability(std::uint64_t seed);
SuiteResult suite_eigenvalue_calculus(std::uint64_t seed);
SuiteResult suite_apparent_map(std::uint64_t seed, int trials = 50, const Tolerances& tol = {});
SuiteResult suite_algebra(std::uint64_t seed, const Tolerances& tol = {});

std::vector<SuiteResult> run_all_suites(std::uint64_t seed, int trials = 100, const Tolerances& tol = {});

}  // namespace ellcon
