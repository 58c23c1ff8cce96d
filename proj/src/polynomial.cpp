#include "ellcon/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "ellcon/error.hpp"

namespace ellcon {

Polynomial::Polynomial(std::vector<cplx> coefficients) : coeffs_(std::move(coefficients)) { strip(); }

Polynomial::Polynomial(std::initializer_list<cplx> coefficients) : coeffs_(coefficients) { strip(); }

Polynomial Polynomial::constant(cplx c) { return Polynomial(std::vector<cplx>{c}); }

Polynomial Polynomial::x() { return Polynomial({cplx{0.0}, cplx{1.0}}); }

Polynomial Polynomial::from_roots(const std::vector<cplx>& roots) {
    Polynomial out = constant(1.0);
    for (const cplx& r : roots) out *= Polynomial({-r, cplx{1.0}});
    return out;
}

void Polynomial::strip() {
    while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

std::optional<std::size_t> Polynomial::degree() const noexcept {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.size() - 1;
}

double Polynomial::max_abs_coefficient() const noexcept {
    double m = 0.0;
    for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

cplx Polynomial::operator()(cplx x) const noexcept {
    cplx acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Polynomial::abs_scale(cplx x) const noexcept {
    const double ax = std::abs(x);
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * ax + std::abs(*it);
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw Error(ErrorCode::DivisionByZeroElement, "polynomial division by zero");
    const std::size_t dd = divisor.coeffs_.size() - 1;
    if (coeffs_.size() <= dd) return {Polynomial{}, *this};
    std::vector<cplx> rem = coeffs_;
    std::vector<cplx> quot(coeffs_.size() - dd);
    const cplx lead = divisor.leading();
    for (std::size_t k = quot.size(); k-- > 0;) {
        const cplx q = rem[k + dd] / lead;
        quot[k] = q;
        for (std::size_t i = 0; i <= dd; ++i) rem[k + i] -= q * divisor.coeffs_[i];
        rem[k + dd] = cplx{};
    }
    rem.resize(dd);
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::deflate(cplx r) const {
    if (coeffs_.size() <= 1) return {};
    std::vector<cplx> q(coeffs_.size() - 1);
    cplx acc{};
    for (std::size_t k = coeffs_.size(); k-- > 1;) {
        acc = acc * r + coeffs_[k];
        q[k - 1] = acc;
    }
    return Polynomial(std::move(q));
}

Polynomial Polynomial::trimmed(double rel_tol) const {
    const double cutoff = rel_tol * max_abs_coefficient();
    std::vector<cplx> c = coeffs_;
    while (!c.empty() && std::abs(c.back()) <= cutoff) c.pop_back();
    return Polynomial(std::move(c));
}

std::vector<cplx> Polynomial::roots() const {
    const auto deg = degree();
    if (!deg || *deg == 0) return {};
    const auto n = static_cast<Eigen::Index>(*deg);
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -coeffs_[static_cast<std::size_t>(i)] / leading();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (cplx& c : out.coeffs_) c = -c;
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    strip();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
    strip();
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
    if (is_zero() || rhs.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<cplx> out(coeffs_.size() + rhs.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
    coeffs_ = std::move(out);
    strip();
    return *this;
}

Polynomial& Polynomial::operator*=(cplx s) {
    for (cplx& c : coeffs_) c *= s;
    strip();
    return *this;
}

}  // namespace ellcon
