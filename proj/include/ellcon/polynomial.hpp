#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ellcon/scalar.hpp"

namespace ellcon {

/// Dense univariate polynomial with complex coefficients, index = degree.
///
/// Trailing zero coefficients are stripped on construction, so the zero
/// polynomial has an empty coefficient list and `degree()` returns
/// `std::nullopt` for it instead of a magic negative value.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> coefficients);
    Polynomial(std::initializer_list<cplx> coefficients);

    static Polynomial constant(cplx c);
    static Polynomial x();
    /// (x - r_0)(x - r_1)...
    static Polynomial from_roots(const std::vector<cplx>& roots);

    bool is_zero() const noexcept { return coeffs_.empty(); }
    std::optional<std::size_t> degree() const noexcept;
    const std::vector<cplx>& coefficients() const noexcept { return coeffs_; }
    /// Coefficient of x^k; zero past the degree.
    cplx operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : cplx{}; }
    cplx leading() const noexcept { return coeffs_.empty() ? cplx{} : coeffs_.back(); }
    double max_abs_coefficient() const noexcept;

    cplx operator()(cplx x) const noexcept;
    /// sum |a_k| |x|^k, the magnitude scale of a Horner evaluation at x.
    double abs_scale(cplx x) const noexcept;

    Polynomial derivative() const;
    /// Quotient and remainder of Euclidean division by a nonzero divisor.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;
    /// Division by (x - r) by synthetic division; the remainder is dropped.
    Polynomial deflate(cplx r) const;
    /// Drops trailing coefficients below rel_tol * max|a_k|.
    Polynomial trimmed(double rel_tol) const;
    /// Roots via the eigenvalues of the companion matrix.
    std::vector<cplx> roots() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(const Polynomial& rhs);
    Polynomial& operator*=(cplx s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
    friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

private:
    void strip();

    std::vector<cplx> coeffs_;
};

}  // namespace ellcon
