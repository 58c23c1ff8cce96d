#pragma once

#include <vector>

#include "ellcon/scalar.hpp"

namespace ellcon {

/// Truncated Laurent series sum_k c_k tau^k, known for valuation <= k < truncation.
///
/// The leading stored coefficient is nonzero unless the series is the
/// truncated zero series, in which case valuation == truncation and no
/// coefficients are stored. Arithmetic propagates the smallest truncation
/// order justified by the inputs.
class LaurentSeries {
public:
    LaurentSeries() = default;
    /// coefficients[k] multiplies tau^(valuation + k); padded or cut to the truncation.
    LaurentSeries(int valuation, std::vector<cplx> coefficients, int truncation);

    static LaurentSeries zero(int truncation);
    static LaurentSeries constant(cplx c, int truncation);
    /// The chart coordinate tau itself.
    static LaurentSeries tau(int truncation);

    int valuation() const noexcept { return valuation_; }
    int truncation() const noexcept { return truncation_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const std::vector<cplx>& coefficients() const noexcept { return coeffs_; }
    cplx leading() const noexcept { return coeffs_.empty() ? cplx{} : coeffs_.front(); }

    /// Coefficient of tau^k: zero below the valuation, TruncationExceeded at or past the truncation.
    cplx coefficient(int k) const;
    /// Partial sum at a numeric value of tau.
    cplx eval(cplx tau) const;
    /// Coefficient-wise magnitudes; used to bound rounding in polynomial evaluation.
    LaurentSeries abs() const;
    /// Drops leading coefficients with |c_k| <= rel_tol * |scale_k|.
    LaurentSeries strip_negligible_leading(const LaurentSeries& scale, double rel_tol) const;
    LaurentSeries truncated(int truncation) const;
    LaurentSeries shifted(int power) const;
    LaurentSeries inverse() const;
    double max_abs_coefficient() const noexcept;

    LaurentSeries operator-() const;
    LaurentSeries& operator+=(const LaurentSeries& rhs);
    LaurentSeries& operator-=(const LaurentSeries& rhs);
    LaurentSeries& operator*=(const LaurentSeries& rhs);
    LaurentSeries& operator/=(const LaurentSeries& rhs);
    LaurentSeries& operator*=(cplx s);

    friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
    friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }
    friend LaurentSeries operator*(LaurentSeries a, const LaurentSeries& b) { return a *= b; }
    friend LaurentSeries operator/(LaurentSeries a, const LaurentSeries& b) { return a /= b; }
    friend LaurentSeries operator*(LaurentSeries a, cplx s) { return a *= s; }
    friend LaurentSeries operator*(cplx s, LaurentSeries a) { return a *= s; }

private:
    void normalize();

    int valuation_ = 0;
    int truncation_ = 0;
    std::vector<cplx> coeffs_;
};

enum class SeriesOp { add, sub, mul, div };

LaurentSeries series_arith(const LaurentSeries& a, const LaurentSeries& b, SeriesOp op);
cplx series_coefficient(const LaurentSeries& a, int k);

}  // namespace ellcon
