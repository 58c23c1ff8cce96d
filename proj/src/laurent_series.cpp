#include "ellcon/laurent_series.hpp"

#include <algorithm>
#include <cmath>

#include "ellcon/error.hpp"

namespace ellcon {

namespace {

constexpr double kLeadingTolerance = 1e-12;

}  // namespace

LaurentSeries::LaurentSeries(int valuation, std::vector<cplx> coefficients, int truncation)
    : valuation_(valuation), truncation_(truncation), coeffs_(std::move(coefficients)) {
    if (truncation_ < valuation_) valuation_ = truncation_;
    coeffs_.resize(static_cast<std::size_t>(truncation_ - valuation_));
    normalize();
}

LaurentSeries LaurentSeries::zero(int truncation) { return LaurentSeries(truncation, {}, truncation); }

LaurentSeries LaurentSeries::constant(cplx c, int truncation) { return LaurentSeries(0, {c}, truncation); }

LaurentSeries LaurentSeries::tau(int truncation) { return LaurentSeries(1, {cplx{1.0}}, truncation); }

void LaurentSeries::normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == cplx{}) ++lead;
    if (lead == 0) return;
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    valuation_ += static_cast<int>(lead);
}

cplx LaurentSeries::coefficient(int k) const {
    if (k >= truncation_)
        throw Error(ErrorCode::TruncationExceeded,
                    "coefficient " + std::to_string(k) + " requested from series truncated at " +
                        std::to_string(truncation_));
    if (k < valuation_) return {};
    return coeffs_[static_cast<std::size_t>(k - valuation_)];
}

cplx LaurentSeries::eval(cplx tau) const {
    cplx acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * tau + *it;
    return acc * std::pow(tau, valuation_);
}

LaurentSeries LaurentSeries::abs() const {
    std::vector<cplx> c(coeffs_.size());
    std::transform(coeffs_.begin(), coeffs_.end(), c.begin(), [](cplx v) { return cplx{std::abs(v)}; });
    return LaurentSeries(valuation_, std::move(c), truncation_);
}

LaurentSeries LaurentSeries::strip_negligible_leading(const LaurentSeries& scale, double rel_tol) const {
    std::vector<cplx> c = coeffs_;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const int power = valuation_ + static_cast<int>(k);
        const double bound = power < scale.truncation_ ? std::abs(scale.coefficient(power)) : 0.0;
        if (std::abs(c[k]) > rel_tol * bound) break;
        c[k] = cplx{};
    }
    return LaurentSeries(valuation_, std::move(c), truncation_);
}

LaurentSeries LaurentSeries::truncated(int truncation) const {
    return LaurentSeries(valuation_, coeffs_, std::min(truncation, truncation_));
}

LaurentSeries LaurentSeries::shifted(int power) const {
    return LaurentSeries(valuation_ + power, coeffs_, truncation_ + power);
}

double LaurentSeries::max_abs_coefficient() const noexcept {
    double m = 0.0;
    for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

LaurentSeries LaurentSeries::inverse() const {
    if (is_zero()) throw Error(ErrorCode::IllConditionedLeadingTerm, "inverse of a truncated zero series");
    if (std::abs(leading()) <= kLeadingTolerance * max_abs_coefficient())
        throw Error(ErrorCode::IllConditionedLeadingTerm, "leading coefficient too small to divide by");
    const std::size_t terms = coeffs_.size();
    std::vector<cplx> b(terms);
    const cplx inv_lead = 1.0 / coeffs_[0];
    b[0] = inv_lead;
    for (std::size_t k = 1; k < terms; ++k) {
        cplx acc{};
        for (std::size_t i = 1; i <= k; ++i) acc += coeffs_[i] * b[k - i];
        b[k] = -acc * inv_lead;
    }
    return LaurentSeries(-valuation_, std::move(b), truncation_ - 2 * valuation_);
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries out = *this;
    for (cplx& c : out.coeffs_) c = -c;
    return out;
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& rhs) {
    const int t = std::min(truncation_, rhs.truncation_);
    const int v = std::min(valuation_, rhs.valuation_);
    std::vector<cplx> c(static_cast<std::size_t>(std::max(t - v, 0)));
    for (int k = v; k < t; ++k) {
        cplx s{};
        if (k >= valuation_ && k - valuation_ < static_cast<int>(coeffs_.size())) s += coeffs_[static_cast<std::size_t>(k - valuation_)];
        if (k >= rhs.valuation_ && k - rhs.valuation_ < static_cast<int>(rhs.coeffs_.size()))
            s += rhs.coeffs_[static_cast<std::size_t>(k - rhs.valuation_)];
        c[static_cast<std::size_t>(k - v)] = s;
    }
    *this = LaurentSeries(std::min(v, t), std::move(c), t);
    return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& rhs) { return *this += -rhs; }

LaurentSeries& LaurentSeries::operator*=(const LaurentSeries& rhs) {
    const int v = valuation_ + rhs.valuation_;
    const int t = std::min(truncation_ + rhs.valuation_, rhs.truncation_ + valuation_);
    if (is_zero() || rhs.is_zero() || t <= v) {
        *this = zero(t);
        return *this;
    }
    const std::size_t terms = static_cast<std::size_t>(t - v);
    std::vector<cplx> c(terms);
    for (std::size_t i = 0; i < coeffs_.size() && i < terms; ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size() && i + j < terms; ++j) c[i + j] += coeffs_[i] * rhs.coeffs_[j];
    *this = LaurentSeries(v, std::move(c), t);
    return *this;
}

LaurentSeries& LaurentSeries::operator/=(const LaurentSeries& rhs) { return *this *= rhs.inverse(); }

LaurentSeries& LaurentSeries::operator*=(cplx s) {
    for (cplx& c : coeffs_) c *= s;
    normalize();
    if (coeffs_.empty()) valuation_ = truncation_;
    return *this;
}

LaurentSeries series_arith(const LaurentSeries& a, const LaurentSeries& b, SeriesOp op) {
    switch (op) {
        case SeriesOp::add: return a + b;
        case SeriesOp::sub: return a - b;
        case SeriesOp::mul: return a * b;
        case SeriesOp::div: return a / b;
    }
    return a;
}

cplx series_coefficient(const LaurentSeries& a, int k) { return a.coefficient(k); }

}  // namespace ellcon
