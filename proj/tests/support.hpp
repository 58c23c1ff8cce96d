#pragma once

#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "ellcon/curve.hpp"
#include "ellcon/error.hpp"

namespace ellcon::test {

inline ::testing::AssertionResult close(cplx got, cplx want, double tol) {
    const double err = std::abs(got - want);
    if (err <= tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "got " << got << ", want " << want << ", |diff| = " << err << " > " << tol;
}

template <class F>
::testing::AssertionResult throws_code(F&& f, ErrorCode code) {
    try {
        f();
    } catch (const Error& e) {
        if (e.code() == code) return ::testing::AssertionSuccess();
        return ::testing::AssertionFailure() << "wrong code: " << e.what();
    }
    return ::testing::AssertionFailure() << "no exception, expected " << to_string(code);
}

/// y on the principal branch, checked against the curve equation.
inline CurvePoint point(const Curve& c, cplx x) { return c.point_at(x); }

inline Divisor divisor_at(const Curve& c, const std::vector<cplx>& xs) {
    std::vector<CurvePoint> pts;
    for (cplx x : xs) pts.push_back(c.point_at(x));
    return Divisor::reduced(pts);
}

}  // namespace ellcon::test
