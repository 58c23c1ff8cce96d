#pragma once

#include <array>

#include <Eigen/Dense>

#include "ellcon/scalar.hpp"

namespace ellcon {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

/// A point (a:b) of P^1, stored as a representative pair.
struct Direction {
    cplx a{1.0};
    cplx b{0.0};

    Vec2 vector() const { return {a, b}; }
    /// Unit-norm representative.
    Direction normalized() const;
};

/// |a1 b2 - a2 b1| on unit representatives: 0 iff the directions coincide, at most 1.
double projective_distance(const Direction& p, const Direction& q);

struct Eigen2 {
    std::array<cplx, 2> values;
    std::array<Direction, 2> vectors;
};

/// Closed-form eigen-decomposition of a 2x2 matrix.
///
/// Each eigenvector is taken from whichever row of (M - mu) gives the larger
/// null vector, which keeps it well conditioned when an off-diagonal entry vanishes.
Eigen2 eig2(const Mat2& m);

/// Eigenvector of m for the eigenvalue mu (assumed simple).
Direction eigenvector(const Mat2& m, cplx mu);

double max_abs(const Mat2& m);

}  // namespace ellcon
