#include "ellcon/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ellcon {

Direction Direction::normalized() const {
    const double n = std::hypot(std::abs(a), std::abs(b));
    return {a / n, b / n};
}

double projective_distance(const Direction& p, const Direction& q) {
    const Direction u = p.normalized();
    const Direction v = q.normalized();
    return std::abs(u.a * v.b - u.b * v.a);
}

Direction eigenvector(const Mat2& m, cplx mu) {
    // rows of (m - mu) annihilate the eigenvector: (m01, mu - m00) and (mu - m11, m10)
    const Direction r0{m(0, 1), mu - m(0, 0)};
    const Direction r1{mu - m(1, 1), m(1, 0)};
    const double n0 = std::norm(r0.a) + std::norm(r0.b);
    const double n1 = std::norm(r1.a) + std::norm(r1.b);
    if (n0 == 0.0 && n1 == 0.0) return {1.0, 0.0};
    return (n0 >= n1 ? r0 : r1).normalized();
}

Eigen2 eig2(const Mat2& m) {
    const cplx half_tr = 0.5 * (m(0, 0) + m(1, 1));
    const cplx det = m.determinant();
    const cplx disc = std::sqrt(half_tr * half_tr - det);
    // avoid cancellation: compute the larger root first, the other from the determinant
    cplx big = std::abs(half_tr + disc) >= std::abs(half_tr - disc) ? half_tr + disc : half_tr - disc;
    cplx small = big != cplx{} ? det / big : cplx{};
    Eigen2 e;
    if (std::abs(big - (half_tr + disc)) <= std::abs(small - (half_tr + disc)))
        e.values = {big, small};
    else
        e.values = {small, big};
    e.vectors = {eigenvector(m, e.values[0]), eigenvector(m, e.values[1])};
    return e;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace ellcon
