#include <random>

#include "support.hpp"

#include "ellcon/stability.hpp"

using namespace ellcon;
using ellcon::test::close;
using ellcon::test::throws_code;

namespace {

WeightVector weights(std::vector<double> mu) { return WeightVector{std::move(mu)}; }

}  // namespace

TEST(Stability, StabValueByHand) {
    const WeightVector mu = weights({0.3, 0.2, 0.1});
    // 1 - 0 + (0.2 + 0.1) - 0.3
    EXPECT_NEAR(stab_value(1, 0, {0}, mu), 1.0, 1e-15);
    // 1 - 0 + 0.3 - (0.2 + 0.1)
    EXPECT_NEAR(stab_value(1, 0, {1, 2}, mu), 1.0, 1e-15);
    // 3 - 4 + 0.6
    EXPECT_NEAR(stab_value(3, 2, {}, mu), -0.4, 1e-15);
    // 1 - 2 + 0 - 0.6
    EXPECT_NEAR(stab_value(1, 1, {0, 1, 2}, mu), -1.6, 1e-15);
    EXPECT_NEAR(wall_value({0, {0}}, mu), stab_value(1, 0, {0}, mu), 0.0);
}

TEST(Stability, ChamberMembership) {
    EXPECT_TRUE(chamber_membership(weights({0.1, 0.2, 0.3}), {}));
    EXPECT_FALSE(chamber_membership(weights({0.5, 0.4, 0.3}), {}));
    EXPECT_NEAR(chamber_margin(weights({0.1, 0.2, 0.3}), {}), 0.4, 1e-15);
    // for I = {0, 1}: sum_off - sum_on + |I| < 1 needs mu_0 + mu_1 large
    EXPECT_TRUE(chamber_membership(weights({0.9, 0.8, 0.1}), {0, 1}));
    EXPECT_FALSE(chamber_membership(weights({0.1, 0.2, 0.1}), {0, 1}));
    EXPECT_TRUE(throws_code([] { chamber_membership(weights({0.1, 0.2}), {0}); }, ErrorCode::OddCardinality));
}

TEST(Stability, WallAvoidanceInsideChamberByEnumeration) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 5;
        std::vector<double> mu;
        double total = 0.0;
        while (mu.size() < n) {
            const double m = u(rng) / static_cast<double>(n);
            mu.push_back(m + 1e-9);
            total += m + 1e-9;
        }
        if (total >= 1.0) continue;
        const WeightVector w = weights(mu);
        for (int d = -static_cast<int>(n); d <= static_cast<int>(n); ++d)
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                IndexSet on;
                for (std::size_t k = 0; k < n; ++k)
                    if (mask >> k & 1u) on.push_back(k);
                // |1 - 2d + sum_off - sum_on| >= 1 - sum mu: odd integer plus something in (-sum, sum)
                EXPECT_GE(std::abs(wall_value({d, on}, w)), 1.0 - total - 1e-12);
            }
    }
}

TEST(Stability, PhiIIsAnInvolution) {
    const WeightVector mu = weights({0.11, 0.37, 0.05, 0.6});
    const IndexSet i{1, 3};
    const WeightVector m1 = phi_I(mu, i);
    EXPECT_DOUBLE_EQ(m1.mu[0], 0.11);
    EXPECT_DOUBLE_EQ(m1.mu[1], 1.0 - 0.37);
    EXPECT_DOUBLE_EQ(m1.mu[3], 1.0 - 0.6);
    const WeightVector m2 = phi_I(m1, i);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(m2.mu[k], mu.mu[k], 2.3e-16);
}

TEST(Stability, PhiIMapsChamberIntoChamberI) {
    const WeightVector mu = weights({0.1, 0.2, 0.15, 0.05});
    ASSERT_TRUE(chamber_membership(mu, {}));
    for (const IndexSet& i : {IndexSet{0, 1}, IndexSet{1, 3}, IndexSet{0, 1, 2, 3}})
        EXPECT_TRUE(chamber_membership(phi_I(mu, i), i));
}

TEST(Stability, PhiIWallCarriesWallValues) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    const std::size_t n = 4;
    for (int trial = 0; trial < 200; ++trial) {
        WeightVector mu;
        for (std::size_t k = 0; k < n; ++k) mu.mu.push_back(u(rng));
        const IndexSet i = (trial % 2) ? IndexSet{0, 2} : IndexSet{0, 1, 2, 3};
        const IndexSet j = trial % 3 == 0 ? IndexSet{} : IndexSet{static_cast<std::size_t>(trial % 4)};
        const WallSpec wall{trial % 5 - 2, j};
        EXPECT_NEAR(wall_value(phi_I_wall(wall, i, n), phi_I(mu, i)), wall_value(wall, mu), 1e-13);
    }
}

TEST(Stability, RemarkValueIsNegative) {
    // degE = 1, 2 degL = n + 1, all directions off L
    const WeightVector mu = weights({0.9, 0.8, 0.99});
    EXPECT_NEAR(stab_value(1, 2, {}, mu), -3.0 + 0.9 + 0.8 + 0.99, 1e-15);
    EXPECT_LT(stab_value(1, 2, {}, mu), 0.0);
}

TEST(Stability, WeightValidation) {
    EXPECT_NO_THROW(weights({0.5, 0.25}).validate());
    EXPECT_TRUE(throws_code([] { weights({0.5, 1.0}).validate(); }, ErrorCode::ValidationError));
    EXPECT_TRUE(throws_code([] { weights({0.0}).validate(); }, ErrorCode::ValidationError));
    EXPECT_TRUE(throws_code([] { make_index_set({1, 1}, 3); }, ErrorCode::ValidationError));
    EXPECT_TRUE(throws_code([] { make_index_set({3}, 3); }, ErrorCode::ValidationError));
    EXPECT_EQ(make_index_set({2, 0}, 3), (IndexSet{0, 2}));
}

TEST(Elm, EigenvaluesByHand) {
    const EigenData nu{{{0.3, -0.1}, {0.2, -0.6}, {{0.1, 0.1}, {-0.8, -0.1}}}};
    const EigenData plus = elm_eigenvalues(nu, {0, 1}, {Sign::plus, Sign::plus, Sign::plus});
    EXPECT_TRUE(close(plus.plus(0), -0.1 + 0.5, 1e-15));
    EXPECT_TRUE(close(plus.minus(0), 0.3 - 0.5, 1e-15));
    EXPECT_TRUE(close(plus.plus(1), -0.6 + 0.5, 1e-15));
    EXPECT_TRUE(close(plus.plus(2), nu.plus(2), 0.0));
    const EigenData minus = elm_eigenvalues(nu, {0, 1}, {Sign::minus, Sign::minus, Sign::plus});
    EXPECT_TRUE(close(minus.plus(0), -0.1 - 0.5, 1e-15));
    EXPECT_TRUE(close(minus.minus(0), 0.3 + 0.5, 1e-15));
    // the sum is unchanged, so the Fuchs relation survives
    EXPECT_TRUE(close(plus.fuchs_defect(), nu.fuchs_defect(), 1e-15));
    EXPECT_TRUE(close(minus.fuchs_defect(), nu.fuchs_defect(), 1e-15));
    // applying the same move twice returns the data
    const EigenData back = elm_eigenvalues(plus, {0, 1}, {Sign::plus, Sign::plus, Sign::plus});
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_TRUE(close(back.plus(k), nu.plus(k), 1e-15));
        EXPECT_TRUE(close(back.minus(k), nu.minus(k), 1e-15));
    }
    EXPECT_TRUE(throws_code([&] { elm_eigenvalues(nu, {0}, {Sign::plus, Sign::plus, Sign::plus}); }, ErrorCode::OddCardinality));
}

TEST(Genericity, FlagsEachCondition) {
    const EigenData generic{{{0.13, -0.41}, {{0.2, 0.3}, {-0.92, -0.3}}}};
    const GenericityReport ok = genericity_report(generic);
    EXPECT_TRUE(ok.fuchs_ok && ok.no_integer_sums && ok.distinct_pairs && ok.strong_condition);

    const GenericityReport same = genericity_report(EigenData{{{0.3, 0.3}, {0.2, -1.8}}});
    EXPECT_FALSE(same.distinct_pairs);
    EXPECT_FALSE(same.strong_condition);

    // 0.25 + 0.75 = 1
    const GenericityReport integral = genericity_report(EigenData{{{0.25, -0.1}, {0.75, -1.9}}});
    EXPECT_TRUE(integral.fuchs_ok);
    EXPECT_FALSE(integral.no_integer_sums);

    const GenericityReport one = genericity_report(EigenData{{{0.6, -0.4}, {0.1, -1.3}}});
    EXPECT_TRUE(one.distinct_pairs);
    EXPECT_FALSE(one.strong_condition);

    EXPECT_FALSE(genericity_report(EigenData{{{0.13, -0.41}}}).fuchs_ok);
}

TEST(Genericity, SignSumEnumeration) {
    EigenData nu;
    for (int k = 0; k < 6; ++k) nu.pairs.emplace_back(cplx{1.0 * (1 << k)}, cplx{0.0});
    // sums of distinct powers of two: every integer in [0, 63] exactly once
    std::vector<int> seen(64, 0);
    for_each_sign_sum(nu, [&](cplx s) { ++seen[static_cast<std::size_t>(std::lround(s.real()))]; });
    for (int c : seen) EXPECT_EQ(c, 1);
    EigenData big;
    big.pairs.assign(21, {0.1, 0.2});
    EXPECT_TRUE(throws_code([&] { for_each_sign_sum(big, [](cplx) {}); }, ErrorCode::ExponentialBlowup));
}

TEST(Zn, ClosedFormDirections) {
    // n = 3 with the Fuchs relation
    const EigenData nu{{{0.2, -0.35}, {{0.1, 0.2}, -0.4}, {0.3, {-0.85, -0.2}}}};
    ASSERT_NO_THROW(nu.require_fuchs());
    const DirectionPair p = zn_directions(nu);
    EXPECT_LT(projective_distance(p.plus, Direction{1.0, 1.0}), 1e-15);
    const cplx first = 1.0 - nu.plus(0) - nu.minus(0);
    const cplx second = 2.0 + nu.minus(0) + nu.minus(1) + nu.minus(2);
    EXPECT_LT(projective_distance(p.minus, Direction{first, second}), 1e-14);
}

TEST(Zn, SinglePoint) {
    const EigenData nu{{{0.3, -1.3}}};
    const DirectionPair p = zn_directions(nu);
    EXPECT_LT(projective_distance(p.minus, Direction{1.0, 1.0 + nu.minus(0)}), 1e-15);
}

TEST(Zn, EvenNRejected) {
    const EigenData nu{{{0.3, -0.5}, {0.1, -0.9}}};
    EXPECT_TRUE(throws_code([&] { zn_directions(nu); }, ErrorCode::EvenN));
}

TEST(Lame, EigenvaluesAtOneHalf) {
    const auto theta = lame_theta(0.5);
    ASSERT_EQ(theta.size(), 4u);
    for (int k = 0; k < 3; ++k) {
        EXPECT_TRUE(close(theta[static_cast<std::size_t>(k)].first, 0.25, 0.0));
        EXPECT_TRUE(close(theta[static_cast<std::size_t>(k)].second, -0.25, 0.0));
    }
    EXPECT_TRUE(close(theta[3].first, 0.0, 1e-16));
    EXPECT_TRUE(close(theta[3].second, -1.0, 1e-16));
    EXPECT_TRUE(throws_code([] { lame_theta(2.0); }, ErrorCode::IntegerNu));
}
