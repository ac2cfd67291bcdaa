#include <momentkit/markov.hpp>

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace momentkit;

namespace
{

MomentSequence moments_of(const std::vector<double>& xs,
                          const std::vector<double>& ys)
{
    return forward_moments(xs, ys, static_cast<int>(xs.size() + ys.size()));
}

HankelSystem system_of(const MomentSequence& m)
{
    return build_hankel(exp_transform(m), m.n_x, m.n_y);
}

// Composite midpoint rule for k * int x^{k-1} f(x) dx, with panels spread
// over the pieces between consecutive breakpoints so no panel straddles a
// jump of f.
double quadrature_moment(const BranchSolution& sol, int k, int panels)
{
    std::vector<double> cuts{0.0};
    cuts.insert(cuts.end(), sol.xs.begin(), sol.xs.end());
    cuts.insert(cuts.end(), sol.ys.begin(), sol.ys.end());
    std::sort(cuts.begin(), cuts.end());
    const double span = cuts.back() - cuts.front();
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
    {
        const double lo = cuts[s];
        const double hi = cuts[s + 1];
        if (hi <= lo) continue;
        const int n = std::max(1, static_cast<int>(panels * (hi - lo) / span));
        const double h = (hi - lo) / n;
        for (int i = 0; i < n; ++i)
        {
            const double x = lo + (i + 0.5) * h;
            total += k * std::pow(x, k - 1) * density_eval(sol, x) * h;
        }
    }
    return total;
}

} // namespace

TEST(Weights, Examples)
{
    const std::vector<double> x1{1.0}, y1{0.0};
    EXPECT_EQ(weights(x1, y1).weights, std::vector<double>{1.0});

    const std::vector<double> x2{1.0, 3.0}, y2{0.0, 2.0};
    const auto w = weights(x2, y2).weights;
    ASSERT_EQ(w.size(), 2u);
    EXPECT_NEAR(w[0], 0.5, 1e-15);
    EXPECT_NEAR(w[1], 1.5, 1e-15);

    const std::vector<double> x3{2.0};
    EXPECT_EQ(weights(x3, {}).weights, std::vector<double>{1.0});
}

TEST(Weights, RepeatedRootsRejected)
{
    const std::vector<double> xs{1.0, 1.0}, ys{0.0};
    try
    {
        weights(xs, ys);
        FAIL() << "expected an error";
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::RepeatedRoots);
    }
}

TEST(Factorization, WorkedInstance)
{
    const std::vector<double> xs{1.0, 3.0}, ys{0.0, 2.0};
    const auto m = moments_of(xs, ys);
    const auto a = exp_transform(m);
    const auto h = system_of(m);
    Matrix want(2, 2);
    want << 2, 5, 5, 14;
    EXPECT_LE((h.A1 * reversal(2) - want).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(factorization_residual(a, h, weights(xs, ys)), 1e-12);
}

TEST(Factorization, SingleBranch)
{
    const std::vector<double> xs{2.0};
    const auto m = moments_of(xs, {});
    EXPECT_EQ(factorization_residual(exp_transform(m), system_of(m), weights(xs, {})), 0.0);
}

TEST(Factorization, DimensionMismatch)
{
    const std::vector<double> xs{1.0, 3.0}, ys{0.0, 2.0};
    const auto m = moments_of(xs, ys);
    const std::vector<double> one{1.0};
    EXPECT_THROW(factorization_residual(exp_transform(m), system_of(m), weights(one, ys)),
                 Error);
}

TEST(Factorization, RandomDistinctInstances)
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto v = oracle::separated_values(rng, 6, -3.0, 3.0, 0.2);
        const std::vector<double> xs(v.begin(), v.begin() + 3);
        const std::vector<double> ys(v.begin() + 3, v.end());
        const auto m = moments_of(xs, ys);
        const auto a = exp_transform(m);
        const auto wd = weights(xs, ys);
        const double scale = std::max(1.0, a.max_abs());
        EXPECT_LE(factorization_residual(a, system_of(m), wd), 1e-9 * scale);
        EXPECT_LE(residue_residual(a, 3, 3, wd), 1e-9 * scale);
    }
}

TEST(Residues, UnequalSplits)
{
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto inst = oracle::separated_instance(rng, 5, 5);
        const auto m = moments_of(inst.xs, inst.ys);
        const auto a = exp_transform(m);
        // indices below zero read as 0, which the formula must reproduce too
        EXPECT_LE(residue_residual(a, m.n_x, m.n_y, weights(inst.xs, inst.ys)),
                  1e-9 * std::max(1.0, a.max_abs()));
    }
}

TEST(Spd, Basics)
{
    Matrix m(2, 2);
    m << 2, 5, 5, 14;
    EXPECT_TRUE(is_spd(m));
    m << 2, 5, 5, 12;
    EXPECT_FALSE(is_spd(m));
    m << 2, 5, 4, 14;
    EXPECT_FALSE(is_spd(m));
    EXPECT_FALSE(is_spd(Matrix::Zero(1, 1)));
}

TEST(Certificate, WorkedInstance)
{
    const auto c = markov_certificate(MomentSequence{{2.0, 6.0, 20.0, 66.0}, 2, 2});
    EXPECT_TRUE(c.spd);
    EXPECT_TRUE(c.interlaced);
    EXPECT_TRUE(c.interlace_applicable);
    EXPECT_TRUE(c.weights_positive);
    EXPECT_TRUE(c.extended_singular);
    ASSERT_EQ(c.weights.size(), 2u);
    EXPECT_NEAR(c.weights[0], 0.5, 1e-12);
    EXPECT_NEAR(c.weights[1], 1.5, 1e-12);
}

TEST(Certificate, SinglePair)
{
    const auto c = markov_certificate(MomentSequence{{2.0, 0.0}, 1, 1});
    EXPECT_TRUE(c.spd);
    EXPECT_TRUE(c.interlaced);
    EXPECT_TRUE(c.weights_positive);
    EXPECT_TRUE(c.extended_singular);
}

TEST(Certificate, ZeroMoments)
{
    const auto c = markov_certificate(MomentSequence{{0.0, 0.0}, 1, 1});
    EXPECT_FALSE(c.spd);
    EXPECT_TRUE(c.extended_singular);
    EXPECT_FALSE(c.weights_positive);
}

TEST(Certificate, UnequalSplitNotApplicable)
{
    const auto c = markov_certificate(MomentSequence{{3.0, 5.0}, 2, 0});
    EXPECT_FALSE(c.interlace_applicable);
    EXPECT_FALSE(c.interlaced);
    EXPECT_TRUE(c.extended_singular);
}

TEST(Certificate, PropagatesNoSolution)
{
    EXPECT_THROW(markov_certificate(MomentSequence{{0.0, 1.0}, 1, 1}), Error);
}

TEST(ExtendedMatrix, AnnihilatesCoefficients)
{
    const MomentSequence m{{2.0, 6.0, 20.0, 66.0}, 2, 2};
    const Vector c = particular_coefficients(m);
    const Matrix e = extended_matrix(m, c);
    Vector v(3);
    v << 1.0, c(0), c(1);
    EXPECT_LE((e * v).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(e(2, 0), 122.0, 1e-12);
}

TEST(Density, Examples)
{
    const BranchSolution s1{{1.0}, {0.0}, 1};
    EXPECT_EQ(density_eval(s1, 0.5), 1.0);
    EXPECT_EQ(density_eval(s1, 2.0), 0.0);
    const BranchSolution s2{{1.0, 3.0}, {0.0, 2.0}, 2};
    EXPECT_EQ(density_eval(s2, 2.5), 1.0);
    EXPECT_EQ(density_eval(s2, 1.5), 0.0);
    EXPECT_EQ(density_eval(s2, 0.0), 0.0);
}

TEST(Density, NegativeBranches)
{
    const BranchSolution s{{-1.0}, {-2.0}, 1};
    EXPECT_EQ(density_eval(s, -1.5), 1.0);
    EXPECT_EQ(density_eval(s, -0.5), 0.0);
    EXPECT_EQ(density_eval(s, 0.5), 0.0);
}

TEST(Properties, SpdOnInterlacedInstances)
{
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int> size(1, 5);
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto inst = oracle::interlaced_instance(rng, size(rng));
        const auto c = markov_certificate(moments_of(inst.xs, inst.ys));
        EXPECT_TRUE(c.spd) << "trial " << trial;
        EXPECT_TRUE(c.weights_positive);
        EXPECT_TRUE(c.interlaced);
        EXPECT_TRUE(c.extended_singular);
    }
}

TEST(Properties, RepeatedXIsNotSpd)
{
    std::mt19937_64 rng(54);
    std::uniform_int_distribution<int> size(2, 4);
    for (int trial = 0; trial < 100; ++trial)
    {
        auto inst = oracle::interlaced_instance(rng, size(rng));
        inst.xs[1] = inst.xs[0];
        const auto m = moments_of(inst.xs, inst.ys);
        const Matrix a1r = system_of(m).A1 * reversal(m.n_x);
        EXPECT_FALSE(is_spd(a1r)) << "trial " << trial;
    }
}

// spd implies the recovered minimal solution interlaces.
TEST(Properties, SpdImpliesInterlaced)
{
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> size(1, 4);
    int spd_seen = 0;
    for (int trial = 0; trial < 300; ++trial)
    {
        const int n = size(rng);
        const auto v = oracle::separated_values(rng, 2 * n, -3.0, 3.0, 0.2);
        const std::vector<double> xs(v.begin(), v.begin() + n);
        const std::vector<double> ys(v.begin() + n, v.end());
        const auto c = markov_certificate(moments_of(xs, ys));
        if (c.spd)
        {
            ++spd_seen;
            EXPECT_TRUE(c.interlaced);
        }
    }
    EXPECT_GT(spd_seen, 10);
}

TEST(Properties, ExtendedSingularIncludingDegenerate)
{
    std::mt19937_64 rng(56);
    for (int trial = 0; trial < 200; ++trial)
    {
        auto inst = oracle::separated_instance(rng, 4, 4);
        if (trial % 2 == 1)
        {
            const double t = inst.xs[0] + 0.1;
            inst.xs.push_back(t);
            inst.ys.push_back(t);
        }
        const auto m = moments_of(inst.xs, inst.ys);
        const Vector c = particular_coefficients(m);
        EXPECT_LT(numeric_rank(extended_matrix(m, c)), m.n_x + 1) << "trial " << trial;
    }
}

TEST(Properties, QuadratureMatchesMoments)
{
    std::mt19937_64 rng(57);
    std::uniform_int_distribution<int> size(1, 4);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto inst = oracle::interlaced_instance(rng, size(rng));
        const BranchSolution sol{inst.xs, inst.ys, 0};
        const auto m = oracle::power_sums(inst.xs, inst.ys, 6);
        for (int k = 1; k <= 6; ++k)
        {
            const double q = quadrature_moment(sol, k, 10000);
            const double ref = m[static_cast<std::size_t>(k - 1)];
            EXPECT_LE(std::abs(q - ref), 1e-4 * std::max(1.0, std::abs(ref)))
                << "trial " << trial << " k " << k;
        }
    }
}
