///
/// \file markov.hpp
///
/// Weights, the Vandermonde-diagonal factorization of the Hankel blocks and
/// the certificates that relate a solution to the classical interlaced form
///
///   f(x) = sum_j chi_[y_j, x_j](x),    y_1 < x_1 < y_2 < ... < y_n < x_n.
///
/// For distinct x-values, with w_j = q_r(x_j) / p_r'(x_j),
///
///   a_{n_y - n_x + 1 + k} = sum_j w_j x_j^k,   A_1 R = V W V^T,
///   A_0 R = V W X V^T,
///
/// and A_1 R is symmetric positive definite iff the x-values are distinct and
/// all weights are positive.
///
#ifndef MOMENTKIT_MARKOV_HPP
#define MOMENTKIT_MARKOV_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include <momentkit/common.hpp>
#include <momentkit/inversion.hpp>
#include <momentkit/structure.hpp>
#include <momentkit/transform.hpp>

namespace momentkit
{

struct WeightData
{
    std::vector<double> xs;
    std::vector<double> weights;
};

namespace detail
{

inline double separation_tolerance(std::span<const double> values)
{
    double scale = 1.0;
    for (double v : values)
    {
        scale = std::max(scale, std::abs(v));
    }
    return 1e-8 * scale;
}

} // namespace detail

///
/// w_j = prod_i (x_j - y_i) / prod_{i != j} (x_j - x_i).
///
/// Throws RepeatedRoots when two x-values are closer than 1e-8 * max(1, |x|).
///
inline WeightData weights(std::span<const double> xs,
                          std::span<const double> ys)
{
    const double sep = detail::separation_tolerance(xs);
    WeightData out;
    out.xs.assign(xs.begin(), xs.end());
    out.weights.resize(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j)
    {
        double num = 1.0;
        for (double y : ys)
        {
            num *= xs[j] - y;
        }
        double den = 1.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            if (i == j)
            {
                continue;
            }
            const double diff = xs[j] - xs[i];
            if (std::abs(diff) <= sep)
            {
                throw Error(ErrorKind::RepeatedRoots,
                            "x-values " + std::to_string(xs[i]) + " and " +
                                std::to_string(xs[j]) +
                                " are not separated");
            }
            den *= diff;
        }
        out.weights[j] = num / den;
    }
    return out;
}

/// Anti-identity of size n.
inline Matrix reversal(Eigen::Index n)
{
    return Matrix::Identity(n, n).rowwise().reverse();
}

/// V(i, j) = x_j^i, i = 0..n-1.
inline Matrix vandermonde(std::span<const double> xs)
{
    const auto n = static_cast<Eigen::Index>(xs.size());
    Matrix v(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        double p = 1.0;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            v(i, j) = p;
            p *= xs[static_cast<std::size_t>(j)];
        }
    }
    return v;
}

///
/// max(||A_1 R - V W V^T||_inf, ||A_0 R - V W X V^T||_inf).
///
inline double factorization_residual(const ExpCoefficients& a,
                                     const HankelSystem& h,
                                     const WeightData& wd)
{
    const auto n = static_cast<Eigen::Index>(wd.xs.size());
    if (n != h.n_x || wd.weights.size() != wd.xs.size() ||
        a.max_index() != h.n_x + h.n_y)
    {
        throw Error(ErrorKind::DimensionMismatch,
                    "weight data does not match the Hankel system");
    }
    const Matrix r = reversal(n);
    const Matrix v = vandermonde(wd.xs);
    const Eigen::Map<const Vector> w(wd.weights.data(), n);
    const Eigen::Map<const Vector> x(wd.xs.data(), n);
    const Matrix vw = v * w.asDiagonal();
    const Matrix lhs1 = h.A1 * r - vw * v.transpose();
    const Matrix lhs0 = h.A0() * r - vw * x.asDiagonal() * v.transpose();
    auto inf_norm = [](const Matrix& m) {
        return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
    };
    return std::max(inf_norm(lhs1), inf_norm(lhs0));
}

///
/// max_k |sum_j w_j x_j^k - a_{n_y - n_x + 1 + k}| over k = 0..2 n_x - 2.
///
inline double residue_residual(const ExpCoefficients& a, int n_x, int n_y,
                               const WeightData& wd)
{
    if (static_cast<int>(wd.xs.size()) != n_x)
    {
        throw Error(ErrorKind::DimensionMismatch,
                    "weight data does not match n_x");
    }
    double worst = 0.0;
    for (int k = 0; k <= 2 * n_x - 2; ++k)
    {
        double s = 0.0;
        for (std::size_t j = 0; j < wd.xs.size(); ++j)
        {
            s += wd.weights[j] * std::pow(wd.xs[j], k);
        }
        worst = std::max(worst, std::abs(s - a(n_y - n_x + 1 + k)));
    }
    return worst;
}

namespace detail
{

// Cholesky attempt; false when a pivot is at or below the margin.
inline bool cholesky_succeeds(const Matrix& m, double margin)
{
    const Eigen::Index n = m.rows();
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        double pivot = m(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
        {
            pivot -= l(j, k) * l(j, k);
        }
        if (!(pivot > margin))
        {
            return false;
        }
        l(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < n; ++i)
        {
            double s = m(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
            {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / l(j, j);
        }
    }
    return true;
}

} // namespace detail

///
/// Symmetric positive definiteness of A_1 R: symmetry to 1e-10 (relative to
/// ||A_1 R||_inf) and a Cholesky factorization whose pivots all exceed
/// 1e-12 ||A_1 R||_inf.
///
inline bool is_spd(const Matrix& a1r)
{
    if (a1r.size() == 0)
    {
        return false;
    }
    const double norm = a1r.cwiseAbs().rowwise().sum().maxCoeff();
    if (norm == 0.0)
    {
        return false;
    }
    const double asym = (a1r - a1r.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * norm)
    {
        return false;
    }
    return detail::cholesky_succeeds(a1r, 1e-12 * norm);
}

///
/// The (n_x + 1) x (n_x + 1) matrix whose first n_x rows are A = (a_0 | A_1)
/// and whose last row continues the Hankel pattern,
/// (a_{K+1}, a_K, ..., a_{K+1-n_x}), with a_{K+1} = -sum_j c_j a_{K+1-j}.
/// It annihilates (1, c̄) whenever a solution exists.
///
inline Matrix extended_matrix(const MomentSequence& m, const Vector& c_bar)
{
    const int n_x = m.n_x;
    const int K = m.size();
    std::vector<double> a = exp_transform(m).values();
    double a_next = 0.0;
    for (int j = 1; j <= n_x; ++j)
    {
        a_next -= c_bar(j - 1) * a[static_cast<std::size_t>(K + 1 - j)];
    }
    a.push_back(a_next);
    const ExpCoefficients ext(std::move(a));

    Matrix e(n_x + 1, n_x + 1);
    for (int i = 1; i <= n_x + 1; ++i)
    {
        for (int j = 0; j <= n_x; ++j)
        {
            e(i - 1, j) = ext(m.n_y + i - j);
        }
    }
    return e;
}

struct MarkovCertificate
{
    bool spd = false;
    bool interlaced = false;
    /// Interlacing is only defined for n_x = n_y.
    bool interlace_applicable = false;
    bool extended_singular = false;
    bool weights_positive = false;
    /// Weights of the minimal solution; empty when its x-values repeat.
    std::vector<double> weights;
    BranchSolution solution;
};

///
/// Individual certificates for the data `m`. Propagates NoSolution and
/// NonRealSolution from the inversion.
///
inline MarkovCertificate markov_certificate(const MomentSequence& m,
                                            const Tolerances& tol = {})
{
    m.validate();
    MarkovCertificate out;
    out.interlace_applicable = (m.n_x == m.n_y);
    if (m.n_x == 0)
    {
        out.solution = invert_min_degree(m, Method::companion, tol);
        return out;
    }

    const ExpCoefficients a = exp_transform(m);
    const HankelSystem h = build_hankel(a, m.n_x, m.n_y, tol.rank);
    out.spd = is_spd(h.A1 * reversal(h.n_x));

    const Vector c_bar = particular_coefficients(m, tol);
    out.extended_singular =
        numeric_rank(extended_matrix(m, c_bar), tol.rank) < m.n_x + 1;

    out.solution = invert_min_degree(m, Method::companion, tol);
    try
    {
        out.weights = weights(out.solution.xs, out.solution.ys).weights;
        out.weights_positive =
            std::all_of(out.weights.begin(), out.weights.end(),
                        [](double w) { return w > 0.0; });
    }
    catch (const Error& e)
    {
        if (e.kind() != ErrorKind::RepeatedRoots)
        {
            throw;
        }
        out.weights.clear();
        out.weights_positive = false;
    }

    if (out.interlace_applicable)
    {
        std::vector<double> xs = out.solution.xs;
        std::vector<double> ys = out.solution.ys;
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        std::vector<double> all = xs;
        all.insert(all.end(), ys.begin(), ys.end());
        const double margin = detail::separation_tolerance(all);
        bool ok = true;
        for (std::size_t i = 0; i < xs.size() && ok; ++i)
        {
            ok = ys[i] + margin < xs[i];
            if (ok && i + 1 < ys.size())
            {
                ok = xs[i] + margin < ys[i + 1];
            }
        }
        out.interlaced = ok;
    }
    return out;
}

///
/// f(x) = sum_j [H(x) - H(x - x_j)] - sum_j [H(x) - H(x - y_j)] with
/// H(t) = 1 for t > 0 and 0 otherwise. Each term is sgn(v) times the indicator
/// of the interval between 0 and v, so zero branches contribute nothing and
/// k * int x^{k-1} f(x) dx = m_k.
///
inline double density_eval(const BranchSolution& sol, double x)
{
    auto step = [](double t) { return t > 0.0 ? 1.0 : 0.0; };
    double f = 0.0;
    for (double v : sol.xs)
    {
        f += step(x) - step(x - v);
    }
    for (double v : sol.ys)
    {
        f -= step(x) - step(x - v);
    }
    return f;
}

} // namespace momentkit

#endif /* MOMENTKIT_MARKOV_HPP */
