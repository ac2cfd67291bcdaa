///
/// \file structure.hpp
///
/// Hankel matrices built from the coefficient sequence a_k, numeric ranks and
/// the span conditions that decide existence, uniqueness and the degree bounds
/// of solutions.
///
/// With K = n_x + n_y, the n_x x (n_x + 1) matrix
///
///   A(i, j) = a_{n_y + i - j},   i = 1..n_x,  j = 0..n_x,
///
/// has columns a_0 .. a_{n_x}. A_1 is the block of the last n_x columns. A
/// solution exists iff a_0 lies in range(A_1); D_min is the first j with
/// a_0 in span{a_1..a_j} (0 when a_0 = 0) and D_max = D_min + n_x - rank A_1.
///
#ifndef MOMENTKIT_STRUCTURE_HPP
#define MOMENTKIT_STRUCTURE_HPP

#include <algorithm>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <Eigen/SVD>

#include <momentkit/common.hpp>
#include <momentkit/transform.hpp>

namespace momentkit
{

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline double largest_singular_value(const Matrix& m)
{
    if (m.size() == 0)
    {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

///
/// Number of singular values strictly above `tol_rel * scale`. A zero or
/// empty matrix has rank 0.
///
inline int numeric_rank(const Matrix& m, double tol_rel, double scale)
{
    if (m.size() == 0 || scale <= 0.0)
    {
        return 0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    const double threshold = tol_rel * scale;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
    {
        if (s(i) > threshold)
        {
            ++rank;
        }
    }
    return rank;
}

/// Rank relative to the matrix's own largest singular value.
inline int numeric_rank(const Matrix& m, double tol_rel = 1e-9)
{
    return numeric_rank(m, tol_rel, largest_singular_value(m));
}

///
/// Minimum-norm least-squares solution of m x = rhs, discarding singular
/// values at or below `threshold`.
///
inline Vector min_norm_solve(const Matrix& m, const Vector& rhs,
                             double threshold)
{
    Vector x = Vector::Zero(m.cols());
    if (m.size() == 0)
    {
        return x;
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i)
    {
        if (s(i) > threshold)
        {
            x += svd.matrixV().col(i) *
                 (svd.matrixU().col(i).dot(rhs) / s(i));
        }
    }
    return x;
}

struct HankelSystem
{
    int n_x = 0;
    int n_y = 0;
    Matrix A;
    Vector a0;
    Matrix A1;
    int A1_rank = 0;
    int n_x_tilde = 0;
    int n_y_tilde = 0;
    Matrix A0_tilde;
    Matrix A1_tilde;
    /// Relative tolerance and reference scale (max of sigma_max(A), max|a_k|)
    /// used for every rank decision on this system.
    double tol_rel = 1e-9;
    double scale = 0.0;

    /// The first n_x columns of A.
    Matrix A0() const
    {
        return A.leftCols(n_x);
    }

    double rank_threshold() const noexcept
    {
        return tol_rel * scale;
    }
};

namespace detail
{

// Square Hankel-type block M(i, j) = a_{offset + i - j} with 1-based i, j.
inline Matrix toeplitz_block(const ExpCoefficients& a, int size, int offset)
{
    Matrix m(size, size);
    for (int i = 1; i <= size; ++i)
    {
        for (int j = 1; j <= size; ++j)
        {
            m(i - 1, j - 1) = a(offset + i - j);
        }
    }
    return m;
}

} // namespace detail

///
/// Builds A, a_0, A_1, the rank of A_1 and the reduced pair (Ã_0, Ã_1) of
/// size ñ_x = rank A_1, ñ_y = n_y - n_x + ñ_x:
///
///   Ã_0(i, j) = a_{ñ_y + 1 + i - j},   Ã_1(i, j) = a_{ñ_y + i - j}.
///
/// Ranks are measured against max(sigma_max(A), max|a_k|) so that an A_1 that
/// is tiny compared with a_0, or an A made only of rounding noise, is not
/// mistaken for full rank.
///
inline HankelSystem build_hankel(const ExpCoefficients& a, int n_x, int n_y,
                                 double tol_rel = 1e-9)
{
    if (n_x == 0)
    {
        throw Error(ErrorKind::NoPositiveBranches,
                    "n_x = 0: there are no positive branches to extract");
    }
    if (n_x < 0 || n_y < 0 || a.max_index() != n_x + n_y)
    {
        throw Error(ErrorKind::DimensionMismatch,
                    "coefficient sequence has " +
                        std::to_string(a.max_index() + 1) +
                        " entries but n_x + n_y + 1 = " +
                        std::to_string(n_x + n_y + 1));
    }

    HankelSystem h;
    h.n_x = n_x;
    h.n_y = n_y;
    h.tol_rel = tol_rel;
    h.A.resize(n_x, n_x + 1);
    for (int i = 1; i <= n_x; ++i)
    {
        for (int j = 0; j <= n_x; ++j)
        {
            h.A(i - 1, j) = a(n_y + i - j);
        }
    }
    h.a0 = h.A.col(0);
    h.A1 = h.A.rightCols(n_x);
    h.scale = std::max(largest_singular_value(h.A), a.max_abs());
    h.A1_rank = numeric_rank(h.A1, tol_rel, h.scale);
    h.n_x_tilde = h.A1_rank;
    h.n_y_tilde = std::max(0, n_y - n_x + h.n_x_tilde);
    h.A0_tilde = detail::toeplitz_block(a, h.n_x_tilde, h.n_y_tilde + 1);
    h.A1_tilde = detail::toeplitz_block(a, h.n_x_tilde, h.n_y_tilde);
    return h;
}

///
/// Existence, degree bounds and uniqueness read off the column spans of A.
///
struct SpanConditions
{
    bool exists = false;
    int rank_A1 = 0;
    int d_min = 0;
    int d_max = 0;
    bool unique = false;
};

///
/// Decides a_0 in range(A_1) by comparing rank A with rank A_1 and finds D_min
/// by growing the column prefix a_1..a_j. When no solution exists the bounds
/// are reported as D_min = 0, D_max = n_x - rank A_1.
///
inline SpanConditions span_conditions(const HankelSystem& h)
{
    SpanConditions out;
    const double scale = h.scale;
    out.rank_A1 = h.A1_rank;
    out.unique = (h.A1_rank == h.n_x);

    const int rank_A = numeric_rank(h.A, h.tol_rel, scale);
    out.exists = (rank_A == h.A1_rank);
    if (!out.exists)
    {
        out.d_min = 0;
        out.d_max = h.n_x - h.A1_rank;
        return out;
    }

    const double norm_A = h.A.cwiseAbs().rowwise().sum().maxCoeff();
    if (h.a0.cwiseAbs().maxCoeff() <= h.tol_rel * std::max(1.0, norm_A))
    {
        out.d_min = 0;
    }
    else
    {
        out.d_min = h.n_x;
        for (int j = 1; j <= h.n_x; ++j)
        {
            const int with_a0 = numeric_rank(h.A.leftCols(j + 1), h.tol_rel,
                                             scale);
            const int without = numeric_rank(h.A.middleCols(1, j), h.tol_rel,
                                             scale);
            if (with_a0 == without)
            {
                out.d_min = j;
                break;
            }
        }
    }
    out.d_max = out.d_min + h.n_x - h.A1_rank;
    return out;
}

///
/// Result of analyze(). `minimal_solution` is present only when a solution
/// exists and its branch values are real; otherwise `solution_error` names the
/// reason the branch values could not be produced.
///
struct SolvabilityReport
{
    bool exists = false;
    int rank_A1 = 0;
    int d_min = 0;
    int d_max = 0;
    bool unique = false;
    std::optional<BranchSolution> minimal_solution;
    std::optional<ErrorKind> solution_error;
    double tol_rank = 1e-9;
};

} // namespace momentkit

#endif /* MOMENTKIT_STRUCTURE_HPP */
