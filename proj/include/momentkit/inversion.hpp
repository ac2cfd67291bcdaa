///
/// \file inversion.hpp
///
/// Minimal-degree branch extraction, coefficient recovery, solution families
/// and propagation of higher moments.
///
/// The x-values of the minimal-degree solution are the nonzero roots of
///
///   P(z) = det(z I - Ã_1^{-1} Ã_0) = z^{ñ_x} + c_1 z^{ñ_x - 1} + ... + c_{ñ_x},
///
/// where Ã_1 c' = -ã_0 and ã_0 is the first column of Ã_0. Exactly
/// ñ_x - D_min of the roots are zero. The y-values come from the same
/// procedure applied to -m with n_x and n_y interchanged.
///
#ifndef MOMENTKIT_INVERSION_HPP
#define MOMENTKIT_INVERSION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <momentkit/common.hpp>
#include <momentkit/structure.hpp>
#include <momentkit/transform.hpp>

namespace momentkit
{

enum class Method
{
    geneig,
    companion,
};

using Complex = std::complex<double>;

///
/// Solves Ã_1 c' = -ã_0. Throws SingularReducedSystem when Ã_1 is numerically
/// singular, which means either that no solution exists or that the rank
/// tolerance is inappropriate for the data.
///
inline Vector companion_coefficients(const HankelSystem& h)
{
    const int n = h.n_x_tilde;
    if (n == 0)
    {
        return Vector(0);
    }
    if (numeric_rank(h.A1_tilde, h.tol_rel, h.scale) < n)
    {
        throw Error(ErrorKind::SingularReducedSystem,
                    "reduced matrix of size " + std::to_string(n) +
                        " is numerically singular");
    }
    Eigen::FullPivLU<Matrix> lu(h.A1_tilde);
    return lu.solve(-h.A0_tilde.col(0));
}

/// The companion matrix of P(z), first column -c', ones on the superdiagonal.
inline Matrix companion_matrix(const Vector& c_prime)
{
    const Eigen::Index n = c_prime.size();
    Matrix m = Matrix::Zero(n, n);
    m.col(0) = -c_prime;
    for (Eigen::Index i = 0; i + 1 < n; ++i)
    {
        m(i, i + 1) = 1.0;
    }
    return m;
}

namespace detail
{

// Eigenvalues read from the quasi-triangular real Schur factor.
inline std::vector<Complex> schur_eigenvalues(const Matrix& m)
{
    std::vector<Complex> out;
    const Eigen::Index n = m.rows();
    if (n == 0)
    {
        return out;
    }
    Eigen::RealSchur<Matrix> schur(m, /*computeU=*/false);
    if (schur.info() != Eigen::Success)
    {
        throw Error(ErrorKind::SingularReducedSystem,
                    "real Schur iteration did not converge");
    }
    const Matrix& t = schur.matrixT();
    Eigen::Index i = 0;
    while (i < n)
    {
        if (i + 1 == n || t(i + 1, i) == 0.0)
        {
            out.emplace_back(t(i, i), 0.0);
            ++i;
            continue;
        }
        const double a = t(i, i);
        const double b = t(i, i + 1);
        const double c = t(i + 1, i);
        const double d = t(i + 1, i + 1);
        const double half_trace = 0.5 * (a + d);
        const double disc = 0.25 * (a - d) * (a - d) + b * c;
        if (disc >= 0.0)
        {
            const double r = std::sqrt(disc);
            out.emplace_back(half_trace + r, 0.0);
            out.emplace_back(half_trace - r, 0.0);
        }
        else
        {
            const double r = std::sqrt(-disc);
            out.emplace_back(half_trace, r);
            out.emplace_back(half_trace, -r);
        }
        i += 2;
    }
    return out;
}

inline std::vector<Complex> pencil_eigenvalues(const HankelSystem& h,
                                               Method method)
{
    if (h.n_x_tilde == 0)
    {
        return {};
    }
    if (method == Method::companion)
    {
        return schur_eigenvalues(companion_matrix(companion_coefficients(h)));
    }
    if (numeric_rank(h.A1_tilde, h.tol_rel, h.scale) < h.n_x_tilde)
    {
        throw Error(ErrorKind::SingularReducedSystem,
                    "reduced matrix of size " + std::to_string(h.n_x_tilde) +
                        " is numerically singular");
    }
    // Ã_0 v = x Ã_1 v with Ã_1 invertible is the standard problem for
    // Ã_1^{-1} Ã_0.
    const Matrix reduced = Eigen::FullPivLU<Matrix>(h.A1_tilde).solve(h.A0_tilde);
    Eigen::EigenSolver<Matrix> es(reduced, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
    {
        throw Error(ErrorKind::SingularReducedSystem,
                    "eigenvalue iteration did not converge");
    }
    const auto& ev = es.eigenvalues();
    return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

// Ascending by value with zeros moved to the end.
inline void canonical_order(std::vector<double>& values)
{
    std::sort(values.begin(), values.end(), [](double a, double b) {
        const bool za = (a == 0.0);
        const bool zb = (b == 0.0);
        if (za != zb)
        {
            return zb;
        }
        return a < b;
    });
}

inline int count_nonzero(const std::vector<double>& values)
{
    return static_cast<int>(
        std::count_if(values.begin(), values.end(),
                      [](double v) { return v != 0.0; }));
}

} // namespace detail

///
/// Branch values of one side together with what was learned on the way.
///
struct SideExtraction
{
    /// n_x entries: the nonzero roots in canonical order, zero padded.
    std::vector<double> values;
    /// All ñ_x pencil eigenvalues before filtering.
    std::vector<Complex> eigenvalues;
    int n_x_tilde = 0;
    int d_min = 0;
    /// Eigenvalues discarded as zeros.
    int zeros_filtered = 0;
};

///
/// Extracts the x-values of the minimal-degree solution for `m` (use
/// `m.mirrored()` for the y-values).
///
inline SideExtraction extract_side(const MomentSequence& m, Method method,
                                   const Tolerances& tol)
{
    SideExtraction out;
    if (m.n_x == 0)
    {
        return out;
    }
    const ExpCoefficients a = exp_transform(m);
    const HankelSystem h = build_hankel(a, m.n_x, m.n_y, tol.rank);
    const SpanConditions sc = span_conditions(h);
    if (!sc.exists)
    {
        throw Error(ErrorKind::NoSolution,
                    "a_0 is not in the range of A_1: the moments admit no "
                    "solution with this branch split");
    }
    out.n_x_tilde = h.n_x_tilde;
    out.d_min = std::min(sc.d_min, h.n_x_tilde);
    out.eigenvalues = detail::pencil_eigenvalues(h, method);

    std::vector<Complex> roots = out.eigenvalues;
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        return std::abs(a) < std::abs(b);
    });
    // ñ_x - D_min of the eigenvalues are structurally zero; the rest are the
    // nonzero branch values. A remaining root below the zero threshold is
    // still treated as zero.
    const double zero_tol = tol.zero.value_or(1e-8 * (1.0 + a.max_abs()));
    const std::size_t structural =
        static_cast<std::size_t>(out.n_x_tilde - out.d_min);
    out.zeros_filtered = static_cast<int>(structural);
    for (std::size_t i = structural; i < roots.size(); ++i)
    {
        const Complex z = roots[i];
        if (std::abs(z) <= zero_tol)
        {
            ++out.zeros_filtered;
            continue;
        }
        if (std::abs(z.imag()) > tol.imag * (1.0 + std::abs(z.real())))
        {
            throw Error(ErrorKind::NonRealSolution,
                        "branch value has nonzero imaginary part: " +
                            std::to_string(z.real()) + " + " +
                            std::to_string(z.imag()) + "i");
        }
        out.values.push_back(z.real());
    }
    out.values.resize(static_cast<std::size_t>(m.n_x), 0.0);
    detail::canonical_order(out.values);
    return out;
}

struct InversionResult
{
    BranchSolution solution;
    SideExtraction x_side;
    SideExtraction y_side;
};

inline InversionResult invert_detailed(const MomentSequence& m,
                                       Method method = Method::companion,
                                       const Tolerances& tol = {})
{
    m.validate();
    InversionResult out;
    out.x_side = extract_side(m, method, tol);
    out.y_side = extract_side(m.mirrored(), method, tol);
    out.solution.xs = out.x_side.values;
    out.solution.ys = out.y_side.values;
    out.solution.degree = detail::count_nonzero(out.solution.xs);
    return out;
}

///
/// The minimal-degree solution: as many branch values as possible are zero.
///
/// Throws NoSolution, NonRealSolution or SingularReducedSystem.
///
inline BranchSolution invert_min_degree(const MomentSequence& m,
                                        Method method = Method::companion,
                                        const Tolerances& tol = {})
{
    return invert_detailed(m, method, tol).solution;
}

///
/// q-coefficients d_k = sum_{j=0}^{min(k, n_x)} c_j a_{k-j}, k = 0..n_y.
///
inline std::vector<double> d_coefficients(std::span<const double> c,
                                          const ExpCoefficients& a, int n_y)
{
    if (c.empty() || c[0] != 1.0)
    {
        throw Error(ErrorKind::MalformedInput,
                    "p-coefficients must start with c_0 = 1");
    }
    if (n_y < 0 || n_y > a.max_index())
    {
        throw Error(ErrorKind::DimensionMismatch,
                    "n_y exceeds the available coefficient sequence");
    }
    const int n_x = static_cast<int>(c.size()) - 1;
    std::vector<double> d(static_cast<std::size_t>(n_y + 1), 0.0);
    for (int k = 0; k <= n_y; ++k)
    {
        double s = 0.0;
        for (int j = 0; j <= std::min(k, n_x); ++j)
        {
            s += c[static_cast<std::size_t>(j)] * a(k - j);
        }
        d[static_cast<std::size_t>(k)] = s;
    }
    return d;
}

///
/// Adds each t in `r_roots` to both xs and ys of the minimal solution, which
/// multiplies p* and q* by the common factor r(z) = prod(1 - t z). `capacity`
/// is D_max - D_min. Each t occupies one zero slot on either side.
///
inline BranchSolution family_member(const BranchSolution& minimal,
                                    std::span<const double> r_roots,
                                    int capacity)
{
    if (static_cast<int>(r_roots.size()) > capacity)
    {
        throw Error(ErrorKind::FamilyOverflow,
                    std::to_string(r_roots.size()) +
                        " common roots requested but the family only has " +
                        std::to_string(capacity) + " degrees of freedom");
    }
    BranchSolution out = minimal;
    auto place = [](std::vector<double>& side, double t) {
        auto slot = std::find(side.begin(), side.end(), 0.0);
        if (slot == side.end())
        {
            throw Error(ErrorKind::FamilyOverflow,
                        "no zero branch left to hold a common root");
        }
        *slot = t;
    };
    for (double t : r_roots)
    {
        if (t == 0.0)
        {
            continue;
        }
        place(out.xs, t);
        place(out.ys, t);
    }
    detail::canonical_order(out.xs);
    detail::canonical_order(out.ys);
    out.degree = detail::count_nonzero(out.xs);
    return out;
}

///
/// One solution c̄ of A_1 c̄ = -a_0 (minimum norm when A_1 is singular).
/// Throws NoSolution when a_0 is not in range(A_1).
///
inline Vector particular_coefficients(const MomentSequence& m,
                                      const Tolerances& tol = {})
{
    m.validate();
    if (m.n_x == 0)
    {
        return Vector(0);
    }
    const HankelSystem h = build_hankel(exp_transform(m), m.n_x, m.n_y,
                                        tol.rank);
    if (!span_conditions(h).exists)
    {
        throw Error(ErrorKind::NoSolution,
                    "a_0 is not in the range of A_1: the moments admit no "
                    "solution with this branch split");
    }
    return min_norm_solve(h.A1, -h.a0, h.rank_threshold());
}

namespace detail
{

// Extends a_0..a_K and m_1..m_K by `count` terms using the recurrence
// a_k = -sum_j c_j a_{k-j} and m_k = k a_k - sum_{j<k} m_j a_{k-j}.
inline void propagate(std::vector<double>& a, std::vector<double>& m,
                      const Vector& c_bar, int count)
{
    const int n_x = static_cast<int>(c_bar.size());
    for (int step = 0; step < count; ++step)
    {
        const int k = static_cast<int>(m.size()) + 1;
        double ak = 0.0;
        for (int j = 1; j <= n_x; ++j)
        {
            if (k - j >= 0)
            {
                ak -= c_bar(j - 1) * a[static_cast<std::size_t>(k - j)];
            }
        }
        a.push_back(ak);
        double mk = static_cast<double>(k) * ak;
        for (int j = 1; j < k; ++j)
        {
            mk -= m[static_cast<std::size_t>(j - 1)] *
                  a[static_cast<std::size_t>(k - j)];
        }
        m.push_back(mk);
    }
}

} // namespace detail

///
/// m_{K+1} from a given solution c̄ of A_1 c̄ = -a_0. The value is the same for
/// every such c̄.
///
inline double next_moment_with(const MomentSequence& m, const Vector& c_bar)
{
    if (c_bar.size() != m.n_x)
    {
        throw Error(ErrorKind::DimensionMismatch,
                    "coefficient vector must have n_x entries");
    }
    std::vector<double> a = exp_transform(m).values();
    std::vector<double> moments = m.values;
    detail::propagate(a, moments, c_bar, 1);
    return moments.back();
}

///
/// The moment m_{K+1} = sum x_j^{K+1} - sum y_j^{K+1}, shared by every
/// solution, computed without extracting branch values.
///
inline double next_moment(const MomentSequence& m, const Tolerances& tol = {})
{
    return next_moment_with(m, particular_coefficients(m, tol));
}

///
/// m_1..m_{K+L}: the given moments followed by L higher power sums of the
/// solution. c̄ is fixed from the K-moment system.
///
inline std::vector<double> extend_moments(const MomentSequence& m, int count,
                                          const Tolerances& tol = {})
{
    if (count < 1)
    {
        throw Error(ErrorKind::MalformedInput, "count must be positive");
    }
    const Vector c_bar = particular_coefficients(m, tol);
    std::vector<double> a = exp_transform(m).values();
    std::vector<double> moments = m.values;
    detail::propagate(a, moments, c_bar, count);
    return moments;
}

} // namespace momentkit

#endif /* MOMENTKIT_INVERSION_HPP */
