///
/// \file transform.hpp
///
/// Moment sequences, the exponential-transform coefficients a_k and the
/// forward map from branch values to moments.
///
/// For branch values {x_j} (n_x of them) and {y_j} (n_y of them) the moments
/// are the signed power sums
///
///   m_k = sum_j x_j^k - sum_j y_j^k,     k = 1..K,  K = n_x + n_y,
///
/// and the sequence a_k is the Taylor expansion of exp(sum_k m_k z^k / k),
/// which equals q(z)/p(z) with p(z) = prod (1 - x_j z), q(z) = prod (1 - y_j z).
///
#ifndef MOMENTKIT_TRANSFORM_HPP
#define MOMENTKIT_TRANSFORM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <momentkit/common.hpp>

namespace momentkit
{

///
/// Moments m_1..m_K together with the branch split. `values[k-1]` holds m_k.
///
struct MomentSequence
{
    std::vector<double> values;
    int n_x = 0;
    int n_y = 0;

    int size() const noexcept
    {
        return static_cast<int>(values.size());
    }

    /// m_k with the 1-based index used in all formulas.
    double moment(int k) const
    {
        return values.at(static_cast<std::size_t>(k - 1));
    }

    /// Throws MalformedInput unless n_x, n_y >= 0, K >= 1 and n_x + n_y = K.
    void validate() const
    {
        if (n_x < 0 || n_y < 0)
        {
            throw Error(ErrorKind::MalformedInput,
                        "branch counts must be nonnegative");
        }
        if (values.empty())
        {
            throw Error(ErrorKind::MalformedInput,
                        "at least one moment is required");
        }
        if (n_x + n_y != size())
        {
            throw Error(ErrorKind::MalformedInput,
                        "n_x + n_y = " + std::to_string(n_x + n_y) +
                            " does not match the number of moments " +
                            std::to_string(size()));
        }
        for (double v : values)
        {
            if (!std::isfinite(v))
            {
                throw Error(ErrorKind::MalformedInput,
                            "moments must be finite");
            }
        }
    }

    /// The mirrored problem -m with the roles of n_x and n_y interchanged.
    MomentSequence mirrored() const
    {
        MomentSequence out{values, n_y, n_x};
        for (double& v : out.values)
        {
            v = -v;
        }
        return out;
    }
};

///
/// The sequence a_0..a_K. Reading a negative index yields 0; reading past K is
/// a logic error and throws std::out_of_range.
///
class ExpCoefficients
{
public:
    ExpCoefficients() = default;

    explicit ExpCoefficients(std::vector<double> values)
        : m_values(std::move(values))
    {
    }

    /// Largest available index K.
    int max_index() const noexcept
    {
        return static_cast<int>(m_values.size()) - 1;
    }

    double operator()(int k) const
    {
        if (k < 0)
        {
            return 0.0;
        }
        if (k > max_index())
        {
            throw std::out_of_range("a_" + std::to_string(k) +
                                    " requested but only a_0..a_" +
                                    std::to_string(max_index()) +
                                    " are available");
        }
        return m_values[static_cast<std::size_t>(k)];
    }

    const std::vector<double>& values() const noexcept
    {
        return m_values;
    }

    double max_abs() const noexcept
    {
        double r = 0.0;
        for (double v : m_values)
        {
            r = std::max(r, std::abs(v));
        }
        return r;
    }

private:
    std::vector<double> m_values;
};

///
/// Branch values of a solution. `degree` is the number of nonzero x-values.
///
struct BranchSolution
{
    std::vector<double> xs;
    std::vector<double> ys;
    int degree = 0;
};

///
/// Coefficients (ascending powers) of p(z) = prod(1 - x_j z) and
/// q(z) = prod(1 - y_j z), padded to lengths n_x + 1 and n_y + 1.
///
struct PolynomialPair
{
    std::vector<double> c;
    std::vector<double> d;
};

/// Product of two polynomials given by ascending coefficients.
inline std::vector<double> poly_multiply(std::span<const double> f,
                                         std::span<const double> g)
{
    if (f.empty() || g.empty())
    {
        return {};
    }
    std::vector<double> out(f.size() + g.size() - 1, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        for (std::size_t j = 0; j < g.size(); ++j)
        {
            out[i + j] += f[i] * g[j];
        }
    }
    return out;
}

///
/// Signed power sums m_k = sum x_j^k - sum y_j^k for k = 1..K.
///
/// Terms of each power are added in ascending magnitude so the result does not
/// depend on the order of the inputs.
///
inline MomentSequence forward_moments(std::span<const double> xs,
                                      std::span<const double> ys, int K)
{
    if (K < 1)
    {
        throw Error(ErrorKind::MalformedInput, "K must be positive");
    }
    MomentSequence out;
    out.n_x = static_cast<int>(xs.size());
    out.n_y = static_cast<int>(ys.size());
    out.values.resize(static_cast<std::size_t>(K));

    std::vector<double> terms;
    terms.reserve(xs.size() + ys.size());
    for (int k = 1; k <= K; ++k)
    {
        terms.clear();
        for (double x : xs)
        {
            terms.push_back(std::pow(x, k));
        }
        for (double y : ys)
        {
            terms.push_back(-std::pow(y, k));
        }
        std::sort(terms.begin(), terms.end(), [](double a, double b) {
            const double aa = std::abs(a);
            const double bb = std::abs(b);
            return aa < bb || (aa == bb && a < b);
        });
        double sum = 0.0;
        for (double t : terms)
        {
            sum += t;
        }
        out.values[static_cast<std::size_t>(k - 1)] = sum;
    }
    return out;
}

///
/// Coefficients a_0..a_K from m_1..m_K by forward substitution of
///
///   k a_k = m_k + sum_{j=1}^{k-1} m_j a_{k-j},   a_0 = 1.
///
inline ExpCoefficients exp_transform(std::span<const double> moments)
{
    const std::size_t K = moments.size();
    std::vector<double> a(K + 1, 0.0);
    a[0] = 1.0;
    for (std::size_t k = 1; k <= K; ++k)
    {
        double s = moments[k - 1];
        for (std::size_t j = 1; j < k; ++j)
        {
            s += moments[j - 1] * a[k - j];
        }
        a[k] = s / static_cast<double>(k);
    }
    return ExpCoefficients(std::move(a));
}

inline ExpCoefficients exp_transform(const MomentSequence& m)
{
    return exp_transform(std::span<const double>(m.values));
}

///
/// Inverse of exp_transform: m_k = k a_k - sum_{j=1}^{k-1} m_j a_{k-j}.
///
/// Throws MalformedInput when a_0 != 1.
///
inline std::vector<double> inv_exp_transform(const ExpCoefficients& a)
{
    if (a.max_index() < 0 || a(0) != 1.0)
    {
        throw Error(ErrorKind::MalformedInput,
                    "coefficient sequence must start with a_0 = 1");
    }
    const int K = a.max_index();
    std::vector<double> m(static_cast<std::size_t>(K), 0.0);
    for (int k = 1; k <= K; ++k)
    {
        double s = static_cast<double>(k) * a(k);
        for (int j = 1; j < k; ++j)
        {
            s -= m[static_cast<std::size_t>(j - 1)] * a(k - j);
        }
        m[static_cast<std::size_t>(k - 1)] = s;
    }
    return m;
}

namespace detail
{

inline std::vector<double> linear_factor_product(std::span<const double> roots)
{
    std::vector<double> poly{1.0};
    for (double r : roots)
    {
        if (r == 0.0)
        {
            continue;
        }
        const double factor[2] = {1.0, -r};
        poly = poly_multiply(poly, factor);
    }
    poly.resize(roots.size() + 1, 0.0);
    return poly;
}

} // namespace detail

inline PolynomialPair branch_to_polynomials(const BranchSolution& sol)
{
    return {detail::linear_factor_product(sol.xs),
            detail::linear_factor_product(sol.ys)};
}

} // namespace momentkit

#endif /* MOMENTKIT_TRANSFORM_HPP */
