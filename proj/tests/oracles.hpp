// Independent reference computations and random instance generators used by
// the unit and acceptance suites. Nothing here calls into the library's
// algorithmic paths.
#ifndef MOMENTKIT_TESTS_ORACLES_HPP
#define MOMENTKIT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace oracle
{

// m_k = sum x^k - sum y^k in long double, plain accumulation order.
inline std::vector<double> power_sums(std::span<const double> xs,
                                      std::span<const double> ys, int K)
{
    std::vector<double> m(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k)
    {
        long double s = 0.0L;
        for (double x : xs)
        {
            long double p = 1.0L;
            for (int i = 0; i < k; ++i)
            {
                p *= x;
            }
            s += p;
        }
        for (double y : ys)
        {
            long double p = 1.0L;
            for (int i = 0; i < k; ++i)
            {
                p *= y;
            }
            s -= p;
        }
        m[static_cast<std::size_t>(k - 1)] = static_cast<double>(s);
    }
    return m;
}

// Coefficients of prod (1 - r z), ascending, via repeated synthetic
// multiplication in long double.
inline std::vector<long double> reciprocal_root_poly(std::span<const double> roots)
{
    std::vector<long double> p{1.0L};
    for (double r : roots)
    {
        p.push_back(0.0L);
        for (std::size_t i = p.size() - 1; i >= 1; --i)
        {
            p[i] -= static_cast<long double>(r) * p[i - 1];
        }
    }
    return p;
}

// First `count` Taylor coefficients of num(z) / den(z) by long division;
// requires den[0] == 1.
template <typename T>
std::vector<T> series_divide(const std::vector<T>& num,
                             const std::vector<T>& den, int count)
{
    std::vector<T> out(static_cast<std::size_t>(count), T(0));
    for (int k = 0; k < count; ++k)
    {
        T s = k < static_cast<int>(num.size()) ? num[static_cast<std::size_t>(k)]
                                               : T(0);
        for (int j = 1; j <= k && j < static_cast<int>(den.size()); ++j)
        {
            s -= den[static_cast<std::size_t>(j)] *
                 out[static_cast<std::size_t>(k - j)];
        }
        out[static_cast<std::size_t>(k)] = s;
    }
    return out;
}

// Taylor coefficients a_0..a_K of q(z)/p(z) for the given branch values.
inline std::vector<double> taylor_of_quotient(std::span<const double> xs,
                                              std::span<const double> ys,
                                              int K)
{
    const auto p = reciprocal_root_poly(xs);
    const auto q = reciprocal_root_poly(ys);
    const auto a = series_divide(q, p, K + 1);
    return std::vector<double>(a.begin(), a.end());
}

inline std::int64_t ipow(std::int64_t b, int e)
{
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i)
    {
        r *= b;
    }
    return r;
}

// Bottleneck distance between two real multisets of equal size.
inline double multiset_distance(std::vector<double> a, std::vector<double> b)
{
    if (a.size() != b.size())
    {
        return INFINITY;
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

inline double max_abs(std::span<const double> v)
{
    double r = 0.0;
    for (double x : v)
    {
        r = std::max(r, std::abs(x));
    }
    return r;
}

inline double min_abs(std::span<const double> v)
{
    double r = INFINITY;
    for (double x : v)
    {
        r = std::min(r, std::abs(x));
    }
    return r;
}

// ||a - b||_inf / max(||b||_inf, tiny)
inline double relative_error(std::span<const double> a,
                             std::span<const double> b)
{
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        diff = std::max(diff, std::abs(a[i] - b[i]));
    }
    return diff / std::max(max_abs(b), 1e-300);
}

// `count` values in [lo, hi] with pairwise gaps >= gap, by rejection.
inline std::vector<double> separated_values(std::mt19937_64& rng, int count,
                                            double lo, double hi, double gap,
                                            std::span<const double> avoid = {})
{
    std::uniform_real_distribution<double> dist(lo, hi);
    for (;;)
    {
        std::vector<double> v;
        bool ok = true;
        for (int i = 0; i < count && ok; ++i)
        {
            const double c = dist(rng);
            for (double w : v)
            {
                ok = ok && std::abs(c - w) >= gap;
            }
            for (double w : avoid)
            {
                ok = ok && std::abs(c - w) >= gap;
            }
            v.push_back(c);
        }
        if (ok)
        {
            return v;
        }
    }
}

struct Instance
{
    std::vector<double> xs;
    std::vector<double> ys;
};

// Distinct branch values in [-3, 3], pairwise gap >= 0.2 over xs and ys
// together, 1 <= n_x <= max_x and 0 <= n_y <= max_y.
inline Instance separated_instance(std::mt19937_64& rng, int max_x, int max_y,
                                   double gap = 0.2)
{
    std::uniform_int_distribution<int> nx(1, max_x);
    std::uniform_int_distribution<int> ny(0, max_y);
    const int n_x = nx(rng);
    const int n_y = ny(rng);
    auto all = separated_values(rng, n_x + n_y, -3.0, 3.0, gap);
    std::shuffle(all.begin(), all.end(), rng);
    return {std::vector<double>(all.begin(), all.begin() + n_x),
            std::vector<double>(all.begin() + n_x, all.end())};
}

// Interlaced y_1 < x_1 < ... < y_n < x_n in [-3, 3] with gaps >= gap.
inline Instance interlaced_instance(std::mt19937_64& rng, int n,
                                    double gap = 0.2)
{
    auto v = separated_values(rng, 2 * n, -3.0, 3.0, gap);
    std::sort(v.begin(), v.end());
    Instance out;
    for (int i = 0; i < n; ++i)
    {
        out.ys.push_back(v[static_cast<std::size_t>(2 * i)]);
        out.xs.push_back(v[static_cast<std::size_t>(2 * i + 1)]);
    }
    return out;
}

// Direct DFT bin q of a length-N sequence, scaled by 1/N.
inline std::complex<double> dft_bin(std::span<const std::complex<double>> s,
                                    int q)
{
    const auto n = static_cast<double>(s.size());
    std::complex<double> acc(0.0);
    for (std::size_t k = 0; k < s.size(); ++k)
    {
        acc += s[k] * std::polar(1.0, -2.0 * std::numbers::pi * q *
                                          static_cast<double>(k) / n);
    }
    return acc / n;
}

} // namespace oracle

#endif
