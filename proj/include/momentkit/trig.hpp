///
/// \file trig.hpp
///
/// Trigonometric moments m_k = sum_j mu_j exp(i k lambda_j), k = 0..2r-1.
///
/// The nodes z_j = exp(i lambda_j) are the eigenvalues of the Hankel pencil
/// H_1 v = z H_0 v with H_0(i, j) = m_{i+j}, H_1(i, j) = m_{i+j+1}
/// (0-based, i, j < r). Amplitudes then follow from the square Vandermonde
/// system in the nodes against m_0..m_{r-1}.
///
#ifndef MOMENTKIT_TRIG_HPP
#define MOMENTKIT_TRIG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <momentkit/common.hpp>

namespace momentkit
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct TrigSignal
{
    /// Frequencies in (-pi, pi].
    std::vector<double> freqs;
    std::vector<Complex> amps;
};

struct TrigOptions
{
    /// Relative singular-value threshold for the rank of H_0.
    double rank = 1e-9;
    /// Smallest admissible distance between two recovered frequencies.
    double separation = 1e-6;
};

inline std::vector<Complex> trig_forward(const TrigSignal& sig, int count)
{
    if (count < 1)
    {
        throw Error(ErrorKind::MalformedInput, "count must be positive");
    }
    if (sig.freqs.size() != sig.amps.size())
    {
        throw Error(ErrorKind::DimensionMismatch,
                    "frequencies and amplitudes differ in length");
    }
    std::vector<Complex> m(static_cast<std::size_t>(count), Complex(0.0));
    for (int k = 0; k < count; ++k)
    {
        Complex s(0.0);
        for (std::size_t j = 0; j < sig.freqs.size(); ++j)
        {
            s += sig.amps[j] * std::polar(1.0, k * sig.freqs[j]);
        }
        m[static_cast<std::size_t>(k)] = s;
    }
    return m;
}

/// Distance between two angles on the circle.
inline double circular_distance(double a, double b)
{
    const double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

struct TrigInversion
{
    TrigSignal signal;
    /// Raw pencil eigenvalues before projection to the unit circle.
    std::vector<Complex> eigenvalues;
    /// max_j ||z_j| - 1|.
    double max_unit_deviation = 0.0;
};

inline TrigInversion trig_invert_detailed(std::span<const Complex> m, int r,
                                          const TrigOptions& opt = {})
{
    if (r < 1 || m.size() != static_cast<std::size_t>(2 * r))
    {
        throw Error(ErrorKind::MalformedInput,
                    "trig inversion needs exactly 2r moments for r modes");
    }
    ComplexMatrix h0(r, r);
    ComplexMatrix h1(r, r);
    for (int i = 0; i < r; ++i)
    {
        for (int j = 0; j < r; ++j)
        {
            h0(i, j) = m[static_cast<std::size_t>(i + j)];
            h1(i, j) = m[static_cast<std::size_t>(i + j + 1)];
        }
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(h0);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
    {
        if (s(i) > opt.rank * s(0))
        {
            ++rank;
        }
    }
    if (s(0) == 0.0 || rank < r)
    {
        throw Error(ErrorKind::RankDeficientSignal,
                    "Hankel matrix has numeric rank " + std::to_string(rank) +
                        " < " + std::to_string(r) + " modes");
    }

    const ComplexMatrix pencil = Eigen::FullPivLU<ComplexMatrix>(h0).solve(h1);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(pencil, false);
    if (es.info() != Eigen::Success)
    {
        throw Error(ErrorKind::IllConditionedNodes,
                    "eigenvalue iteration did not converge");
    }

    TrigInversion out;
    const ComplexVector& ev = es.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());

    std::vector<double> freqs;
    for (const Complex& z : out.eigenvalues)
    {
        out.max_unit_deviation =
            std::max(out.max_unit_deviation, std::abs(std::abs(z) - 1.0));
        double lambda = std::arg(z);
        if (lambda <= -std::numbers::pi)
        {
            lambda = std::numbers::pi;
        }
        freqs.push_back(lambda);
    }
    std::sort(freqs.begin(), freqs.end());
    for (std::size_t i = 0; i < freqs.size(); ++i)
    {
        for (std::size_t j = i + 1; j < freqs.size(); ++j)
        {
            if (circular_distance(freqs[i], freqs[j]) < opt.separation)
            {
                throw Error(ErrorKind::IllConditionedNodes,
                            "recovered frequencies " +
                                std::to_string(freqs[i]) + " and " +
                                std::to_string(freqs[j]) +
                                " are not separated");
            }
        }
    }

    ComplexMatrix v(r, r);
    ComplexVector rhs(r);
    for (int k = 0; k < r; ++k)
    {
        for (int j = 0; j < r; ++j)
        {
            v(k, j) = std::polar(1.0, k * freqs[static_cast<std::size_t>(j)]);
        }
        rhs(k) = m[static_cast<std::size_t>(k)];
    }
    const ComplexVector mu = Eigen::FullPivLU<ComplexMatrix>(v).solve(rhs);

    out.signal.freqs = freqs;
    out.signal.amps.assign(mu.data(), mu.data() + mu.size());
    return out;
}

///
/// Frequencies (ascending, in (-pi, pi]) and amplitudes of an r-mode signal
/// from its first 2r trigonometric moments. Throws RankDeficientSignal when
/// H_0 has numeric rank below r and IllConditionedNodes when two recovered
/// frequencies coincide within the separation tolerance.
///
inline TrigSignal trig_invert(std::span<const Complex> m, int r,
                              const TrigOptions& opt = {})
{
    return trig_invert_detailed(m, r, opt).signal;
}

} // namespace momentkit

#endif /* MOMENTKIT_TRIG_HPP */
