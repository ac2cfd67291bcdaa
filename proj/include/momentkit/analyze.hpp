///
/// \file analyze.hpp
///
#ifndef MOMENTKIT_ANALYZE_HPP
#define MOMENTKIT_ANALYZE_HPP

#include <momentkit/common.hpp>
#include <momentkit/inversion.hpp>
#include <momentkit/structure.hpp>
#include <momentkit/transform.hpp>

namespace momentkit
{

///
/// Existence, degree bounds, uniqueness and (when it exists and is real) the
/// minimal-degree solution. Never throws for a valid MomentSequence; an
/// unsolvable system is reported through `exists = false`.
///
/// Existence is in the sense of real-coefficient polynomial pairs. Data such
/// as m = (0, -2) with n_x = 2 is solvable with branch values ±i, so the
/// report has `exists = true`, no minimal solution and
/// `solution_error = NonRealSolution`.
///
inline SolvabilityReport analyze(const MomentSequence& m,
                                 const Tolerances& tol = {})
{
    m.validate();
    SolvabilityReport report;
    report.tol_rank = tol.rank;
    if (m.n_x == 0)
    {
        report.exists = true;
        report.unique = true;
    }
    else
    {
        const HankelSystem h = build_hankel(exp_transform(m), m.n_x, m.n_y,
                                            tol.rank);
        const SpanConditions sc = span_conditions(h);
        report.exists = sc.exists;
        report.rank_A1 = sc.rank_A1;
        report.d_min = sc.d_min;
        report.d_max = sc.d_max;
        report.unique = sc.unique;
    }
    if (!report.exists)
    {
        return report;
    }
    try
    {
        report.minimal_solution = invert_min_degree(m, Method::companion, tol);
    }
    catch (const Error& e)
    {
        report.solution_error = e.kind();
    }
    return report;
}

///
/// Family member built from a report: capacity is D_max - D_min.
///
inline BranchSolution family_member(const SolvabilityReport& report,
                                    std::span<const double> r_roots)
{
    if (!report.exists || !report.minimal_solution)
    {
        throw Error(ErrorKind::NoSolution,
                    "no real minimal solution to build a family from");
    }
    return family_member(*report.minimal_solution, r_roots,
                         report.d_max - report.d_min);
}

} // namespace momentkit

#endif /* MOMENTKIT_ANALYZE_HPP */
