// Command-line front end. Requests and responses are JSON objects tagged with
// "schema": "momentkit/1".
#ifndef MOMENTKIT_TOOLS_CLI_HPP
#define MOMENTKIT_TOOLS_CLI_HPP

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <momentkit/momentkit.hpp>

namespace momentkit::cli
{

using json = nlohmann::ordered_json;

inline constexpr const char* schema = "momentkit/1";

enum ExitCode : int
{
    exit_ok = 0,
    exit_internal = 1,
    exit_no_solution = 2,
    exit_non_real = 3,
    exit_malformed = 4,
};

inline int exit_code_for(ErrorKind kind)
{
    switch (kind)
    {
        case ErrorKind::NoSolution:
            return exit_no_solution;
        case ErrorKind::NonRealSolution:
            return exit_non_real;
        case ErrorKind::MalformedInput:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::FamilyOverflow:
            return exit_malformed;
        default:
            return exit_internal;
    }
}

struct Options
{
    std::string input;
    std::optional<double> tol_rank;
    std::optional<double> tol_zero;
    std::optional<double> tol_imag;
    bool verbose = false;
    std::string method = "companion";
    int count = 0;
    int modes = 0;
    std::string r_roots;
};

namespace detail
{

[[noreturn]] inline void malformed(const std::string& what)
{
    throw Error(ErrorKind::MalformedInput, what);
}

inline void check_fields(const json& j, const std::set<std::string>& allowed)
{
    if (!j.is_object())
    {
        malformed("request must be a JSON object");
    }
    for (const auto& [key, value] : j.items())
    {
        if (key == "schema")
        {
            if (value != schema)
            {
                malformed("unsupported schema " + value.dump());
            }
            continue;
        }
        if (!allowed.contains(key))
        {
            malformed("unknown field \"" + key + "\"");
        }
    }
}

inline const json& required(const json& j, const char* key)
{
    const auto it = j.find(key);
    if (it == j.end())
    {
        malformed(std::string("missing field \"") + key + "\"");
    }
    return *it;
}

inline std::vector<double> real_array(const json& j, const char* key)
{
    const json& v = required(j, key);
    if (!v.is_array())
    {
        malformed(std::string("\"") + key + "\" must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& e : v)
    {
        if (!e.is_number())
        {
            malformed(std::string("\"") + key + "\" must be an array of numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

inline std::vector<Complex> complex_array(const json& j, const char* key)
{
    const json& v = required(j, key);
    if (!v.is_array())
    {
        malformed(std::string("\"") + key + "\" must be an array of [re, im] pairs");
    }
    std::vector<Complex> out;
    for (const auto& e : v)
    {
        if (e.is_number())
        {
            out.emplace_back(e.get<double>(), 0.0);
            continue;
        }
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
            !e[1].is_number())
        {
            malformed(std::string("\"") + key + "\" must be an array of [re, im] pairs");
        }
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

inline int count_field(const json& j, const char* key)
{
    const json& v = required(j, key);
    if (!v.is_number_integer())
    {
        malformed(std::string("\"") + key + "\" must be an integer");
    }
    return v.get<int>();
}

inline MomentSequence moment_request(const json& j)
{
    check_fields(j, {"moments", "n_x", "n_y"});
    MomentSequence m;
    m.values = real_array(j, "moments");
    m.n_x = count_field(j, "n_x");
    m.n_y = count_field(j, "n_y");
    m.validate();
    return m;
}

inline json complex_json(Complex z)
{
    return json::array({z.real(), z.imag()});
}

inline json complex_json(const std::vector<Complex>& zs)
{
    json out = json::array();
    for (const Complex& z : zs)
    {
        out.push_back(complex_json(z));
    }
    return out;
}

inline json solution_json(const BranchSolution& s)
{
    return {{"xs", s.xs}, {"ys", s.ys}, {"degree", s.degree}};
}

inline json tagged(json body)
{
    json out = {{"schema", schema}};
    out.update(body);
    return out;
}

inline std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (item.empty())
        {
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception&)
        {
            malformed("cannot parse \"" + item + "\" as a number");
        }
        if (used != item.size())
        {
            malformed("cannot parse \"" + item + "\" as a number");
        }
        out.push_back(v);
    }
    return out;
}

inline Tolerances tolerances(const Options& opt)
{
    Tolerances tol;
    if (opt.tol_rank)
    {
        tol.rank = *opt.tol_rank;
    }
    else if (const char* env = std::getenv("MOMENTKIT_TOL_RANK"))
    {
        try
        {
            tol.rank = std::stod(env);
        }
        catch (const std::exception&)
        {
            malformed("MOMENTKIT_TOL_RANK is not a number");
        }
    }
    tol.zero = opt.tol_zero;
    if (opt.tol_imag)
    {
        tol.imag = *opt.tol_imag;
    }
    if (!(tol.rank > 0.0) || !(tol.imag >= 0.0) ||
        (tol.zero && !(*tol.zero >= 0.0)))
    {
        malformed("tolerances must be positive");
    }
    return tol;
}

inline Method method_of(const std::string& name)
{
    if (name == "companion")
    {
        return Method::companion;
    }
    if (name == "geneig")
    {
        return Method::geneig;
    }
    malformed("unknown method \"" + name + "\"");
}

inline json forward_cmd(const json& req)
{
    check_fields(req, {"xs", "ys", "count"});
    const auto xs = real_array(req, "xs");
    const auto ys = req.contains("ys") ? real_array(req, "ys") : std::vector<double>{};
    const int count = req.contains("count")
                          ? count_field(req, "count")
                          : static_cast<int>(xs.size() + ys.size());
    const MomentSequence m = forward_moments(xs, ys, count);
    return {{"moments", m.values}, {"n_x", m.n_x}, {"n_y", m.n_y}};
}

inline json transform_cmd(const json& req)
{
    return {{"a", exp_transform(moment_request(req)).values()}};
}

inline json analyze_cmd(const json& req, const Tolerances& tol, bool verbose)
{
    const MomentSequence m = moment_request(req);
    const SolvabilityReport r = analyze(m, tol);
    json out = {{"exists", r.exists},
                {"rank_A1", r.rank_A1},
                {"d_min", r.d_min},
                {"d_max", r.d_max},
                {"unique", r.unique},
                {"minimal_solution", nullptr}};
    if (r.minimal_solution)
    {
        out["minimal_solution"] = solution_json(*r.minimal_solution);
    }
    if (r.solution_error)
    {
        out["solution_error"] = std::string(to_string(*r.solution_error));
    }
    if (verbose)
    {
        out["tol_rank"] = r.tol_rank;
    }
    return out;
}

inline json invert_cmd(const json& req, const Tolerances& tol, Method method,
                       bool verbose)
{
    const MomentSequence m = moment_request(req);
    const InversionResult r = invert_detailed(m, method, tol);
    json out = solution_json(r.solution);
    if (verbose)
    {
        out["eigenvalues_x"] = complex_json(r.x_side.eigenvalues);
        out["eigenvalues_y"] = complex_json(r.y_side.eigenvalues);
        out["zeros_filtered_x"] = r.x_side.zeros_filtered;
        out["zeros_filtered_y"] = r.y_side.zeros_filtered;
    }
    return out;
}

inline json next_cmd(const json& req, const Tolerances& tol, bool verbose)
{
    const MomentSequence m = moment_request(req);
    json out = {{"next_moment", next_moment(m, tol)}};
    if (verbose)
    {
        const Vector c = particular_coefficients(m, tol);
        out["c_bar"] = std::vector<double>(c.data(), c.data() + c.size());
        // The same value from the extracted branch values, for comparison.
        try
        {
            const BranchSolution s = invert_min_degree(m, Method::companion, tol);
            const MomentSequence direct =
                forward_moments(s.xs, s.ys, m.size() + 1);
            out["via_branches"] = direct.values.back();
        }
        catch (const Error& e)
        {
            out["via_branches"] = nullptr;
            out["via_branches_error"] = std::string(to_string(e.kind()));
        }
    }
    return out;
}

inline json extend_cmd(const json& req, const Tolerances& tol, int count)
{
    return {{"moments", extend_moments(moment_request(req), count, tol)}};
}

inline json family_cmd(const json& req, const Tolerances& tol,
                       const std::string& r_roots)
{
    const SolvabilityReport r = analyze(moment_request(req), tol);
    if (!r.exists)
    {
        throw Error(ErrorKind::NoSolution,
                    "the moments admit no solution with this branch split");
    }
    if (!r.minimal_solution)
    {
        throw Error(r.solution_error.value_or(ErrorKind::NoSolution),
                    "the minimal solution has no real branch values");
    }
    const auto roots = parse_list(r_roots);
    return solution_json(family_member(r, roots));
}

inline json markov_cmd(const json& req, const Tolerances& tol, bool verbose)
{
    const MarkovCertificate c = markov_certificate(moment_request(req), tol);
    json out = {{"spd", c.spd},
                {"interlaced", c.interlaced},
                {"interlace_applicable", c.interlace_applicable},
                {"extended_singular", c.extended_singular},
                {"weights_positive", c.weights_positive},
                {"weights", c.weights}};
    if (verbose)
    {
        out["solution"] = solution_json(c.solution);
    }
    return out;
}

inline json trig_invert_cmd(const json& req, const Tolerances& tol, int modes,
                            bool verbose)
{
    check_fields(req, {"moments"});
    const auto m = complex_array(req, "moments");
    const int r = modes > 0 ? modes : static_cast<int>(m.size() / 2);
    TrigOptions opt;
    opt.rank = tol.rank;
    const TrigInversion inv = trig_invert_detailed(m, r, opt);
    json out = {{"freqs", inv.signal.freqs},
                {"amps", complex_json(inv.signal.amps)}};
    if (verbose)
    {
        out["eigenvalues"] = complex_json(inv.eigenvalues);
        out["max_unit_deviation"] = inv.max_unit_deviation;
    }
    return out;
}

inline json trig_forward_cmd(const json& req, int count)
{
    check_fields(req, {"freqs", "amps"});
    TrigSignal sig;
    sig.freqs = real_array(req, "freqs");
    sig.amps = complex_array(req, "amps");
    return {{"moments", complex_json(trig_forward(sig, count))}};
}

inline json read_request(const Options& opt, std::istream& in)
{
    std::string text;
    if (opt.input.empty() || opt.input == "-")
    {
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    else
    {
        std::ifstream file(opt.input);
        if (!file)
        {
            malformed("cannot open input file " + opt.input);
        }
        text.assign(std::istreambuf_iterator<char>(file), {});
    }
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        malformed(std::string("invalid JSON: ") + e.what());
    }
}

inline void emit(std::ostream& out, const json& body)
{
    out << tagged(body).dump(2) << '\n';
}

inline void emit_error(std::ostream& out, std::string_view kind,
                       const std::string& detail)
{
    emit(out, {{"error", {{"kind", kind}, {"detail", detail}}}});
}

} // namespace detail

///
/// Runs one request. `args` excludes the program name. The response (or an
/// error object) goes to `out`; the return value is the process exit code.
///
inline int run(const std::vector<std::string>& args, std::istream& in,
               std::ostream& out)
{
    Options opt;
    CLI::App app{"Inversion of power-sum and trigonometric moment data", "momentkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--input", opt.input, "Read the request from a file instead of stdin");
    app.add_option("--tol-rank", opt.tol_rank, "Relative singular-value threshold (env MOMENTKIT_TOL_RANK)");
    app.add_option("--tol-zero", opt.tol_zero, "Absolute threshold below which roots count as zero");
    app.add_option("--tol-imag", opt.tol_imag, "Largest admissible |Im z| / (1 + |Re z|)");
    app.add_flag("--verbose", opt.verbose, "Include diagnostics");

    auto* forward = app.add_subcommand("forward", "Branch values to moments");
    auto* transform = app.add_subcommand("transform", "Moments to the exponential-transform coefficients");
    auto* analyze_sc = app.add_subcommand("analyze", "Existence, degree bounds, uniqueness");
    auto* invert = app.add_subcommand("invert", "Minimal-degree branch values");
    invert->add_option("--method", opt.method, "geneig or companion")
        ->check(CLI::IsMember({"geneig", "companion"}));
    auto* next = app.add_subcommand("next", "The next moment m_{K+1}");
    auto* extend = app.add_subcommand("extend", "Append L further moments");
    extend->add_option("--count", opt.count, "Number of moments to append")->required();
    auto* family = app.add_subcommand("family", "A non-minimal solution with common roots");
    family->add_option("--r-roots", opt.r_roots, "Comma-separated common roots")->required();
    auto* markov = app.add_subcommand("markov-check", "Interlacing certificates");
    auto* trig_inv = app.add_subcommand("trig-invert", "Frequencies and amplitudes from 2r trigonometric moments");
    trig_inv->add_option("--modes", opt.modes, "Number of modes r (default: half the moments)");
    auto* trig_fwd = app.add_subcommand("trig-forward", "Trigonometric moments of a signal");
    trig_fwd->add_option("--count", opt.count, "Number of moments")->required();

    std::vector<std::string> storage{"momentkit"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage)
    {
        argv.push_back(s.data());
    }
    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError& e)
    {
        detail::emit_error(out, to_string(ErrorKind::MalformedInput), e.what());
        return exit_malformed;
    }

    try
    {
        const Tolerances tol = detail::tolerances(opt);
        const json req = detail::read_request(opt, in);
        json body;
        if (*forward)
        {
            body = detail::forward_cmd(req);
        }
        else if (*transform)
        {
            body = detail::transform_cmd(req);
        }
        else if (*analyze_sc)
        {
            body = detail::analyze_cmd(req, tol, opt.verbose);
        }
        else if (*invert)
        {
            body = detail::invert_cmd(req, tol, detail::method_of(opt.method),
                                      opt.verbose);
        }
        else if (*next)
        {
            body = detail::next_cmd(req, tol, opt.verbose);
        }
        else if (*extend)
        {
            body = detail::extend_cmd(req, tol, opt.count);
        }
        else if (*family)
        {
            body = detail::family_cmd(req, tol, opt.r_roots);
        }
        else if (*markov)
        {
            body = detail::markov_cmd(req, tol, opt.verbose);
        }
        else if (*trig_inv)
        {
            body = detail::trig_invert_cmd(req, tol, opt.modes, opt.verbose);
        }
        else if (*trig_fwd)
        {
            body = detail::trig_forward_cmd(req, opt.count);
        }
        detail::emit(out, body);
        return exit_ok;
    }
    catch (const Error& e)
    {
        detail::emit_error(out, to_string(e.kind()), e.what());
        return exit_code_for(e.kind());
    }
    catch (const json::exception& e)
    {
        detail::emit_error(out, to_string(ErrorKind::MalformedInput), e.what());
        return exit_malformed;
    }
    catch (const std::exception& e)
    {
        detail::emit_error(out, "Internal", e.what());
        return exit_internal;
    }
}

} // namespace momentkit::cli

#endif
