#include "daniell/cli.hpp"

#include "daniell/acceptance.hpp"
#include "daniell/darboux.hpp"
#include "daniell/determinants.hpp"
#include "daniell/expr.hpp"
#include "daniell/extension.hpp"
#include "daniell/geometry.hpp"
#include "daniell/improper.hpp"
#include "daniell/potentials.hpp"
#include "daniell/serialize.hpp"
#include "daniell/special.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>

namespace daniell {

using ojson = nlohmann::ordered_json;

namespace {

ojson optional_number(const std::optional<double>& v)
{
    return v ? ojson(*v) : ojson(nullptr);
}

ojson trend_json(const EndpointReport& e)
{
    return {{"endpoint", e.endpoint}, {"nodes", e.nodes},           {"partials", e.partials},
            {"accelerated", e.accelerated}, {"stabilized", e.stabilized}, {"limit", e.limit}};
}

/// Enclosure fields in the order {value, lower, upper, width, evals, mesh}.
ojson enclosure_json(const Enclosure& e)
{
    return ojson{{"value", e.value()}, {"lower", e.lower},      {"upper", e.upper},
                 {"width", e.width()}, {"evals", e.evaluations}, {"mesh", e.mesh}};
}

}  // namespace

std::string to_json_text(const RunResult& r)
{
    ojson j;
    j["value"] = {{"re", r.value.real()}, {"im", r.value.imag()}};
    j["lower"] = optional_number(r.lower);
    j["upper"] = optional_number(r.upper);
    j["abs_error_bound"] = optional_number(r.abs_error_bound);
    j["classification"] = r.classification ? ojson(*r.classification) : ojson(nullptr);
    j["evaluations"] = r.evaluations;
    j["wall_time"] = optional_number(r.wall_time);
    return j.dump();
}

namespace {

/// Splits on commas (or the given separator) outside parentheses.
std::vector<std::string> split_top(const std::string& s, char sep = ',')
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

/// A constant: inf, -inf, or an expression without variables such as "pi/2".
double parse_scalar(const std::string& text)
{
    const std::string s = trim(text);
    if (s == "inf" || s == "+inf" || s == "infinity") return INFINITY;
    if (s == "-inf" || s == "-infinity") return -INFINITY;
    const Expr e = Expr::parse(s);
    if (!e.free_variables().empty()) throw DomainError("'" + s + "' must be a constant");
    return e.evaluate({});
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    for (const auto& p : split_top(text)) out.push_back(parse_scalar(p));
    return out;
}

vector_t to_vector(const std::vector<double>& v)
{
    vector_t x(Eigen::Index(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) x[Eigen::Index(i)] = v[i];
    return x;
}

Box parse_box(const std::string& lo, const std::string& hi)
{
    const auto a = parse_list(lo), b = parse_list(hi);
    if (a.size() != b.size()) throw DomainError("--lo and --hi have different lengths");
    return Box(to_vector(a), to_vector(b));
}

std::vector<std::string> default_vars(std::size_t d)
{
    if (d == 1) return {"x"};
    if (d > 9) throw DomainError("at most 9 coordinates");
    std::vector<std::string> v;
    for (std::size_t i = 1; i <= d; ++i) v.push_back("x" + std::to_string(i));
    return v;
}

std::vector<std::string> parse_vars(const std::string& text, std::size_t d)
{
    if (text.empty()) return default_vars(d);
    std::vector<std::string> v;
    for (const auto& p : split_top(text)) v.push_back(trim(p));
    if (v.size() != d) throw DomainError("variable list length differs from the dimension");
    return v;
}

/// Ambient coordinates of a point in R^d: x1..xd, plus x as an alias of x1 when d = 1.
Integrand ambient_integrand(const std::string& text, int d)
{
    const Expr e = Expr::parse(text, default_vars(std::size_t(d)));
    return to_integrand(e);
}

MatrixX<Rational> parse_matrix(const std::string& text)
{
    const auto rows = split_top(text, ';');
    std::vector<std::vector<Rational>> cells;
    for (const auto& r : rows) {
        std::vector<Rational> row;
        for (const auto& c : split_top(r)) {
            const Expr e = Expr::parse(trim(c));
            if (e.root().kind == ExprKind::number) {
                row.push_back(e.root().number);
            } else if (e.root().kind == ExprKind::negate && e.root().args[0]->kind == ExprKind::number) {
                row.push_back(-e.root().args[0]->number);
            } else {
                throw DomainError("matrix entries must be rational literals");
            }
        }
        if (!cells.empty() && row.size() != cells.front().size()) throw DomainError("ragged matrix");
        cells.push_back(std::move(row));
    }
    MatrixX<Rational> m(Eigen::Index(cells.size()), Eigen::Index(cells.front().size()));
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = 0; j < cells[i].size(); ++j) m(Eigen::Index(i), Eigen::Index(j)) = cells[i][j];
    return m;
}

struct Common {
    bool json = false;
    bool serial = false;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    std::optional<double> lipschitz;
};

Modulus modulus_for(const Common& c, const Expr& e, const Box& box)
{
    if (c.lipschitz) return Modulus::lipschitz(*c.lipschitz);
    if (auto l = polynomial_lipschitz(e, box)) return Modulus::lipschitz(*l);
    throw DomainError("certified mode needs --lipschitz L unless the integrand is a polynomial");
}

Chart named_chart(const std::string& name, double radius, double a, double b, double tau, int m)
{
    if (name == "polar") return charts::polar();
    if (name == "spherical") return charts::spherical();
    if (name == "sphere") return charts::sphere(radius);
    if (name == "hemisphere") return charts::hemisphere_angles(radius);
    if (name == "torus") return charts::torus(a, b);
    if (name == "circle") return charts::circle(radius);
    if (name == "coil") return charts::coil(a, b, tau);
    if (name == "simplex") return charts::simplex(m);
    throw DomainError("unknown chart '" + name + "' (polar, spherical, sphere, hemisphere, torus, circle, coil, simplex)");
}

/// Chart from ';'-separated component expressions over a parameter box.
Chart expression_chart(const std::string& map, const std::string& params, const Box& domain)
{
    const auto vars = parse_vars(params, std::size_t(domain.dim()));
    std::vector<Expr> comps;
    for (const auto& c : split_top(map, ';')) comps.push_back(Expr::parse(trim(c), vars));
    Chart ch;
    ch.m = int(domain.dim());
    ch.d = int(comps.size());
    ch.domain = domain;
    ch.phi = [comps](const vector_t& u) {
        vector_t x(Eigen::Index(comps.size()));
        for (std::size_t i = 0; i < comps.size(); ++i)
            x[Eigen::Index(i)] = comps[i].eval(std::span<const double>(u.data(), std::size_t(u.size())));
        return x;
    };
    return ch;
}

RunResult from_quadrature(const QuadratureResult& q)
{
    RunResult r;
    r.value = q.value;
    r.abs_error_bound = q.error;
    r.evaluations = q.evaluations;
    return r;
}

void print_text(std::ostream& out, const RunResult& r)
{
    out.precision(17);
    out << "value: " << r.value.real();
    if (r.value.imag() != 0) out << (r.value.imag() < 0 ? " - " : " + ") << std::abs(r.value.imag()) << "i";
    out << '\n';
    if (r.lower) out << "lower: " << *r.lower << '\n';
    if (r.upper) out << "upper: " << *r.upper << '\n';
    if (r.abs_error_bound) out << "error bound: " << *r.abs_error_bound << '\n';
    if (r.classification) out << "classification: " << *r.classification << '\n';
    out << "evaluations: " << r.evaluations << '\n';
    if (r.wall_time) out << "wall time: " << *r.wall_time << " s\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Integration engine with exact step functions and certified enclosures", "daniell"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    Common common;
    app.add_flag("--json", common.json, "Emit the run result as one JSON line");
    app.add_flag("--serial", common.serial, "Bit-exact mode: single thread, no wall time in the output");
    app.add_option("--tol", common.tol, "Absolute tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", common.seed, "Seed for randomized subcommands");
    app.add_option("--lipschitz", common.lipschitz, "Declared Lipschitz constant for certified modes");

    // Extra output the subcommand prints before the run result, if any.
    std::function<RunResult(std::ostream&)> run;
    int failure_code = exit_code::ok;

    // integrate
    std::string expr, im, lo = "0", hi = "1", vars;
    bool certified = false, enclosure = false;
    auto* integrate_cmd = app.add_subcommand("integrate", "Integral of an expression over a box");
    integrate_cmd->add_option("expr", expr, "Integrand (real part)")->required();
    integrate_cmd->add_option("--im", im, "Imaginary part");
    integrate_cmd->add_option("--lo", lo, "Lower corner, comma separated (inf allowed)");
    integrate_cmd->add_option("--hi", hi, "Upper corner, comma separated (inf allowed)");
    integrate_cmd->add_option("--vars", vars, "Variable names (default x, or x1..xd)");
    integrate_cmd->add_flag("--certified", certified, "Certified enclosure (needs a modulus)");
    integrate_cmd->add_flag("--enclosure", enclosure, "Print the enclosure JSON {value, lower, upper, width, evals, mesh}");
    integrate_cmd->callback([&] {
        run = [&](std::ostream& o) {
            const Box box = parse_box(lo, hi);
            const Expr re = Expr::parse(expr, parse_vars(vars, std::size_t(box.dim())));
            if (certified) {
                if (!im.empty()) throw DomainError("certified mode is real-valued");
                const Enclosure e = certified_integral(to_integrand(re), box, modulus_for(common, re, box), common.tol);
                if (enclosure) o << enclosure_json(e).dump() << '\n';
                RunResult r;
                r.value = e.value();
                r.lower = e.lower;
                r.upper = e.upper;
                r.abs_error_bound = 0.5 * e.width();
                r.evaluations = e.evaluations;
                return r;
            }
            QuadratureOptions opts;
            opts.abs_tol = common.tol;
            const auto qr = integrate_box(to_integrand(re), box, opts);
            if (!qr.converged) throw ResourceError("cubature did not reach the tolerance within the evaluation cap");
            RunResult r = from_quadrature(qr);
            if (!im.empty()) {
                const Expr ie = Expr::parse(im, re.variables());
                const auto qi = integrate_box(to_integrand(ie), box, opts);
                if (!qi.converged) throw ResourceError("cubature of the imaginary part did not converge");
                r.value = complex_t(qr.value, qi.value);
                r.abs_error_bound = qr.error + qi.error;
                r.evaluations += qi.evaluations;
            }
            return r;
        };
    });

    // bracket
    double eps = 1e-3;
    std::size_t max_steps = 16;
    auto* bracket_cmd = app.add_subcommand("bracket", "Darboux bracket certificate on a bounded box");
    bracket_cmd->add_option("expr", expr, "Integrand")->required();
    bracket_cmd->add_option("--lo", lo, "Lower corner");
    bracket_cmd->add_option("--hi", hi, "Upper corner");
    bracket_cmd->add_option("--vars", vars, "Variable names");
    bracket_cmd->add_option("--eps", eps, "Target gap")->check(CLI::PositiveNumber);
    bracket_cmd->add_option("--max-steps", max_steps, "Largest refinement index n (2^(n-1) cells per axis)");
    bracket_cmd->add_flag("--enclosure", enclosure, "Print the enclosure JSON {value, lower, upper, width, evals, mesh}");
    bracket_cmd->callback([&] {
        run = [&](std::ostream& o) {
            const Box box = parse_box(lo, hi);
            const Expr e = Expr::parse(expr, parse_vars(vars, std::size_t(box.dim())));
            const Modulus mod = modulus_for(common, e, box);
            const Integrand f = to_integrand(e);
            std::uint64_t evals = 0;
            auto side = [&, f, mod, box](bool upper) -> Generator {
                return [&evals, f, mod, box, upper](std::size_t n) {
                    const auto p = MultiPartition::uniform(box, 1 << (n - 1));
                    evals += p.cell_count();
                    const auto pair = darboux_pair(f, p, mod);
                    return upper ? pair.upper : pair.lower;
                };
            };
            const auto cert = certify_bracket({side(false), side(true)}, to_rational(eps), max_steps);
            RunResult r;
            r.lower = to_double_down(cert.lower);
            r.upper = to_double_up(cert.upper);
            r.value = 0.5 * (*r.lower + *r.upper);
            r.abs_error_bound = 0.5 * (*r.upper - *r.lower);
            r.evaluations = evals / 2;
            if (enclosure) {
                Enclosure en{*r.lower, *r.upper, r.evaluations, 0.0, true};
                double mesh = 0;
                for (Eigen::Index j = 0; j < box.dim(); ++j)
                    mesh = std::max(mesh, (box.hi[j] - box.lo[j]) / double(1 << (cert.index - 1)));
                en.mesh = mesh;
                o << enclosure_json(en).dump() << '\n';
            }
            return r;
        };
    });

    // improper
    bool smooth_tail = false, trends = false;
    std::optional<double> split;
    std::string ilo = "0", ihi = "inf";
    auto* improper_cmd = app.add_subcommand("improper", "Improper integral with endpoint limits and classification");
    improper_cmd->add_option("expr", expr, "Integrand in x")->required();
    improper_cmd->add_option("--lo", ilo, "Lower limit (inf allowed)");
    improper_cmd->add_option("--hi", ihi, "Upper limit (inf allowed)");
    improper_cmd->add_option("--split", split, "Interior split point");
    improper_cmd->add_flag("--smooth-tail", smooth_tail, "Map infinite ends to a finite interval");
    improper_cmd->add_flag("--trends", trends, "Print {re, im, classification, endpoint_trends} before the result");
    improper_cmd->callback([&] {
        run = [&](std::ostream& o) {
            const Function1 f = to_function(Expr::parse(expr, {"x"}));
            ImproperOptions opts;
            opts.tol = common.tol;
            opts.smooth_tail = smooth_tail;
            opts.split = split;
            const auto res = improper_integral(f, parse_scalar(ilo), parse_scalar(ihi), opts);
            if (trends)
                o << ojson{{"re", res.value.real()},
                           {"im", res.value.imag()},
                           {"classification", to_string(res.classification)},
                           {"endpoint_trends", {{"lower", trend_json(res.lower)}, {"upper", trend_json(res.upper)}}}}
                         .dump()
                  << '\n';
            RunResult r;
            r.value = res.value;
            r.classification = to_string(res.classification);
            r.evaluations = res.evaluations;
            if (res.classification == Classification::divergent || res.classification == Classification::unknown)
                failure_code = exit_code::numeric;
            return r;
        };
    });

    // laplace
    double rate = 1, r0 = 0.5;
    int levels = 12;
    bool limit = false;
    auto* laplace_cmd = app.add_subcommand("laplace", "Laplace transform of f(t) at r, or its limit r -> 0+");
    laplace_cmd->add_option("expr", expr, "Function of t")->required();
    laplace_cmd->add_option("--r", rate, "Transform variable r > 0");
    laplace_cmd->add_flag("--limit", limit, "Extrapolate r -> 0+ from r0 2^-k");
    laplace_cmd->add_option("--r0", r0, "Largest r used by --limit");
    laplace_cmd->add_option("--levels", levels, "Number of radii used by --limit");
    laplace_cmd->callback([&] {
        run = [&](std::ostream&) {
            const Function1 f = to_function(Expr::parse(expr, {"t"}));
            RunResult r;
            if (limit) {
                const auto l = laplace_limit_r0(f, common.tol, r0, levels);
                r.value = l.value;
                if (l.estimates.size() >= 2)
                    r.abs_error_bound = std::abs(l.estimates.back() - l.estimates[l.estimates.size() - 2]);
                r.classification = l.stabilized ? "stabilized" : "not_stabilized";
                if (!l.stabilized) failure_code = exit_code::numeric;
            } else {
                r.value = laplace_transform(f, rate, common.tol);
            }
            return r;
        };
    });

    // fourier
    double xi = 0;
    std::string flo = "-inf", fhi = "inf";
    auto* fourier_cmd = app.add_subcommand("fourier", "Integral of f(x) e^{-i x xi}");
    fourier_cmd->add_option("expr", expr, "Function of x")->required();
    fourier_cmd->add_option("--xi", xi, "Frequency");
    fourier_cmd->add_option("--lo", flo, "Lower end of the support");
    fourier_cmd->add_option("--hi", fhi, "Upper end of the support");
    fourier_cmd->callback([&] {
        run = [&](std::ostream&) {
            RunResult r;
            r.value = fourier_transform(to_function(Expr::parse(expr, {"x"})), parse_scalar(flo), parse_scalar(fhi), xi,
                                        common.tol);
            return r;
        };
    });

    // surface and jacobian share the chart options
    std::string chart_name, map, params, integrand = "1", dlo, dhi;
    double radius = 1, ca = 2, cb = 1, tau = 2 * M_PI;
    int simplex_m = 2;
    auto chart_options = [&](CLI::App* cmd) {
        cmd->add_option("--chart", chart_name, "polar, spherical, sphere, hemisphere, torus, circle, coil, simplex");
        cmd->add_option("--map", map, "Custom parametrization: ';'-separated components");
        cmd->add_option("--params", params, "Parameter names for --map (default x, or x1..xm)");
        cmd->add_option("--lo", dlo, "Parameter box lower corner (required with --map)");
        cmd->add_option("--hi", dhi, "Parameter box upper corner");
        cmd->add_option("--radius", radius, "Radius for sphere, hemisphere, circle");
        cmd->add_option("--a", ca, "Torus or coil parameter a");
        cmd->add_option("--b", cb, "Torus or coil parameter b");
        cmd->add_option("--tau", tau, "Coil parameter range");
        cmd->add_option("--m", simplex_m, "Simplex dimension");
        cmd->add_option("--integrand", integrand, "Function of the ambient coordinates x1..xd (x when d = 1)");
    };
    auto make_chart = [&]() {
        Chart c;
        if (!map.empty()) {
            if (dlo.empty() || dhi.empty()) throw DomainError("--map needs --lo and --hi");
            c = expression_chart(map, params, parse_box(dlo, dhi));
        } else if (!chart_name.empty()) {
            c = named_chart(chart_name, radius, ca, cb, tau, simplex_m);
            if (!dlo.empty() || !dhi.empty()) {
                const Box b = parse_box(dlo.empty() ? "0" : dlo, dhi.empty() ? "1" : dhi);
                if (b.dim() != c.m) throw DomainError("parameter box has the wrong dimension");
                c.domain = b;
            }
        } else {
            throw DomainError("give --chart or --map");
        }
        return c;
    };
    auto* surface_cmd = app.add_subcommand("surface", "Surface integral (area when no integrand) over a chart");
    chart_options(surface_cmd);
    surface_cmd->callback([&] {
        run = [&](std::ostream&) {
            const Chart c = make_chart();
            return from_quadrature(surface_integral(c, ambient_integrand(integrand, c.d), common.tol));
        };
    });
    auto* jacobian_cmd = app.add_subcommand("jacobian", "Change of variables: g(phi(u)) |det phi'(u)| over the chart domain");
    chart_options(jacobian_cmd);
    jacobian_cmd->callback([&] {
        run = [&](std::ostream&) {
            const Chart c = make_chart();
            if (c.m != c.d) throw DomainError("jacobian needs a square chart (m = d)");
            return from_quadrature(jacobian_integrate(c, ambient_integrand(integrand, c.d), common.tol));
        };
    });

    // coarea with psi = |x|
    int dim = 2;
    double v0 = 0.5, v1 = 1;
    auto* coarea_cmd = app.add_subcommand("coarea", "Coarea check for psi = |x| on the shell v0 < |x| < v1");
    coarea_cmd->add_option("--f", integrand, "Function of x1..xd")->required();
    coarea_cmd->add_option("--dim", dim, "2 or 3")->check(CLI::IsMember({2, 3}));
    coarea_cmd->add_option("--v0", v0, "Inner radius");
    coarea_cmd->add_option("--v1", v1, "Outer radius");
    coarea_cmd->callback([&] {
        run = [&](std::ostream& o) {
            if (!(0 <= v0 && v0 < v1)) throw DomainError("need 0 <= v0 < v1");
            const Integrand f = ambient_integrand(integrand, dim);
            const double a = v0, b = v1;
            const Integrand shell = [f, a, b](const vector_t& x) {
                const double n = x.norm();
                return n > a && n < b ? f(x) : 0.0;
            };
            const VectorMap grad = [](const vector_t& x) -> vector_t {
                const double n = x.norm();
                return n > 0 ? vector_t(x / n) : vector_t(vector_t::Zero(x.size()));
            };
            const int d = dim;
            const LevelCharts lv = [d](double v) {
                return std::vector<Chart>{d == 2 ? charts::circle(v) : charts::sphere(v)};
            };
            const Box box(vector_t::Constant(dim, -b), vector_t::Constant(dim, b));
            const auto rep = coarea_check(grad, shell, box, lv, a, b, common.tol);
            if (!common.json) o << "volume side: " << rep.volume_side << "\nlevel side: " << rep.level_side << '\n';
            RunResult r;
            r.value = rep.volume_side;
            r.abs_error_bound = rep.discrepancy();
            return r;
        };
    });

    // potential
    std::string density, at, grid, grid_out;
    double gamma = 1, delta = 0.1, decay_m = 1, decay_beta = 4;
    bool log_kernel = false, adaptive = false;
    auto* potential_cmd = app.add_subcommand("potential", "Newton/Coulomb potential or the planar log potential");
    potential_cmd->add_option("--density", density, "rho as a function of x1..xd")->required();
    potential_cmd->add_option("--dim", dim, "1, 2 or 3")->check(CLI::IsMember({1, 2, 3}));
    potential_cmd->add_option("--gamma", gamma, "Kernel exponent (gamma < d)");
    potential_cmd->add_option("--at", at, "Evaluation point, comma separated");
    potential_cmd->add_option("--delta", delta, "Initial singular-ball radius");
    potential_cmd->add_option("--decay-m", decay_m, "Decay certificate M in |rho| <= M (1 + |y|)^-beta");
    potential_cmd->add_option("--decay-beta", decay_beta, "Decay certificate beta");
    potential_cmd->add_flag("--log", log_kernel, "Planar potential -integral rho log|x - y| (d = 2)");
    potential_cmd->add_flag("--adaptive", adaptive, "Adaptive sphere cubature (discontinuous densities)");
    potential_cmd->add_option("--grid", grid, "lo,hi,n: export phi and its gradient on an n^d lattice as JSON lines");
    potential_cmd->add_option("--grid-out", grid_out, "File for the grid export (default: standard output)");
    potential_cmd->callback([&] {
        run = [&](std::ostream& o) {
            Density rho;
            rho.d = dim;
            rho.rho = ambient_integrand(density, dim);
            rho.decay_m = decay_m;
            rho.decay_beta = decay_beta;
            SphereRule rule;
            rule.adaptive = adaptive;
            if (log_kernel && dim != 2) throw DomainError("--log needs --dim 2");
            const bool has_gradient = !log_kernel && dim - gamma - 1 > 0;
            auto value_at = [&](const vector_t& x) {
                return log_kernel ? log_potential_2d(rho, x, delta, common.tol, rule)
                                  : coulomb_potential(rho, gamma, x, delta, common.tol, rule);
            };
            if (!grid.empty()) {
                const auto g = parse_list(grid);
                if (g.size() != 3 || !(g[2] >= 1)) throw DomainError("--grid expects lo,hi,n");
                const int n = int(g[2]);
                std::ofstream file;
                if (!grid_out.empty()) {
                    file.open(grid_out);
                    if (!file) throw DomainError("cannot open " + grid_out);
                }
                std::ostream& sink = grid_out.empty() ? o : file;
                std::vector<int> idx(std::size_t(dim), 0);
                for (;;) {
                    vector_t x(dim);
                    for (int j = 0; j < dim; ++j)
                        x[j] = n == 1 ? g[0] : g[0] + (g[1] - g[0]) * idx[std::size_t(j)] / (n - 1);
                    ojson line;
                    line["x"] = std::vector<double>(x.data(), x.data() + x.size());
                    line["phi"] = value_at(x).value;
                    if (has_gradient) {
                        const auto gr = coulomb_gradient(rho, gamma, x, delta, common.tol, rule).value;
                        line["grad"] = std::vector<double>(gr.data(), gr.data() + gr.size());
                    } else {
                        line["grad"] = nullptr;
                    }
                    sink << line.dump() << '\n';
                    int j = 0;
                    while (j < dim && ++idx[std::size_t(j)] == n) idx[std::size_t(j++)] = 0;
                    if (j == dim) break;
                }
            }
            const vector_t x = at.empty() ? vector_t(vector_t::Zero(dim)) : to_vector(parse_list(at));
            if (x.size() != dim) throw DomainError("--at has the wrong dimension");
            const auto p = value_at(x);
            if (has_gradient && !common.json && grid.empty()) {
                const auto gr = coulomb_gradient(rho, gamma, x, delta, common.tol, rule).value;
                o << "gradient:";
                for (int j = 0; j < dim; ++j) o << ' ' << gr[j];
                o << '\n';
            }
            RunResult r;
            r.value = p.value;
            r.abs_error_bound = p.error_budget();
            r.evaluations = p.evaluations;
            return r;
        };
    });

    // tile
    std::string inside;
    int level = 4;
    bool emit = false;
    auto* tile_cmd = app.add_subcommand("tile", "Dyadic tiles whose closures lie in the open set {g > 0}");
    tile_cmd->add_option("--inside", inside, "g as a function of x (d = 1) or x1..xd")->required();
    tile_cmd->add_option("--lo", lo, "Bounding box lower corner");
    tile_cmd->add_option("--hi", hi, "Bounding box upper corner");
    tile_cmd->add_option("--level", level, "Dyadic level k (cells of side 2^-k)")->check(CLI::Range(0, 30));
    tile_cmd->add_flag("--emit", emit, "Print the tiles as JSON lines");
    tile_cmd->callback([&] {
        run = [&](std::ostream& o) {
            const Box box = parse_box(lo, hi);
            const Expr g = Expr::parse(inside, default_vars(std::size_t(box.dim())));
            const Modulus mod = modulus_for(common, g, box);
            const Integrand gi = to_integrand(g);
            std::uint64_t evals = 0;
            // Sound up to rounding: g(center) minus the modulus at the half diagonal stays positive.
            const ClosureInside test = [&](const Rectangle& cell) {
                vector_t c(Eigen::Index(cell.dim()));
                double half = 0;
                for (std::size_t j = 0; j < cell.dim(); ++j) {
                    const double a = to_double_down(cell.axis(j).lo()), b = to_double_up(cell.axis(j).hi());
                    c[Eigen::Index(j)] = 0.5 * (a + b);
                    half += 0.25 * (b - a) * (b - a);
                }
                ++evals;
                const double v = gi(c);
                return std::isfinite(v) && v - mod(std::sqrt(half)) > 1e-12 * (1 + std::abs(v));
            };
            std::vector<Rational> rlo, rhi;
            for (Eigen::Index j = 0; j < box.dim(); ++j) {
                rlo.push_back(to_rational(box.lo[j]));
                rhi.push_back(to_rational(box.hi[j]));
            }
            const Tiling tiling = dyadic_tiling(test, level, Rectangle::closed(rlo, rhi));
            std::size_t count = 0;
            tiling.for_each([&](const Rectangle& r) {
                ++count;
                if (emit) o << to_json(r).dump() << '\n';
            });
            const Rational vol = tiling.volume();
            RunResult r;
            r.value = to_double(vol);
            r.lower = to_double_down(vol);
            r.evaluations = evals;
            if (!common.json) o << "tiles: " << count << "\nvolume (exact): " << to_string(vol) << '\n';
            return r;
        };
    });

    // detcheck
    int count = 100, max_size = 5;
    std::string mat_a, mat_b;
    auto* det_cmd = app.add_subcommand("detcheck", "Sylvester and Cauchy-Binet identities in exact arithmetic");
    det_cmd->add_option("--count", count, "Random integer instances")->check(CLI::NonNegativeNumber);
    det_cmd->add_option("--max-size", max_size, "Largest matrix dimension")->check(CLI::Range(2, 8));
    det_cmd->add_option("--a", mat_a, "Explicit A (m x n): rows separated by ';', entries by ','");
    det_cmd->add_option("--b", mat_b, "Explicit B (n x m)");
    det_cmd->callback([&] {
        run = [&](std::ostream& o) {
            std::vector<std::pair<MatrixX<Rational>, MatrixX<Rational>>> cases;
            if (!mat_a.empty() || !mat_b.empty()) {
                if (mat_a.empty() || mat_b.empty()) throw DomainError("--a and --b go together");
                cases.emplace_back(parse_matrix(mat_a), parse_matrix(mat_b));
            } else {
                std::mt19937_64 rng(common.seed);
                std::uniform_int_distribution<int> entry(-5, 5);
                for (int i = 0; i < count; ++i) {
                    const int n = std::uniform_int_distribution<int>(2, max_size)(rng);
                    const int m = std::uniform_int_distribution<int>(1, n - 1)(rng);
                    MatrixX<Rational> a(m, n), b(n, m);
                    for (int p = 0; p < m; ++p)
                        for (int q = 0; q < n; ++q) {
                            a(p, q) = entry(rng);
                            b(q, p) = entry(rng);
                        }
                    cases.emplace_back(a, b);
                }
            }
            int holds = 0;
            for (const auto& [a, b] : cases) {
                bool ok = sylvester_identity_check(a, b).holds;
                if (a.rows() < a.cols()) {
                    const auto cb = cauchy_binet_check(a, b);
                    ok = ok && cb.classical_holds && cb.complementary_holds;
                    if (!common.json && cases.size() == 1)
                        o << "det(AB) = " << to_string(cb.det_ab) << ", column subsets " << to_string(cb.column_subsets)
                          << ", principal minors of BA " << to_string(cb.complementary) << '\n';
                }
                holds += ok ? 1 : 0;
            }
            RunResult r;
            r.value = holds;
            r.classification = holds == int(cases.size()) ? "holds" : "fails";
            r.evaluations = cases.size();
            if (holds != int(cases.size())) failure_code = exit_code::numeric;
            return r;
        };
    });

    // classic
    std::string key;
    std::vector<std::string> param_list;
    bool list = false;
    auto* classic_cmd = app.add_subcommand("classic", "Named closed-form integrals");
    classic_cmd->add_option("name", key, "Catalog key");
    classic_cmd->add_option("--param", param_list, "Parameter override name=value (repeatable)");
    classic_cmd->add_flag("--list", list, "List the catalog");
    classic_cmd->callback([&] {
        run = [&](std::ostream& o) {
            RunResult r;
            if (list) {
                for (const auto& e : catalog()) {
                    o << e.key << "  " << e.description;
                    for (const auto& [k, v] : e.defaults) o << "  " << k << '=' << v;
                    o << '\n';
                }
                r.value = double(catalog().size());
                return r;
            }
            if (key.empty()) throw DomainError("classic needs a name (see --list)");
            CatalogParams params;
            for (const auto& p : param_list) {
                const auto eq = p.find('=');
                if (eq == std::string::npos) throw DomainError("--param expects name=value");
                params[trim(p.substr(0, eq))] = parse_scalar(p.substr(eq + 1));
            }
            const auto rep = named_catalog_eval(key, common.tol, params);
            r.value = rep.value;
            r.abs_error_bound = rep.abs_error;
            r.classification = to_string(rep.classification);
            if (!rep.pass) failure_code = exit_code::numeric;
            return r;
        };
    });

    // selftest
    bool quick = false;
    auto* self_cmd = app.add_subcommand("selftest", "Acceptance criteria with pass/fail lines");
    self_cmd->add_flag("--quick", quick, "Smaller instance counts; skips the Poisson criterion");
    self_cmd->callback([&] {
        run = [&](std::ostream& o) {
            const auto results = run_acceptance(quick, common.json ? err : o);
            int passed = 0;
            for (const auto& c : results) passed += c.pass ? 1 : 0;
            RunResult r;
            r.value = passed;
            r.classification = passed == int(results.size()) ? "pass" : "fail";
            if (passed != int(results.size())) failure_code = exit_code::numeric;
            return r;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        out.precision(17);
        RunResult r = run(out);
        if (!common.serial)
            r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (common.json)
            out << to_json_text(r) << '\n';
        else
            print_text(out, r);
        return failure_code;
    } catch (const PartialEnclosureError& e) {
        err << "resource cap: " << e.what() << '\n';
        RunResult r;
        r.lower = e.partial().lower;
        r.upper = e.partial().upper;
        r.value = e.partial().value();
        r.abs_error_bound = 0.5 * e.partial().width();
        r.evaluations = e.partial().evaluations;
        r.classification = "partial";
        if (common.json) out << to_json_text(r) << '\n';
        return exit_code::resource;
    } catch (const ResourceError& e) {
        err << "resource cap: " << e.what() << '\n';
        return exit_code::resource;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return exit_code::numeric;
    }
}

}  // namespace daniell
