#include "daniell/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace daniell {

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
    : DomainError(message + " at offset " + std::to_string(offset)), offset_(offset), expected_(std::move(expected))
{
}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

const std::vector<std::string> function_names{"abs", "sqrt", "exp", "log", "sin", "cos", "tan", "atan", "sinc"};

NodePtr make(ExprKind kind, std::vector<NodePtr> args = {})
{
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->args = std::move(args);
    return n;
}

NodePtr make_call(const std::string& name, std::vector<NodePtr> args)
{
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::call;
    n->name = name;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

    NodePtr run()
    {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) fail({"operator", "end of input"}, "unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& msg) const
    {
        throw ParseError(pos_, std::move(expected), msg);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr()
    {
        auto left = term();
        for (;;) {
            if (accept('+'))
                left = make(ExprKind::add, {left, term()});
            else if (accept('-'))
                left = make(ExprKind::sub, {left, term()});
            else
                return left;
        }
    }

    NodePtr term()
    {
        auto left = factor();
        for (;;) {
            if (accept('*')) {
                left = make(ExprKind::mul, {left, factor()});
            } else if (accept('/')) {
                auto right = factor();
                const ExprNode& l = *left;
                if (l.kind == ExprKind::call && l.name == "sin" && l.args.size() == 1 &&
                    structurally_equal(*l.args[0], *right))
                    left = make_call("sinc", {right});
                else
                    left = make(ExprKind::div, {left, right});
            } else {
                return left;
            }
        }
    }

    NodePtr factor()
    {
        if (accept('-')) return make(ExprKind::negate, {factor()});
        return power();
    }

    NodePtr power()
    {
        auto base = atom();
        if (accept('^')) return make(ExprKind::pow, {base, factor()});
        return base;
    }

    std::string digits()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    // Leading zeros would make the string constructor read octal.
    static BigInt decimal(const std::string& d)
    {
        const auto first = d.find_first_not_of('0');
        return first == std::string::npos ? BigInt(0) : BigInt(d.substr(first));
    }

    NodePtr number()
    {
        std::string whole = digits();
        Rational q{decimal(whole)};
        if (pos_ + 1 < s_.size() && s_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
            ++pos_;
            const std::string frac = digits();
            BigInt den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            q = Rational(decimal(whole + frac), den);
        } else if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
            ++pos_;
            const std::size_t at = pos_;
            const BigInt den = decimal(digits());
            if (den == 0) throw ParseError(at, {"nonzero denominator"}, "zero denominator in rational literal");
            q = Rational(decimal(whole), den);
        }
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::number;
        n->number = q;
        n->approx = to_double(q);
        return n;
    }

    NodePtr atom()
    {
        skip();
        const std::vector<std::string> expected{"number", "identifier", "(", "-"};
        if (pos_ >= s_.size()) fail(expected, "unexpected end of input");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!accept(')')) fail({")"}, "missing ')'");
            return e;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail(expected, "unexpected '" + std::string(1, c) + "'");
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            if (std::find(function_names.begin(), function_names.end(), name) == function_names.end())
                throw ParseError(start, function_names, "unknown function '" + name + "'");
            ++pos_;
            std::vector<NodePtr> args{expr()};
            while (accept(',')) args.push_back(expr());
            if (!accept(')')) fail({",", ")"}, "missing ')'");
            const std::size_t max_args = name == "atan" ? 2 : 1;
            if (args.size() > max_args)
                throw ParseError(start, {}, name + " takes " + std::to_string(max_args) + " argument(s)");
            return make_call(name, std::move(args));
        }
        if (name == "pi" || name == "e") {
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprKind::constant;
            n->name = name;
            return n;
        }
        const auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) {
            std::vector<std::string> known{"pi", "e"};
            known.insert(known.end(), vars_.begin(), vars_.end());
            throw ParseError(start, known, "unknown identifier '" + name + "'");
        }
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::variable;
        n->name = name;
        n->slot = int(it - vars_.begin());
        return n;
    }
};

struct Evaluator {
    std::span<const double> values;
    const char* fault = nullptr;

    double faulted(const char* what)
    {
        if (!fault) fault = what;
        return NAN;
    }

    double operator()(const ExprNode& n)
    {
        switch (n.kind) {
        case ExprKind::number:
            return n.approx;
        case ExprKind::constant:
            return n.name == "pi" ? M_PI : M_E;
        case ExprKind::variable:
            return values[std::size_t(n.slot)];
        case ExprKind::negate:
            return -(*this)(*n.args[0]);
        case ExprKind::add:
            return (*this)(*n.args[0]) + (*this)(*n.args[1]);
        case ExprKind::sub:
            return (*this)(*n.args[0]) - (*this)(*n.args[1]);
        case ExprKind::mul:
            return (*this)(*n.args[0]) * (*this)(*n.args[1]);
        case ExprKind::div: {
            const double a = (*this)(*n.args[0]), b = (*this)(*n.args[1]);
            if (b == 0) return faulted("division by zero");
            return a / b;
        }
        case ExprKind::pow: {
            const double a = (*this)(*n.args[0]), b = (*this)(*n.args[1]);
            const double v = std::pow(a, b);
            if (!std::isfinite(v) && std::isfinite(a) && std::isfinite(b)) return faulted("power outside its domain");
            return v;
        }
        case ExprKind::call:
            return call(n);
        }
        return NAN;
    }

    double call(const ExprNode& n)
    {
        const double u = (*this)(*n.args[0]);
        if (std::isnan(u)) return u;
        const std::string& f = n.name;
        if (f == "abs") return std::abs(u);
        if (f == "sqrt") return u < 0 ? faulted("sqrt of a negative number") : std::sqrt(u);
        if (f == "exp") return std::exp(u);
        if (f == "log") return u <= 0 ? faulted("log of a non-positive number") : std::log(u);
        if (f == "sin") return std::sin(u);
        if (f == "cos") return std::cos(u);
        if (f == "tan") return std::tan(u);
        if (f == "atan") return n.args.size() == 2 ? std::atan2(u, (*this)(*n.args[1])) : std::atan(u);
        if (f == "sinc") return u == 0 ? 1.0 : std::sin(u) / u;
        return faulted("unknown function");
    }
};

void print_node(const ExprNode& n, std::ostream& os)
{
    auto binary = [&](const char* op) {
        os << '(';
        print_node(*n.args[0], os);
        os << ' ' << op << ' ';
        print_node(*n.args[1], os);
        os << ')';
    };
    switch (n.kind) {
    case ExprKind::number:
        os << numerator(n.number);
        if (denominator(n.number) != 1) os << '/' << denominator(n.number);
        return;
    case ExprKind::constant:
    case ExprKind::variable:
        os << n.name;
        return;
    case ExprKind::negate:
        os << "(-";
        print_node(*n.args[0], os);
        os << ')';
        return;
    case ExprKind::add:
        return binary("+");
    case ExprKind::sub:
        return binary("-");
    case ExprKind::mul:
        return binary("*");
    case ExprKind::div:
        return binary("/");
    case ExprKind::pow:
        os << '(';
        print_node(*n.args[0], os);
        os << '^';
        print_node(*n.args[1], os);
        os << ')';
        return;
    case ExprKind::call:
        os << n.name << '(';
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) os << ", ";
            print_node(*n.args[i], os);
        }
        os << ')';
        return;
    }
}

void collect(const ExprNode& n, std::set<std::string>& out)
{
    if (n.kind == ExprKind::variable) out.insert(n.name);
    for (const auto& a : n.args) collect(*a, out);
}

// Multivariate polynomial: exponent vector -> coefficient.
using Poly = std::map<std::vector<int>, double>;

std::optional<Poly> to_poly(const ExprNode& n, std::size_t nvars)
{
    auto constant = [&](double c) {
        Poly p;
        if (c != 0) p[std::vector<int>(nvars, 0)] = c;
        return p;
    };
    auto mul = [](const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ea, ca] : a)
            for (const auto& [eb, cb] : b) {
                auto e = ea;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                out[e] += ca * cb;
            }
        return out;
    };
    switch (n.kind) {
    case ExprKind::number:
        return constant(to_double(n.number));
    case ExprKind::constant:
        return constant(n.name == "pi" ? M_PI : M_E);
    case ExprKind::variable: {
        Poly p;
        std::vector<int> e(nvars, 0);
        e[std::size_t(n.slot)] = 1;
        p[e] = 1;
        return p;
    }
    case ExprKind::negate: {
        auto p = to_poly(*n.args[0], nvars);
        if (!p) return std::nullopt;
        for (auto& [e, c] : *p) c = -c;
        return p;
    }
    case ExprKind::add:
    case ExprKind::sub: {
        auto a = to_poly(*n.args[0], nvars), b = to_poly(*n.args[1], nvars);
        if (!a || !b) return std::nullopt;
        const double sign = n.kind == ExprKind::add ? 1 : -1;
        for (const auto& [e, c] : *b) (*a)[e] += sign * c;
        return a;
    }
    case ExprKind::mul: {
        auto a = to_poly(*n.args[0], nvars), b = to_poly(*n.args[1], nvars);
        if (!a || !b) return std::nullopt;
        return mul(*a, *b);
    }
    case ExprKind::div: {
        auto a = to_poly(*n.args[0], nvars), b = to_poly(*n.args[1], nvars);
        if (!a || !b || b->size() != 1) return std::nullopt;
        const auto& [e, c] = *b->begin();
        if (std::any_of(e.begin(), e.end(), [](int k) { return k != 0; })) return std::nullopt;
        for (auto& [ea, ca] : *a) ca /= c;
        return a;
    }
    case ExprKind::pow: {
        const ExprNode& ex = *n.args[1];
        if (ex.kind != ExprKind::number || denominator(ex.number) != 1 || ex.number < 0 || ex.number > 64)
            return std::nullopt;
        auto base = to_poly(*n.args[0], nvars);
        if (!base) return std::nullopt;
        Poly out = constant(1);
        for (int k = numerator(ex.number).convert_to<int>(); k > 0; --k) out = mul(out, *base);
        return out;
    }
    case ExprKind::call:
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

const std::vector<std::string>& Expr::grammar_variables()
{
    static const std::vector<std::string> names{"x",  "x1", "x2", "x3", "x4", "x5", "x6",
                                                "x7", "x8", "x9", "r",  "t",  "theta"};
    return names;
}

Expr Expr::parse(std::string_view text, std::vector<std::string> variables)
{
    const auto& known = grammar_variables();
    if (variables.empty()) variables = known;
    for (const auto& v : variables)
        if (std::find(known.begin(), known.end(), v) == known.end())
            throw DomainError("'" + v + "' is not a variable name of the expression language");
    Expr e;
    e.vars_ = std::move(variables);
    e.root_ = Parser(text, e.vars_).run();
    return e;
}

std::set<std::string> Expr::free_variables() const
{
    std::set<std::string> out;
    collect(*root_, out);
    return out;
}

double Expr::eval(std::span<const double> values) const
{
    Evaluator ev{values};
    const double v = ev(*root_);
    return ev.fault ? NAN : v;
}

double Expr::evaluate(const std::map<std::string, double>& bindings) const
{
    std::vector<double> values(vars_.size(), NAN);
    const auto used = free_variables();
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto it = bindings.find(vars_[i]);
        if (it != bindings.end())
            values[i] = it->second;
        else if (used.count(vars_[i]))
            throw DomainError("variable '" + vars_[i] + "' is not bound");
    }
    Evaluator ev{values};
    const double v = ev(*root_);
    if (ev.fault) throw DomainFault(ev.fault);
    return v;
}

std::string Expr::print() const
{
    std::ostringstream os;
    print_node(*root_, os);
    return os.str();
}

bool structurally_equal(const ExprNode& a, const ExprNode& b)
{
    if (a.kind != b.kind || a.number != b.number || a.name != b.name || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

bool operator==(const Expr& a, const Expr& b)
{
    return a.vars_ == b.vars_ && structurally_equal(*a.root_, *b.root_);
}

Function1 to_function(const Expr& e)
{
    if (e.variables().size() != 1) throw DomainError("expected an expression in one declared variable");
    return [e](double x) { return e.eval(std::span<const double>(&x, 1)); };
}

Integrand to_integrand(const Expr& e)
{
    const auto n = Eigen::Index(e.variables().size());
    return [e, n](const vector_t& v) {
        if (v.size() != n) throw DomainError("integrand called with the wrong number of coordinates");
        return e.eval(std::span<const double>(v.data(), std::size_t(v.size())));
    };
}

std::optional<double> polynomial_lipschitz(const Expr& e, const Box& box)
{
    const std::size_t n = e.variables().size();
    if (std::size_t(box.dim()) != n) throw DomainError("box dimension differs from the variable count");
    for (Eigen::Index j = 0; j < box.dim(); ++j)
        if (!std::isfinite(box.lo[j]) || !std::isfinite(box.hi[j])) return std::nullopt;
    const auto p = to_poly(e.root(), n);
    if (!p) return std::nullopt;
    std::vector<double> radius(n);
    for (std::size_t i = 0; i < n; ++i)
        radius[i] = std::max(std::abs(box.lo[Eigen::Index(i)]), std::abs(box.hi[Eigen::Index(i)]));
    double sum_sq = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double bound = 0;
        for (const auto& [ex, c] : *p) {
            if (ex[j] == 0) continue;
            double term = std::abs(c) * ex[j];
            for (std::size_t i = 0; i < n; ++i) term *= std::pow(radius[i], ex[i] - (i == j ? 1 : 0));
            bound += term;
        }
        sum_sq += bound * bound;
    }
    // Slack for the rounding in the expansion.
    return std::sqrt(sum_sq) * (1 + 1e-12);
}

}  // namespace daniell
