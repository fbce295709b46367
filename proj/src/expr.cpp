#include "oscillab/expr.hpp"

#include <cctype>
#include <cstring>
#include <cstdlib>
#include <memory>
#include <stdexcept>

namespace oscillab {

// ---------------------------------------------------------------------------
// JetTable
// ---------------------------------------------------------------------------

JetTable::JetTable(int nv) : nvars(nv) {
    lookup_.fill(-1);
    // enumerate exponent tuples with total degree <= 4, degree-major order
    for (int deg = 0; deg <= kDegree; ++deg) {
        std::array<std::uint8_t, 4> e{0, 0, 0, 0};
        // odometer over nv slots
        std::vector<int> v(static_cast<std::size_t>(nv), 0);
        while (true) {
            int tot = 0;
            for (int a = 0; a < nv; ++a) tot += v[static_cast<std::size_t>(a)];
            if (tot == deg) {
                e = {0, 0, 0, 0};
                for (int a = 0; a < nv; ++a) e[static_cast<std::size_t>(a)] =
                    static_cast<std::uint8_t>(v[static_cast<std::size_t>(a)]);
                int key = e[0] + 5 * (e[1] + 5 * (e[2] + 5 * e[3]));
                lookup_[static_cast<std::size_t>(key)] = static_cast<int>(exps.size());
                exps.push_back(e);
                double f = 1;
                for (int a = 0; a < 4; ++a)
                    for (int k = 2; k <= e[static_cast<std::size_t>(a)]; ++k) f *= k;
                fact.push_back(f);
            }
            // increment odometer
            int pos = 0;
            while (pos < nv) {
                if (++v[static_cast<std::size_t>(pos)] <= kDegree) break;
                v[static_cast<std::size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == nv) break;
        }
    }
    // multiplication triples
    for (std::size_t a = 0; a < exps.size(); ++a) {
        for (std::size_t b = 0; b < exps.size(); ++b) {
            int tot = 0;
            std::array<std::uint8_t, 4> s{0, 0, 0, 0};
            for (int k = 0; k < 4; ++k) {
                s[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(
                    exps[a][static_cast<std::size_t>(k)] + exps[b][static_cast<std::size_t>(k)]);
                tot += s[static_cast<std::size_t>(k)];
            }
            if (tot > kDegree) continue;
            mult.push_back({static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                            static_cast<std::uint16_t>(index_of(s))});
        }
    }
}

const JetTable& JetTable::get(int nvars) {
    static JetTable t2(2);
    static JetTable t4(4);
    if (nvars == 2) return t2;
    if (nvars == 4) return t4;
    throw std::invalid_argument("JetTable: nvars must be 2 or 4");
}

// ---------------------------------------------------------------------------
// Expression parsing
// ---------------------------------------------------------------------------

namespace {

enum class NodeKind { Num, Var, Abs, Jap, Sin, Cos, Exp, Neg, Add, Sub, Mul, Div, Pow };

struct Node {
    NodeKind kind;
    double num = 0.0;      // Num; Pow exponent
    int var = 0;           // Var: 0=x1,1=x2,2=xi1,3=xi2
    std::unique_ptr<Node> a, b;
};

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    int dim;

    explicit Parser(const std::string& text, int n) : s(text), dim(n) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool word(const char* w) {
        skip();
        std::size_t len = std::strlen(w);
        if (s.compare(pos, len, w) == 0) {
            char next = (pos + len < s.size()) ? s[pos + len] : '\0';
            if (!std::isalnum(static_cast<unsigned char>(next)) && next != '_') {
                pos += len;
                return true;
            }
        }
        return false;
    }

    std::unique_ptr<Node> parse() {
        auto n = expr();
        skip();
        if (pos != s.size())
            throw std::invalid_argument("expression: trailing input at '" + s.substr(pos) + "'");
        return n;
    }

    std::unique_ptr<Node> expr() {  // + -
        auto lhs = term();
        while (true) {
            if (eat('+')) {
                auto n = std::make_unique<Node>();
                n->kind = NodeKind::Add;
                n->a = std::move(lhs);
                n->b = term();
                lhs = std::move(n);
            } else if (eat('-')) {
                auto n = std::make_unique<Node>();
                n->kind = NodeKind::Sub;
                n->a = std::move(lhs);
                n->b = term();
                lhs = std::move(n);
            } else {
                return lhs;
            }
        }
    }

    std::unique_ptr<Node> term() {  // * /
        auto lhs = unary();
        while (true) {
            if (eat('*')) {
                auto n = std::make_unique<Node>();
                n->kind = NodeKind::Mul;
                n->a = std::move(lhs);
                n->b = unary();
                lhs = std::move(n);
            } else if (eat('/')) {
                auto n = std::make_unique<Node>();
                n->kind = NodeKind::Div;
                n->a = std::move(lhs);
                n->b = unary();
                lhs = std::move(n);
            } else {
                return lhs;
            }
        }
    }

    std::unique_ptr<Node> unary() {
        if (eat('-')) {
            auto n = std::make_unique<Node>();
            n->kind = NodeKind::Neg;
            n->a = unary();
            return n;
        }
        return power();
    }

    std::unique_ptr<Node> power() {  // atom ^ number
        auto base = atom();
        if (eat('^')) {
            skip();
            bool neg = eat('-');
            double e = number();
            auto n = std::make_unique<Node>();
            n->kind = NodeKind::Pow;
            n->num = neg ? -e : e;
            n->a = std::move(base);
            return n;
        }
        return base;
    }

    double number() {
        skip();
        char* end = nullptr;
        double v = std::strtod(s.c_str() + pos, &end);
        if (end == s.c_str() + pos)
            throw std::invalid_argument("expression: expected a number at '" + s.substr(pos) + "'");
        pos = static_cast<std::size_t>(end - s.c_str());
        return v;
    }

    std::unique_ptr<Node> func(NodeKind k) {
        if (!eat('(')) throw std::invalid_argument("expression: expected '('");
        auto n = std::make_unique<Node>();
        n->kind = k;
        n->a = expr();
        if (!eat(')')) throw std::invalid_argument("expression: expected ')'");
        return n;
    }

    std::unique_ptr<Node> var(int v) {
        auto n = std::make_unique<Node>();
        n->kind = NodeKind::Var;
        n->var = v;
        return n;
    }

    std::unique_ptr<Node> nullary(NodeKind k) {
        // abs(xi), jap(xi): the argument is fixed to the frequency vector
        if (!eat('(')) throw std::invalid_argument("expression: expected '(' after abs/jap");
        if (!word("xi")) throw std::invalid_argument("expression: abs/jap take 'xi'");
        if (!eat(')')) throw std::invalid_argument("expression: expected ')'");
        auto n = std::make_unique<Node>();
        n->kind = k;
        return n;
    }

    std::unique_ptr<Node> atom() {
        skip();
        if (eat('(')) {
            auto n = expr();
            if (!eat(')')) throw std::invalid_argument("expression: expected ')'");
            return n;
        }
        if (word("abs")) return nullary(NodeKind::Abs);
        if (word("jap")) return nullary(NodeKind::Jap);
        if (word("sin")) return func(NodeKind::Sin);
        if (word("cos")) return func(NodeKind::Cos);
        if (word("exp")) return func(NodeKind::Exp);
        if (word("xi1")) return var(2);
        if (word("xi2")) {
            if (dim < 2) throw std::invalid_argument("expression: xi2 needs dimension 2");
            return var(3);
        }
        if (word("xi")) return var(2);
        if (word("x1")) return var(0);
        if (word("x2")) {
            if (dim < 2) throw std::invalid_argument("expression: x2 needs dimension 2");
            return var(1);
        }
        if (word("x")) return var(0);
        skip();
        if (pos < s.size() &&
            (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
            auto n = std::make_unique<Node>();
            n->kind = NodeKind::Num;
            n->num = number();
            return n;
        }
        throw std::invalid_argument("expression: unexpected input at '" + s.substr(pos) + "'");
    }
};

template <class T, class Ctx>
T eval_node(const Node& n, const Ctx& ctx) {
    using std::sin;
    using std::cos;
    using std::exp;
    switch (n.kind) {
        case NodeKind::Num: return ctx.constant(n.num);
        case NodeKind::Var: return ctx.variable(n.var);
        case NodeKind::Abs: return ctx.abs_xi();
        case NodeKind::Jap: return ctx.jap_xi();
        case NodeKind::Sin: return sin(eval_node<T>(*n.a, ctx));
        case NodeKind::Cos: return cos(eval_node<T>(*n.a, ctx));
        case NodeKind::Exp: return exp(eval_node<T>(*n.a, ctx));
        case NodeKind::Neg: return -eval_node<T>(*n.a, ctx);
        case NodeKind::Add: return eval_node<T>(*n.a, ctx) + eval_node<T>(*n.b, ctx);
        case NodeKind::Sub: return eval_node<T>(*n.a, ctx) - eval_node<T>(*n.b, ctx);
        case NodeKind::Mul: return eval_node<T>(*n.a, ctx) * eval_node<T>(*n.b, ctx);
        case NodeKind::Div: return eval_node<T>(*n.a, ctx) / eval_node<T>(*n.b, ctx);
        case NodeKind::Pow: return ctx.pow(eval_node<T>(*n.a, ctx), n.num);
    }
    throw std::logic_error("expression: unreachable");
}

struct DoubleCtx {
    std::array<double, 2> x, xi;
    int n;
    double constant(double v) const { return v; }
    double variable(int v) const { return (v < 2) ? x[static_cast<std::size_t>(v)] : xi[static_cast<std::size_t>(v - 2)]; }
    double abs_xi() const { return (n == 1) ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]); }
    double jap_xi() const {
        double r2 = xi[0] * xi[0] + xi[1] * xi[1];
        return std::sqrt(1 + r2);
    }
    double pow(double b, double e) const {
        double er = std::round(e);
        if (er == e) return std::pow(b, e);
        if (!(b > 0) && b != 0.0)
            throw std::domain_error("expression: fractional power of negative base");
        return std::pow(b, e);
    }
};

struct JetCtx {
    std::array<double, 2> x, xi;
    int n;
    const JetTable* tab;
    Jet<double> constant(double v) const { return Jet<double>::constant(*tab, v); }
    Jet<double> variable(int v) const {
        // variable slots: x1..xn then xi1..xin
        double val = (v < 2) ? x[static_cast<std::size_t>(v)] : xi[static_cast<std::size_t>(v - 2)];
        int slot = (v < 2) ? v : (v - 2 + n);
        if ((v == 1 || v == 3) && n == 1)
            throw std::invalid_argument("expression: 2d variable in a 1d context");
        return Jet<double>::variable(*tab, val, slot);
    }
    Jet<double> abs_xi() const {
        Jet<double> r2 = constant(0.0);
        for (int a = 0; a < n; ++a) {
            auto v = Jet<double>::variable(*tab, xi[static_cast<std::size_t>(a)], n + a);
            r2 += v * v;
        }
        return oscillab::sqrt(r2);
    }
    Jet<double> jap_xi() const {
        Jet<double> r2 = constant(1.0);
        for (int a = 0; a < n; ++a) {
            auto v = Jet<double>::variable(*tab, xi[static_cast<std::size_t>(a)], n + a);
            r2 += v * v;
        }
        return oscillab::sqrt(r2);
    }
    Jet<double> pow(const Jet<double>& b, double e) const { return oscillab::pow(b, e); }
};

}  // namespace

struct Expression::Impl {
    std::unique_ptr<Node> root;
    int n;
};

Expression::Expression(const std::string& text, int n) : impl_(std::make_shared<Impl>()) {
    impl_->n = n;
    Parser p(text, n);
    impl_->root = p.parse();
    text_ = text;
}

double Expression::eval(std::array<double, 2> x, std::array<double, 2> xi) const {
    DoubleCtx ctx{x, xi, impl_->n};
    return eval_node<double>(*impl_->root, ctx);
}

Jet<double> Expression::jet(std::array<double, 2> x, std::array<double, 2> xi) const {
    const JetTable& tab = JetTable::get(2 * impl_->n);
    JetCtx ctx{x, xi, impl_->n, &tab};
    return eval_node<Jet<double>>(*impl_->root, ctx);
}

}  // namespace oscillab
