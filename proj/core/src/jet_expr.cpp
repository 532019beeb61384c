#include "wnlpb/jet_expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace wnlpb {

namespace {

Expr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

const Expr& zero_expr() {
    static const Expr z = constant(0.0);
    return z;
}
const Expr& one_expr() {
    static const Expr o = constant(1.0);
    return o;
}

}  // namespace

Expr constant(double c) {
    ExprNode n;
    n.kind = ExprNode::Kind::Constant;
    n.value = c;
    return make_node(std::move(n));
}

Expr var_x() {
    ExprNode n;
    n.kind = ExprNode::Kind::X;
    return make_node(std::move(n));
}

Expr jet_var(int field, int order) {
    if (field < 1) throw std::invalid_argument("jet_var: field index must be >= 1");
    if (order < 0) throw std::invalid_argument("jet_var: order must be >= 0");
    ExprNode n;
    n.kind = ExprNode::Kind::Jet;
    n.jet = JetVar{field, order};
    return make_node(std::move(n));
}

Expr unary(UnaryOp op, Expr a) {
    ExprNode n;
    n.kind = ExprNode::Kind::Unary;
    n.uop = op;
    n.a = std::move(a);
    return make_node(std::move(n));
}

Expr binary(BinaryOp op, Expr a, Expr b) {
    ExprNode n;
    n.kind = ExprNode::Kind::Binary;
    n.bop = op;
    n.a = std::move(a);
    n.b = std::move(b);
    return make_node(std::move(n));
}

Expr pow_int(Expr base, int exponent) {
    ExprNode n;
    n.kind = ExprNode::Kind::Pow;
    n.a = std::move(base);
    n.exponent = exponent;
    return make_node(std::move(n));
}

bool is_constant(const Expr& e, double c) {
    return e && e->kind == ExprNode::Kind::Constant && e->value == c;
}

bool is_zero(const Expr& e) { return is_constant(e, 0.0); }

JetPoint::JetPoint(double x_, int fields, int max_order)
    : x(x_), fields_(fields), max_order_(max_order),
      jets_(static_cast<std::size_t>(fields) * (max_order + 1), 0.0) {
    if (fields < 1 || max_order < 0) throw std::invalid_argument("JetPoint: bad dimensions");
}

double JetPoint::at(int field, int order) const {
    if (field < 1 || field > fields_ || order < 0 || order > max_order_)
        throw EvalError("jet point does not supply variable",
                        "u" + std::to_string(field) + "^(" + std::to_string(order) + ")");
    return jets_[static_cast<std::size_t>(field - 1) * (max_order_ + 1) + order];
}

void JetPoint::set(int field, int order, double v) {
    if (field < 1 || field > fields_ || order < 0 || order > max_order_)
        throw std::out_of_range("JetPoint::set: index out of range");
    jets_[static_cast<std::size_t>(field - 1) * (max_order_ + 1) + order] = v;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    const std::string& src;
    int n;
    std::size_t pos = 0;

    Parser(const std::string& s, int n_fields) : src(s), n(n_fields) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= src.size();
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos);
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+'))
                e = add(e, parse_term());
            else if (accept('-'))
                e = sub(e, parse_term());
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*'))
                e = mul(e, parse_unary());
            else if (accept('/'))
                e = divide(e, parse_unary());
            else
                return e;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return neg(parse_unary());
        return parse_factor();
    }

    Expr parse_factor() {
        Expr base = parse_base();
        if (accept('^')) return pow_int(base, parse_integer());
        return base;
    }

    int parse_integer() {
        skip_ws();
        std::size_t start = pos;
        bool negative = false;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) {
            negative = (src[pos] == '-');
            ++pos;
        }
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw ParseError("expected integer exponent", start);
        long v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            v = v * 10 + (src[pos] - '0');
            if (v > 1000) throw ParseError("exponent too large", start);
            ++pos;
        }
        return static_cast<int>(negative ? -v : v);
    }

    Expr parse_base() {
        skip_ws();
        if (pos >= src.size()) throw ParseError("unexpected end of input", pos);
        char c = src[pos];
        if (c == '(') {
            ++pos;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    Expr parse_number() {
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
            ++pos;
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            } else {
                pos = mark;  // 'e' was not an exponent
            }
        }
        const std::string text = src.substr(start, pos - start);
        try {
            std::size_t used = 0;
            double v = std::stod(text, &used);
            if (used != text.size()) throw ParseError("malformed number '" + text + "'", start);
            return constant(v);
        } catch (const std::invalid_argument&) {
            throw ParseError("malformed number '" + text + "'", start);
        }
    }

    Expr parse_ident() {
        std::size_t start = pos;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        const std::string id = src.substr(start, pos - start);

        if (id == "x") return var_x();
        static const std::map<std::string, UnaryOp> funcs = {{"exp", UnaryOp::Exp},
                                                             {"sin", UnaryOp::Sin},
                                                             {"cos", UnaryOp::Cos},
                                                             {"sqrt", UnaryOp::Sqrt},
                                                             {"ln", UnaryOp::Ln}};
        if (auto it = funcs.find(id); it != funcs.end()) {
            expect('(');
            Expr arg = parse_expr();
            expect(')');
            return unary(it->second, arg);
        }
        return parse_jetvar(id, start);
    }

    Expr parse_jetvar(const std::string& id, std::size_t start) {
        std::size_t i = 0;
        int field = -1;
        if (id[0] == 'u' && id.size() > 1 && std::isdigit(static_cast<unsigned char>(id[1]))) {
            i = 1;
            long f = 0;
            while (i < id.size() && std::isdigit(static_cast<unsigned char>(id[i]))) {
                f = f * 10 + (id[i] - '0');
                if (f > 1000) throw ParseError("field index too large", start);
                ++i;
            }
            field = static_cast<int>(f);
        } else if (n <= 3 && (id[0] == 'u' || id[0] == 'v' || id[0] == 'w')) {
            field = id[0] == 'u' ? 1 : id[0] == 'v' ? 2 : 3;
            i = 1;
        } else {
            throw ParseError("unknown identifier '" + id + "'", start);
        }

        int order = 0;
        if (i < id.size()) {
            const std::string suffix = id.substr(i);
            if (suffix == "_x")
                order = 1;
            else if (suffix == "_xx")
                order = 2;
            else if (suffix.size() > 2 && suffix[0] == '_' && suffix[1] == 'd') {
                long k = 0;
                for (std::size_t j = 2; j < suffix.size(); ++j) {
                    if (!std::isdigit(static_cast<unsigned char>(suffix[j])))
                        throw ParseError("unknown identifier '" + id + "'", start);
                    k = k * 10 + (suffix[j] - '0');
                    if (k > 1000) throw ParseError("derivative order too large", start);
                }
                order = static_cast<int>(k);
            } else {
                throw ParseError("unknown identifier '" + id + "'", start);
            }
        }
        if (field < 1 || field > n)
            throw ParseError("field index out of range in '" + id + "' (n = " + std::to_string(n) + ")",
                             start);
        return jet_var(field, order);
    }
};

}  // namespace

Expr parse(const std::string& source, int n_fields) {
    if (n_fields < 1) throw std::invalid_argument("parse: n must be >= 1");
    Parser p(source, n_fields);
    Expr e = p.parse_expr();
    if (!p.eof()) throw ParseError("trailing input", p.pos);
    return e;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Precedence: Add/Sub 1, Mul/Div 2, Neg 3, Pow 4, atoms 5.
int precedence(const Expr& e) {
    switch (e->kind) {
        case ExprNode::Kind::Binary:
            return (e->bop == BinaryOp::Add || e->bop == BinaryOp::Sub) ? 1 : 2;
        case ExprNode::Kind::Unary:
            return e->uop == UnaryOp::Neg ? 3 : 5;
        case ExprNode::Kind::Pow:
            return 4;
        default:
            return 5;
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string jet_name(const JetVar& j) {
    std::string s = "u" + std::to_string(j.field);
    if (j.order == 1) s += "_x";
    else if (j.order == 2) s += "_xx";
    else if (j.order >= 3) s += "_d" + std::to_string(j.order);
    return s;
}

void print_expr(const Expr& e, std::string& out);

void print_child(const Expr& child, int parent_prec, bool force_parens, std::string& out) {
    const bool parens = precedence(child) < parent_prec || force_parens;
    if (parens) out += '(';
    print_expr(child, out);
    if (parens) out += ')';
}

void print_expr(const Expr& e, std::string& out) {
    switch (e->kind) {
        case ExprNode::Kind::Constant: {
            if (e->value < 0) {
                out += '(' + format_double(e->value) + ')';
            } else {
                out += format_double(e->value);
            }
            return;
        }
        case ExprNode::Kind::X:
            out += 'x';
            return;
        case ExprNode::Kind::Jet:
            out += jet_name(e->jet);
            return;
        case ExprNode::Kind::Unary: {
            switch (e->uop) {
                case UnaryOp::Exp: out += "exp("; break;
                case UnaryOp::Sin: out += "sin("; break;
                case UnaryOp::Cos: out += "cos("; break;
                case UnaryOp::Sqrt: out += "sqrt("; break;
                case UnaryOp::Ln: out += "ln("; break;
                case UnaryOp::Neg:
                    out += '-';
                    print_child(e->a, 4, false, out);
                    return;
            }
            print_expr(e->a, out);
            out += ')';
            return;
        }
        case ExprNode::Kind::Binary: {
            const int prec = precedence(e);
            switch (e->bop) {
                case BinaryOp::Add:
                    print_child(e->a, prec, false, out);
                    out += " + ";
                    print_child(e->b, prec + 1, false, out);
                    return;
                case BinaryOp::Sub:
                    print_child(e->a, prec, false, out);
                    out += " - ";
                    print_child(e->b, prec + 1, false, out);
                    return;
                case BinaryOp::Mul:
                    print_child(e->a, prec, false, out);
                    out += "*";
                    print_child(e->b, prec + 1, false, out);
                    return;
                case BinaryOp::Div:
                    print_child(e->a, prec, false, out);
                    out += "/";
                    print_child(e->b, prec + 1, false, out);
                    return;
            }
            return;
        }
        case ExprNode::Kind::Pow: {
            print_child(e->a, 5, e->a->kind == ExprNode::Kind::Pow, out);
            out += '^';
            if (e->exponent < 0) {
                out += '(' + std::to_string(e->exponent) + ')';
            } else {
                out += std::to_string(e->exponent);
            }
            return;
        }
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print_expr(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

double pow_by_squaring(double base, int exponent) {
    if (exponent == 0) return 1.0;
    bool invert = exponent < 0;
    unsigned long k = invert ? -static_cast<long>(exponent) : exponent;
    double acc = 1.0, b = base;
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return invert ? 1.0 / acc : acc;
}

}  // namespace

double eval(const Expr& e, const JetPoint& p) {
    switch (e->kind) {
        case ExprNode::Kind::Constant:
            return e->value;
        case ExprNode::Kind::X:
            return p.x;
        case ExprNode::Kind::Jet:
            return p.at(e->jet.field, e->jet.order);
        case ExprNode::Kind::Unary: {
            const double a = eval(e->a, p);
            switch (e->uop) {
                case UnaryOp::Exp: return std::exp(a);
                case UnaryOp::Sin: return std::sin(a);
                case UnaryOp::Cos: return std::cos(a);
                case UnaryOp::Sqrt:
                    if (a < 0) throw EvalError("sqrt of negative argument", to_string(e));
                    return std::sqrt(a);
                case UnaryOp::Ln:
                    if (a <= 0) throw EvalError("ln of non-positive argument", to_string(e));
                    return std::log(a);
                case UnaryOp::Neg: return -a;
            }
            return 0.0;
        }
        case ExprNode::Kind::Binary: {
            const double a = eval(e->a, p);
            const double b = eval(e->b, p);
            switch (e->bop) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (b == 0.0) throw EvalError("division by zero", to_string(e));
                    return a / b;
            }
            return 0.0;
        }
        case ExprNode::Kind::Pow: {
            const double a = eval(e->a, p);
            if (a == 0.0 && e->exponent < 0)
                throw EvalError("division by zero", to_string(e));
            return pow_by_squaring(a, e->exponent);
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

// Shared derivative core; `leaf` supplies d(atom) for X and Jet nodes.
template <typename LeafRule>
Expr differentiate(const Expr& e, const LeafRule& leaf) {
    switch (e->kind) {
        case ExprNode::Kind::Constant:
            return zero_expr();
        case ExprNode::Kind::X:
        case ExprNode::Kind::Jet:
            return leaf(e);
        case ExprNode::Kind::Unary: {
            Expr da = differentiate(e->a, leaf);
            switch (e->uop) {
                case UnaryOp::Exp: return mul(unary(UnaryOp::Exp, e->a), da);
                case UnaryOp::Sin: return mul(unary(UnaryOp::Cos, e->a), da);
                case UnaryOp::Cos: return neg(mul(unary(UnaryOp::Sin, e->a), da));
                case UnaryOp::Sqrt:
                    return divide(da, mul(constant(2.0), unary(UnaryOp::Sqrt, e->a)));
                case UnaryOp::Ln: return divide(da, e->a);
                case UnaryOp::Neg: return neg(da);
            }
            return zero_expr();
        }
        case ExprNode::Kind::Binary: {
            Expr da = differentiate(e->a, leaf);
            Expr db = differentiate(e->b, leaf);
            switch (e->bop) {
                case BinaryOp::Add: return add(da, db);
                case BinaryOp::Sub: return sub(da, db);
                case BinaryOp::Mul: return add(mul(da, e->b), mul(e->a, db));
                case BinaryOp::Div:
                    return divide(sub(mul(da, e->b), mul(e->a, db)), pow_int(e->b, 2));
            }
            return zero_expr();
        }
        case ExprNode::Kind::Pow: {
            if (e->exponent == 0) return zero_expr();
            Expr da = differentiate(e->a, leaf);
            return mul(mul(constant(static_cast<double>(e->exponent)), pow_int(e->a, e->exponent - 1)),
                       da);
        }
    }
    return zero_expr();
}

}  // namespace

Expr d_partial(const Expr& e, int field, int order) {
    const JetVar target{field, order};
    Expr d = differentiate(e, [&](const Expr& atom) -> Expr {
        if (atom->kind == ExprNode::Kind::Jet && atom->jet == target) return one_expr();
        return zero_expr();
    });
    return simplify(d);
}

Expr d_x(const Expr& e) {
    Expr d = differentiate(e, [&](const Expr& atom) -> Expr {
        return atom->kind == ExprNode::Kind::X ? one_expr() : zero_expr();
    });
    return simplify(d);
}

Expr d_total(const Expr& e) {
    Expr total = d_x(e);
    for (const JetVar& v : jet_vars(e)) {
        Expr part = d_partial(e, v.field, v.order);
        if (is_zero(part)) continue;
        total = add(total, mul(part, jet_var(v.field, v.order + 1)));
    }
    return simplify(total);
}

// ---------------------------------------------------------------------------
// Simplification
// ---------------------------------------------------------------------------

namespace {

struct Term {
    int sign;  // +1 / -1
    Expr e;
};

void flatten_sum(const Expr& e, int sign, std::vector<Term>& out) {
    if (e->kind == ExprNode::Kind::Binary && e->bop == BinaryOp::Add) {
        flatten_sum(e->a, sign, out);
        flatten_sum(e->b, sign, out);
    } else if (e->kind == ExprNode::Kind::Binary && e->bop == BinaryOp::Sub) {
        flatten_sum(e->a, sign, out);
        flatten_sum(e->b, -sign, out);
    } else if (e->kind == ExprNode::Kind::Unary && e->uop == UnaryOp::Neg) {
        flatten_sum(e->a, -sign, out);
    } else {
        out.push_back({sign, e});
    }
}

// Multiplicative chain: collects numerator/denominator factors and a sign.
struct ProdParts {
    double coeff = 1.0;
    int sign = 1;
    std::vector<Expr> num;
    std::vector<Expr> den;
};

void flatten_prod(const Expr& e, bool denominator, ProdParts& out) {
    if (e->kind == ExprNode::Kind::Binary && e->bop == BinaryOp::Mul) {
        flatten_prod(e->a, denominator, out);
        flatten_prod(e->b, denominator, out);
    } else if (e->kind == ExprNode::Kind::Binary && e->bop == BinaryOp::Div) {
        flatten_prod(e->a, denominator, out);
        flatten_prod(e->b, !denominator, out);
    } else if (e->kind == ExprNode::Kind::Unary && e->uop == UnaryOp::Neg) {
        out.sign = -out.sign;
        flatten_prod(e->a, denominator, out);
    } else if (e->kind == ExprNode::Kind::Constant && !denominator) {
        out.coeff *= e->value;
    } else if (e->kind == ExprNode::Kind::Constant && denominator && e->value != 0.0) {
        out.coeff /= e->value;
    } else {
        (denominator ? out.den : out.num).push_back(e);
    }
}

Expr rebuild_quotient(Expr num, const std::vector<Expr>& den) {
    if (den.empty()) return num;
    Expr d;
    for (const Expr& f : den) d = d ? mul(d, f) : f;
    return divide(std::move(num), d);
}

}  // namespace

Expr simplify(const Expr& e) {
    switch (e->kind) {
        case ExprNode::Kind::Constant:
        case ExprNode::Kind::X:
        case ExprNode::Kind::Jet:
            return e;
        case ExprNode::Kind::Unary: {
            Expr sa = simplify(e->a);
            if (e->uop == UnaryOp::Neg) {
                if (sa->kind == ExprNode::Kind::Constant) return constant(-sa->value);
                if (sa->kind == ExprNode::Kind::Unary && sa->uop == UnaryOp::Neg) return sa->a;
                return neg(sa);
            }
            if (sa->kind == ExprNode::Kind::Constant) {
                const double v = sa->value;
                switch (e->uop) {
                    case UnaryOp::Exp: return constant(std::exp(v));
                    case UnaryOp::Sin: return constant(std::sin(v));
                    case UnaryOp::Cos: return constant(std::cos(v));
                    case UnaryOp::Sqrt:
                        if (v >= 0) return constant(std::sqrt(v));
                        break;  // leave out-of-domain folding to eval
                    case UnaryOp::Ln:
                        if (v > 0) return constant(std::log(v));
                        break;
                    case UnaryOp::Neg: break;
                }
            }
            return unary(e->uop, sa);
        }
        case ExprNode::Kind::Pow: {
            Expr sa = simplify(e->a);
            if (e->exponent == 0) return one_expr();
            if (e->exponent == 1) return sa;
            if (sa->kind == ExprNode::Kind::Constant && (sa->value != 0.0 || e->exponent > 0))
                return constant(pow_by_squaring(sa->value, e->exponent));
            return pow_int(sa, e->exponent);
        }
        case ExprNode::Kind::Binary: {
            if (e->bop == BinaryOp::Add || e->bop == BinaryOp::Sub) {
                std::vector<Term> raw;
                flatten_sum(e, 1, raw);
                double const_sum = 0.0;
                std::vector<Term> terms;
                for (const Term& t : raw) {
                    Expr s = simplify(t.e);
                    std::vector<Term> sub;
                    flatten_sum(s, t.sign, sub);  // simplification may expose nested sums
                    for (const Term& u : sub) {
                        if (u.e->kind == ExprNode::Kind::Constant)
                            const_sum += u.sign * u.e->value;
                        else
                            terms.push_back(u);
                    }
                }
                Expr acc;
                for (const Term& t : terms) {
                    if (!acc)
                        acc = t.sign > 0 ? t.e : neg(t.e);
                    else
                        acc = t.sign > 0 ? add(acc, t.e) : sub(acc, t.e);
                }
                if (!acc) return constant(const_sum);
                if (const_sum == 0.0) return acc;
                return const_sum > 0 ? add(acc, constant(const_sum)) : sub(acc, constant(-const_sum));
            }
            // Mul / Div
            ProdParts raw;
            flatten_prod(e, false, raw);
            ProdParts parts;
            parts.coeff = raw.coeff;
            parts.sign = raw.sign;
            for (const Expr& f : raw.num) {
                Expr s = simplify(f);
                flatten_prod(s, false, parts);
            }
            for (const Expr& f : raw.den) {
                Expr s = simplify(f);
                flatten_prod(s, true, parts);
            }
            const double coeff = parts.coeff * parts.sign;
            if (coeff == 0.0 && !parts.den.empty()) {
                // 0/d: keep zero; d == 0 is an evaluation-time error anyway
                return zero_expr();
            }
            if (coeff == 0.0) return zero_expr();
            if (parts.num.empty() && parts.den.empty()) return constant(coeff);
            Expr num;
            for (const Expr& f : parts.num) num = num ? mul(num, f) : f;
            double abs_coeff = coeff < 0 ? -coeff : coeff;
            if (!num)
                num = constant(abs_coeff);
            else if (abs_coeff != 1.0)
                num = mul(constant(abs_coeff), num);
            Expr q = rebuild_quotient(num, parts.den);
            return coeff < 0 ? neg(q) : q;
        }
    }
    return e;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprNode::Kind::Constant: return a->value == b->value;
        case ExprNode::Kind::X: return true;
        case ExprNode::Kind::Jet: return a->jet == b->jet;
        case ExprNode::Kind::Unary:
            return a->uop == b->uop && structurally_equal(a->a, b->a);
        case ExprNode::Kind::Binary:
            return a->bop == b->bop && structurally_equal(a->a, b->a) &&
                   structurally_equal(a->b, b->b);
        case ExprNode::Kind::Pow:
            return a->exponent == b->exponent && structurally_equal(a->a, b->a);
    }
    return false;
}

namespace {

void collect_jet_vars(const Expr& e, std::set<std::pair<int, int>>& out) {
    switch (e->kind) {
        case ExprNode::Kind::Jet:
            out.insert({e->jet.field, e->jet.order});
            break;
        case ExprNode::Kind::Unary:
        case ExprNode::Kind::Pow:
            collect_jet_vars(e->a, out);
            break;
        case ExprNode::Kind::Binary:
            collect_jet_vars(e->a, out);
            collect_jet_vars(e->b, out);
            break;
        default:
            break;
    }
}

}  // namespace

std::vector<JetVar> jet_vars(const Expr& e) {
    std::set<std::pair<int, int>> s;
    collect_jet_vars(e, s);
    std::vector<JetVar> out;
    out.reserve(s.size());
    for (const auto& [f, o] : s) out.push_back(JetVar{f, o});
    return out;
}

int max_jet_order(const Expr& e) {
    int mx = -1;
    for (const JetVar& v : jet_vars(e)) mx = std::max(mx, v.order);
    return mx;
}

bool depends_on_x(const Expr& e) {
    switch (e->kind) {
        case ExprNode::Kind::X: return true;
        case ExprNode::Kind::Unary:
        case ExprNode::Kind::Pow:
            return depends_on_x(e->a);
        case ExprNode::Kind::Binary:
            return depends_on_x(e->a) || depends_on_x(e->b);
        default:
            return false;
    }
}

}  // namespace wnlpb
