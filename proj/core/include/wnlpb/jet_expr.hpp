#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace wnlpb {

// Symbolic expressions on the jet space of maps R -> Omega in R^n.
// A jet variable (field j, order i) stands for the i-th x-derivative of the
// j-th field component; order 0 is the component itself.

struct JetVar {
    int field = 1;  // 1-based, 1..n
    int order = 0;  // >= 0
    friend bool operator==(const JetVar&, const JetVar&) = default;
};

enum class UnaryOp { Exp, Sin, Cos, Sqrt, Ln, Neg };
enum class BinaryOp { Add, Sub, Mul, Div };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Constant, X, Jet, Unary, Binary, Pow };
    Kind kind = Kind::Constant;
    double value = 0.0;  // Constant
    JetVar jet;          // Jet
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    Expr a, b;           // a: unary/pow/binary lhs, b: binary rhs
    int exponent = 0;    // Pow
};

// Node builders. Shared immutable nodes; cheap to copy, safe to share.
Expr constant(double c);
Expr var_x();
Expr jet_var(int field, int order);
Expr unary(UnaryOp op, Expr a);
Expr binary(BinaryOp op, Expr a, Expr b);
Expr pow_int(Expr base, int exponent);
inline Expr add(Expr a, Expr b) { return binary(BinaryOp::Add, std::move(a), std::move(b)); }
inline Expr sub(Expr a, Expr b) { return binary(BinaryOp::Sub, std::move(a), std::move(b)); }
inline Expr mul(Expr a, Expr b) { return binary(BinaryOp::Mul, std::move(a), std::move(b)); }
inline Expr divide(Expr a, Expr b) { return binary(BinaryOp::Div, std::move(a), std::move(b)); }
inline Expr neg(Expr a) { return unary(UnaryOp::Neg, std::move(a)); }

bool is_constant(const Expr& e, double c);
bool is_zero(const Expr& e);

// Point on the jet space: x plus the jets u_j^(i), j in 1..fields, i in 0..max_order.
class JetPoint {
public:
    JetPoint(double x, int fields, int max_order);
    double x = 0.0;
    int fields() const { return fields_; }
    int max_order() const { return max_order_; }
    double at(int field, int order) const;
    void set(int field, int order, double v);

private:
    int fields_ = 0;
    int max_order_ = 0;
    std::vector<double> jets_;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " at position " + std::to_string(position)), pos(position) {}
    std::size_t pos;
};

struct EvalError : std::runtime_error {
    EvalError(const std::string& msg, std::string subexpr_)
        : std::runtime_error(msg + " in '" + subexpr_ + "'"), subexpr(std::move(subexpr_)) {}
    std::string subexpr;
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | factor
//   factor := base ('^' integer)?
//   base   := number | 'x' | jetvar | func '(' expr ')' | '(' expr ')'
//   func   := exp | sin | cos | sqrt | ln
// Jet variables: u<j>, with derivative suffixes _x, _xx, _d<k> (k >= 3).
// For n <= 3 the aliases u, v, w (with the same suffixes) map to u1, u2, u3.
Expr parse(const std::string& source, int n_fields);

std::string to_string(const Expr& e);

double eval(const Expr& e, const JetPoint& p);

// Symbolic partial derivative with respect to the jet variable (field, order).
Expr d_partial(const Expr& e, int field, int order);

// Explicit partial with respect to x.
Expr d_x(const Expr& e);

// Total x-derivative: D_x e = de/dx + sum_{j,i} (de/du_j^(i)) u_j^(i+1).
Expr d_total(const Expr& e);

// Semantics-preserving cleanup: constant folding, 0/1 identities, flattening
// of sums and products. Idempotent.
Expr simplify(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Jet variables actually appearing in e (deduplicated, field-major order).
std::vector<JetVar> jet_vars(const Expr& e);

// Max derivative order appearing; -1 when no jet variable occurs.
int max_jet_order(const Expr& e);

bool depends_on_x(const Expr& e);

}  // namespace wnlpb
