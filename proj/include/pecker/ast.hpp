#pragma once

#include "pecker/diag.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pecker {

enum class UnaryOp { Not };

enum class BinaryOp {
    And, Or, Xor,
    Add, Sub, Mul,
    Shl, Shr,
    Eq, Ne, Lt, Le, Gt, Ge,
};

inline const char* binary_op_text(BinaryOp op) {
    switch (op) {
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
    case BinaryOp::Xor: return "^";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    }
    return "?";
}

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    enum class Kind {
        Number,     // value, width, sized
        Ident,      // name
        Unary,      // uop, a
        Binary,     // bop, a, b
        Ternary,    // a (cond), b (then), c (else)
        Concat,     // parts
        BitSelect,  // name, a (index expression)
        PartSelect, // name, msb, lsb (constant bounds)
    };

    Kind kind;
    SourcePos pos;

    std::uint64_t value = 0;
    int width = 0;
    bool sized = false;

    std::string name;
    UnaryOp uop = UnaryOp::Not;
    BinaryOp bop = BinaryOp::And;
    ExprPtr a, b, c;
    std::vector<ExprPtr> parts;
    int msb = 0, lsb = 0;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

// One behavioral statement inside an always block. Assignments double as
// continuous-assign bodies at module level.
struct Stmt {
    enum class Kind { Assign, If, Case };

    Kind kind;
    SourcePos pos;

    // Statement ids are assigned by enumerate_statements, -1 until then. An If
    // whose then-arm is a single assignment is merged with it: the id lives on
    // the If node and `merged` is set; the absorbed assignment is then-arm[0].
    int stmt_id = -1;
    bool merged = false;

    // Assign
    std::string lhs;
    ExprPtr rhs;
    bool nonblocking = false;

    // If
    ExprPtr cond;
    std::vector<StmtPtr> then_stmts;
    std::vector<StmtPtr> else_stmts;

    // Case
    ExprPtr subject;
    struct CaseArm {
        std::vector<ExprPtr> labels; // empty labels => default arm
        std::vector<StmtPtr> body;
        SourcePos pos;
    };
    std::vector<CaseArm> arms;
};

enum class PortDir { Input, Output };

struct Port {
    std::string name;
    PortDir dir;
    int width = 1;
    bool is_reg = false;
    SourcePos pos;
};

struct VarDecl {
    std::string name;
    bool is_reg = false;
    int width = 1;
    SourcePos pos;
};

struct ContinuousAssign {
    std::string lhs;
    ExprPtr rhs;
    SourcePos pos;
    int stmt_id = -1;
};

struct AlwaysBlock {
    bool edge_sensitive = false; // false => @(*)
    bool posedge = true;
    std::string clock;           // edge-sensitive only
    std::vector<StmtPtr> body;
    SourcePos pos;
};

struct DesignAst {
    std::string name;
    std::string file;
    std::vector<Port> ports;
    std::vector<VarDecl> vars;       // non-port reg/wire declarations
    std::vector<ContinuousAssign> assigns;
    std::vector<AlwaysBlock> always_blocks;
    std::optional<std::string> clock; // the unique edge-sensitive clock, if any

    const Port* find_port(const std::string& n) const {
        for (const auto& p : ports)
            if (p.name == n) return &p;
        return nullptr;
    }
    const VarDecl* find_var(const std::string& n) const {
        for (const auto& v : vars)
            if (v.name == n) return &v;
        return nullptr;
    }
    bool is_declared(const std::string& n) const { return find_port(n) || find_var(n); }

    int width_of(const std::string& n) const {
        if (const Port* p = find_port(n)) return p->width;
        if (const VarDecl* v = find_var(n)) return v->width;
        return 0;
    }
};

} // namespace pecker
