#pragma once

#include "pecker/ast.hpp"
#include "pecker/diag.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace pecker {

inline std::uint64_t mask_to_width(std::uint64_t v, int width) {
    return width >= 64 ? v : (v & ((std::uint64_t{1} << width) - 1));
}

// Computes and stores the static width of every node. Widths follow the
// self-determined rules: identifiers carry their declared width, bitwise and
// arithmetic operators the max of their operands, shifts the left operand,
// comparisons 1, concatenations the sum. Throws on undeclared identifiers,
// malformed selects, and >64-bit concatenations.
inline int annotate_widths(Expr& e, const DesignAst& design) {
    auto declared = [&design](const std::string& name, const SourcePos& pos) {
        int w = design.width_of(name);
        if (w == 0) throw Error(ErrorKind::Parse, pos, "undeclared identifier '" + name + "'");
        return w;
    };
    switch (e.kind) {
    case Expr::Kind::Number:
        break; // width assigned by the lexer
    case Expr::Kind::Ident:
        e.width = declared(e.name, e.pos);
        break;
    case Expr::Kind::Unary:
        e.width = annotate_widths(*e.a, design);
        break;
    case Expr::Kind::Binary: {
        int lw = annotate_widths(*e.a, design);
        int rw = annotate_widths(*e.b, design);
        switch (e.bop) {
        case BinaryOp::Eq: case BinaryOp::Ne:
        case BinaryOp::Lt: case BinaryOp::Le:
        case BinaryOp::Gt: case BinaryOp::Ge:
            e.width = 1;
            break;
        case BinaryOp::Shl: case BinaryOp::Shr:
            e.width = lw;
            break;
        default:
            e.width = lw > rw ? lw : rw;
        }
        break;
    }
    case Expr::Kind::Ternary: {
        annotate_widths(*e.a, design);
        int tw = annotate_widths(*e.b, design);
        int ew = annotate_widths(*e.c, design);
        e.width = tw > ew ? tw : ew;
        break;
    }
    case Expr::Kind::Concat: {
        int total = 0;
        for (auto& p : e.parts) total += annotate_widths(*p, design);
        if (total > 64)
            throw Error(ErrorKind::Parse, e.pos, "concatenation wider than 64 bits");
        e.width = total;
        break;
    }
    case Expr::Kind::BitSelect:
        declared(e.name, e.pos);
        annotate_widths(*e.a, design);
        e.width = 1;
        break;
    case Expr::Kind::PartSelect: {
        int w = declared(e.name, e.pos);
        if (e.msb < e.lsb || e.msb >= w)
            throw Error(ErrorKind::Parse, e.pos, "part-select bounds out of range for '" + e.name + "'");
        e.width = e.msb - e.lsb + 1;
        break;
    }
    }
    return e.width;
}

using ValueStore = std::unordered_map<std::string, std::uint64_t>;

// Two-state evaluation over annotated expressions. Every node's result is
// masked to that node's width, so ~ on a 4-bit operand stays 4 bits before it
// feeds a comparison.
inline std::uint64_t eval_expr(const Expr& e, const ValueStore& values) {
    switch (e.kind) {
    case Expr::Kind::Number:
        return e.value;
    case Expr::Kind::Ident: {
        auto it = values.find(e.name);
        return it == values.end() ? 0 : it->second;
    }
    case Expr::Kind::Unary:
        return mask_to_width(~eval_expr(*e.a, values), e.width);
    case Expr::Kind::Binary: {
        std::uint64_t a = eval_expr(*e.a, values);
        std::uint64_t b = eval_expr(*e.b, values);
        switch (e.bop) {
        case BinaryOp::And: return a & b;
        case BinaryOp::Or: return a | b;
        case BinaryOp::Xor: return a ^ b;
        case BinaryOp::Add: return mask_to_width(a + b, e.width);
        case BinaryOp::Sub: return mask_to_width(a - b, e.width);
        case BinaryOp::Mul: return mask_to_width(a * b, e.width);
        case BinaryOp::Shl: return b >= 64 ? 0 : mask_to_width(a << b, e.width);
        case BinaryOp::Shr: return b >= 64 ? 0 : a >> b;
        case BinaryOp::Eq: return a == b ? 1 : 0;
        case BinaryOp::Ne: return a != b ? 1 : 0;
        case BinaryOp::Lt: return a < b ? 1 : 0;
        case BinaryOp::Le: return a <= b ? 1 : 0;
        case BinaryOp::Gt: return a > b ? 1 : 0;
        case BinaryOp::Ge: return a >= b ? 1 : 0;
        }
        return 0;
    }
    case Expr::Kind::Ternary:
        return eval_expr(*e.a, values) != 0 ? eval_expr(*e.b, values) : eval_expr(*e.c, values);
    case Expr::Kind::Concat: {
        std::uint64_t acc = 0;
        for (const auto& p : e.parts)
            acc = (acc << p->width) | eval_expr(*p, values);
        return acc;
    }
    case Expr::Kind::BitSelect: {
        auto it = values.find(e.name);
        std::uint64_t base = it == values.end() ? 0 : it->second;
        std::uint64_t idx = eval_expr(*e.a, values);
        return idx >= 64 ? 0 : (base >> idx) & 1;
    }
    case Expr::Kind::PartSelect: {
        auto it = values.find(e.name);
        std::uint64_t base = it == values.end() ? 0 : it->second;
        return mask_to_width(base >> e.lsb, e.msb - e.lsb + 1);
    }
    }
    return 0;
}

// Free identifiers of an expression, in first-appearance order, deduplicated.
inline void collect_idents(const Expr& e, std::vector<std::string>& out) {
    auto add = [&out](const std::string& n) {
        for (const auto& s : out)
            if (s == n) return;
        out.push_back(n);
    };
    switch (e.kind) {
    case Expr::Kind::Number: return;
    case Expr::Kind::Ident: add(e.name); return;
    case Expr::Kind::Unary: collect_idents(*e.a, out); return;
    case Expr::Kind::Binary: collect_idents(*e.a, out); collect_idents(*e.b, out); return;
    case Expr::Kind::Ternary:
        collect_idents(*e.a, out); collect_idents(*e.b, out); collect_idents(*e.c, out); return;
    case Expr::Kind::Concat:
        for (const auto& p : e.parts) collect_idents(*p, out);
        return;
    case Expr::Kind::BitSelect: add(e.name); collect_idents(*e.a, out); return;
    case Expr::Kind::PartSelect: add(e.name); return;
    }
}

} // namespace pecker
