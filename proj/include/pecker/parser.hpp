#pragma once

#include "pecker/ast.hpp"
#include "pecker/diag.hpp"
#include "pecker/eval.hpp"
#include "pecker/lexer.hpp"

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pecker {

namespace detail {

// Constructs we recognize well enough to reject by name. Anything else that
// fails to parse gets a plain ParseError with the expected-token set.
inline const char* unsupported_name(std::string_view word) {
    static const std::pair<std::string_view, const char*> table[] = {
        {"for", "for loop"},
        {"while", "while loop"},
        {"repeat", "repeat loop"},
        {"forever", "forever loop"},
        {"function", "function declaration"},
        {"task", "task declaration"},
        {"initial", "initial block"},
        {"generate", "generate block"},
        {"genvar", "generate variable"},
        {"casez", "casez statement"},
        {"casex", "casex statement"},
        {"parameter", "parameter declaration"},
        {"localparam", "localparam declaration"},
        {"integer", "integer variable"},
        {"real", "real variable"},
        {"fork", "fork block"},
        {"wait", "wait statement"},
        {"specify", "specify block"},
        {"defparam", "defparam"},
        {"tri", "tri net"},
        {"supply0", "supply net"},
        {"supply1", "supply net"},
        {"signed", "signed declaration"},
    };
    for (const auto& [w, name] : table)
        if (w == word) return name;
    return nullptr;
}

} // namespace detail

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string file)
        : toks_(std::move(tokens)), file_(std::move(file)) {}

    DesignAst run() {
        DesignAst design;
        design.file = file_;
        parse_module(design);
        if (!at(TokenKind::Eof)) {
            if (peek().is(TokenKind::Keyword, "module"))
                throw err("a design file must contain exactly one module");
            throw err("expected end of file after 'endmodule'");
        }
        validate(design);
        return design;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = idx_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& take() { return toks_[idx_ < toks_.size() - 1 ? idx_++ : idx_]; }
    bool at(TokenKind k) const { return peek().kind == k; }
    bool at(TokenKind k, std::string_view text) const { return peek().is(k, text); }
    bool accept(TokenKind k, std::string_view text) {
        if (at(k, text)) { take(); return true; }
        return false;
    }
    const Token& expect(TokenKind k, std::string_view text) {
        if (!at(k, text))
            throw err("expected '" + std::string(text) + "', found '" + describe(peek()) + "'");
        return take();
    }

    static std::string describe(const Token& t) {
        return t.kind == TokenKind::Eof ? "end of file" : t.text;
    }

    Error err(const std::string& msg) const { return Error(ErrorKind::Parse, peek().pos, msg); }
    Error unsupported(const SourcePos& pos, const std::string& what) const {
        return Error(ErrorKind::UnsupportedConstruct, pos, "unsupported construct: " + what);
    }

    void check_unsupported_word() const {
        const Token& t = peek();
        if (t.kind != TokenKind::Identifier) return;
        if (const char* name = detail::unsupported_name(t.text))
            throw unsupported(t.pos, name);
    }

    // ---- module structure ----------------------------------------------

    void parse_module(DesignAst& design) {
        expect(TokenKind::Keyword, "module");
        design.name = expect_ident("module name");
        expect(TokenKind::Punct, "(");
        if (!at(TokenKind::Punct, ")")) {
            parse_port(design);
            while (accept(TokenKind::Punct, ","))
                parse_port(design);
        }
        expect(TokenKind::Punct, ")");
        expect(TokenKind::Punct, ";");
        while (!at(TokenKind::Keyword, "endmodule")) {
            if (at(TokenKind::Eof)) throw err("expected 'endmodule'");
            parse_item(design);
        }
        take(); // endmodule
    }

    void parse_port(DesignAst& design) {
        check_unsupported_word();
        Port p;
        p.pos = peek().pos;
        if (accept(TokenKind::Keyword, "input")) p.dir = PortDir::Input;
        else if (accept(TokenKind::Keyword, "output")) p.dir = PortDir::Output;
        else if (at(TokenKind::Keyword, "inout")) throw unsupported(peek().pos, "inout port");
        else if (at(TokenKind::Identifier))
            throw unsupported(peek().pos, "non-ANSI port declaration");
        else throw err("expected 'input' or 'output'");
        p.is_reg = accept(TokenKind::Keyword, "reg");
        p.width = parse_optional_range();
        p.name = expect_ident("port name");
        declare(design, p.name, p.pos);
        design.ports.push_back(std::move(p));
    }

    void parse_item(DesignAst& design) {
        check_unsupported_word();
        const Token& t = peek();
        if (t.is(TokenKind::Keyword, "reg") || t.is(TokenKind::Keyword, "wire")) {
            parse_var_decl(design);
        } else if (t.is(TokenKind::Keyword, "assign")) {
            parse_continuous_assign(design);
        } else if (t.is(TokenKind::Keyword, "always")) {
            parse_always(design);
        } else if (t.is(TokenKind::Keyword, "input") || t.is(TokenKind::Keyword, "output")) {
            throw unsupported(t.pos, "non-ANSI port declaration");
        } else if (t.kind == TokenKind::Identifier && peek(1).kind == TokenKind::Identifier) {
            throw unsupported(t.pos, "module instantiation");
        } else {
            throw err("expected a declaration, 'assign', or 'always'");
        }
    }

    void parse_var_decl(DesignAst& design) {
        bool is_reg = peek().text == "reg";
        take();
        int width = parse_optional_range();
        for (;;) {
            VarDecl v;
            v.is_reg = is_reg;
            v.width = width;
            v.pos = peek().pos;
            v.name = expect_ident("signal name");
            declare(design, v.name, v.pos);
            design.vars.push_back(std::move(v));
            if (!accept(TokenKind::Punct, ",")) break;
        }
        expect(TokenKind::Punct, ";");
    }

    int parse_optional_range() {
        if (!accept(TokenKind::Punct, "[")) return 1;
        const Token& msb = peek();
        if (msb.kind != TokenKind::Number) throw err("expected a constant range bound");
        take();
        expect(TokenKind::Punct, ":");
        const Token& lsb = peek();
        if (lsb.kind != TokenKind::Number) throw err("expected a constant range bound");
        if (lsb.value != 0)
            throw unsupported(lsb.pos, "ranges with a non-zero low bound");
        take();
        expect(TokenKind::Punct, "]");
        std::uint64_t w = msb.value + 1;
        if (w < 1 || w > 64)
            throw Error(ErrorKind::Parse, msb.pos, "signal width must be in 1..64");
        return static_cast<int>(w);
    }

    void parse_continuous_assign(DesignAst& design) {
        SourcePos pos = take().pos; // assign
        ContinuousAssign ca;
        ca.pos = pos;
        ca.lhs = expect_ident("assignment target");
        if (at(TokenKind::Punct, "["))
            throw unsupported(peek().pos, "bit-select assignment target");
        expect(TokenKind::Punct, "=");
        ca.rhs = parse_expr();
        expect(TokenKind::Punct, ";");
        design.assigns.push_back(std::move(ca));
    }

    void parse_always(DesignAst& design) {
        AlwaysBlock block;
        block.pos = take().pos; // always
        expect(TokenKind::Punct, "@");
        bool paren = accept(TokenKind::Punct, "(");
        if (at(TokenKind::Punct, "*")) {
            take();
            block.edge_sensitive = false;
        } else if (at(TokenKind::Keyword, "posedge") || at(TokenKind::Keyword, "negedge")) {
            block.edge_sensitive = true;
            block.posedge = take().text == "posedge";
            block.clock = expect_ident("clock signal");
        } else {
            throw unsupported(peek().pos, "explicit sensitivity list (use @(*) or @(posedge clk))");
        }
        if (at(TokenKind::Punct, ",") || at(TokenKind::Identifier, "or"))
            throw unsupported(peek().pos, "multiple events in one sensitivity list");
        if (paren) expect(TokenKind::Punct, ")");
        block.body = parse_stmt_or_block();
        design.always_blocks.push_back(std::move(block));
    }

    // ---- statements ------------------------------------------------------

    std::vector<StmtPtr> parse_stmt_or_block() {
        std::vector<StmtPtr> out;
        if (accept(TokenKind::Keyword, "begin")) {
            while (!at(TokenKind::Keyword, "end")) {
                if (at(TokenKind::Eof)) throw err("expected 'end'");
                out.push_back(parse_stmt());
            }
            take(); // end
        } else {
            out.push_back(parse_stmt());
        }
        return out;
    }

    StmtPtr parse_stmt() {
        check_unsupported_word();
        const Token& t = peek();
        if (t.is(TokenKind::Keyword, "if")) return parse_if();
        if (t.is(TokenKind::Keyword, "case")) return parse_case();
        if (t.is(TokenKind::Keyword, "begin"))
            throw unsupported(t.pos, "nested bare begin/end block");
        if (t.kind == TokenKind::Identifier) return parse_assignment();
        throw err("expected a statement");
    }

    StmtPtr parse_assignment() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::Assign;
        s->pos = peek().pos;
        s->lhs = expect_ident("assignment target");
        if (at(TokenKind::Punct, "["))
            throw unsupported(peek().pos, "bit-select assignment target");
        if (accept(TokenKind::Punct, "=")) s->nonblocking = false;
        else if (accept(TokenKind::Punct, "<=")) s->nonblocking = true;
        else throw err("expected '=' or '<='");
        s->rhs = parse_expr();
        expect(TokenKind::Punct, ";");
        return s;
    }

    StmtPtr parse_if() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::If;
        s->pos = take().pos; // if
        expect(TokenKind::Punct, "(");
        s->cond = parse_expr();
        expect(TokenKind::Punct, ")");
        s->then_stmts = parse_stmt_or_block();
        if (accept(TokenKind::Keyword, "else"))
            s->else_stmts = parse_stmt_or_block();
        return s;
    }

    StmtPtr parse_case() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::Case;
        s->pos = take().pos; // case
        expect(TokenKind::Punct, "(");
        s->subject = parse_expr();
        expect(TokenKind::Punct, ")");
        bool saw_default = false;
        while (!at(TokenKind::Keyword, "endcase")) {
            if (at(TokenKind::Eof)) throw err("expected 'endcase'");
            Stmt::CaseArm arm;
            arm.pos = peek().pos;
            if (accept(TokenKind::Keyword, "default")) {
                if (saw_default) throw err("duplicate default arm");
                saw_default = true;
            } else {
                // Labels parse below the ternary level so the arm's ':' stays
                // unambiguous; parenthesize a label if it needs ?:.
                arm.labels.push_back(parse_binary(0));
                while (accept(TokenKind::Punct, ","))
                    arm.labels.push_back(parse_binary(0));
            }
            expect(TokenKind::Punct, ":");
            arm.body = parse_stmt_or_block();
            s->arms.push_back(std::move(arm));
        }
        take(); // endcase
        if (s->arms.empty()) throw err("case statement has no arms");
        return s;
    }

    // ---- expressions ------------------------------------------------------

    ExprPtr parse_expr() {
        ExprPtr cond = parse_binary(0);
        if (!accept(TokenKind::Punct, "?")) return cond;
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::Ternary;
        e->pos = cond->pos;
        e->a = std::move(cond);
        e->b = parse_expr();
        expect(TokenKind::Punct, ":");
        e->c = parse_expr();
        return e;
    }

    // Binary operators by rising precedence: | ^ & (==,!=) (<,<=,>,>=) (<<,>>) (+,-) (*)
    ExprPtr parse_binary(int level) {
        struct Level { std::pair<std::string_view, BinaryOp> ops[4]; int n; };
        static const Level levels[] = {
            {{{"|", BinaryOp::Or}}, 1},
            {{{"^", BinaryOp::Xor}}, 1},
            {{{"&", BinaryOp::And}}, 1},
            {{{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}}, 2},
            {{{"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {">", BinaryOp::Gt}, {">=", BinaryOp::Ge}}, 4},
            {{{"<<", BinaryOp::Shl}, {">>", BinaryOp::Shr}}, 2},
            {{{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}}, 2},
            {{{"*", BinaryOp::Mul}}, 1},
        };
        constexpr int n_levels = static_cast<int>(sizeof(levels) / sizeof(levels[0]));
        if (level >= n_levels) return parse_unary();

        ExprPtr lhs = parse_binary(level + 1);
        for (;;) {
            const Level& lv = levels[level];
            bool matched = false;
            for (int i = 0; i < lv.n; ++i) {
                if (at(TokenKind::Punct, lv.ops[i].first)) {
                    SourcePos pos = take().pos;
                    auto e = std::make_unique<Expr>();
                    e->kind = Expr::Kind::Binary;
                    e->pos = pos;
                    e->bop = lv.ops[i].second;
                    e->a = std::move(lhs);
                    e->b = parse_binary(level + 1);
                    lhs = std::move(e);
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    ExprPtr parse_unary() {
        if (at(TokenKind::Punct, "~")) {
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Unary;
            e->pos = take().pos;
            e->uop = UnaryOp::Not;
            e->a = parse_unary();
            return e;
        }
        if (at(TokenKind::Punct, "-") || at(TokenKind::Punct, "!"))
            throw unsupported(peek().pos, "unary '" + peek().text + "'");
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        if (t.kind == TokenKind::Number) {
            take();
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Number;
            e->pos = t.pos;
            e->value = t.value;
            e->width = t.width;
            e->sized = t.sized;
            return e;
        }
        if (t.kind == TokenKind::Identifier) {
            check_unsupported_word();
            take();
            if (at(TokenKind::Punct, "("))
                throw unsupported(t.pos, "function call");
            if (!at(TokenKind::Punct, "[")) {
                auto e = std::make_unique<Expr>();
                e->kind = Expr::Kind::Ident;
                e->pos = t.pos;
                e->name = t.text;
                return e;
            }
            take(); // [
            ExprPtr first = parse_expr();
            if (accept(TokenKind::Punct, ":")) {
                if (first->kind != Expr::Kind::Number)
                    throw unsupported(first->pos, "non-constant part-select bound");
                const Token& lsb = peek();
                if (lsb.kind != TokenKind::Number)
                    throw unsupported(lsb.pos, "non-constant part-select bound");
                take();
                expect(TokenKind::Punct, "]");
                auto e = std::make_unique<Expr>();
                e->kind = Expr::Kind::PartSelect;
                e->pos = t.pos;
                e->name = t.text;
                e->msb = static_cast<int>(first->value);
                e->lsb = static_cast<int>(lsb.value);
                return e;
            }
            expect(TokenKind::Punct, "]");
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::BitSelect;
            e->pos = t.pos;
            e->name = t.text;
            e->a = std::move(first);
            return e;
        }
        if (t.is(TokenKind::Punct, "(")) {
            take();
            ExprPtr e = parse_expr();
            expect(TokenKind::Punct, ")");
            return e;
        }
        if (t.is(TokenKind::Punct, "{")) {
            SourcePos pos = take().pos;
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Concat;
            e->pos = pos;
            e->parts.push_back(parse_expr());
            if (at(TokenKind::Punct, "{"))
                throw unsupported(peek().pos, "replication");
            while (accept(TokenKind::Punct, ","))
                e->parts.push_back(parse_expr());
            expect(TokenKind::Punct, "}");
            return e;
        }
        throw err("expected an expression, found '" + describe(t) + "'");
    }

    std::string expect_ident(const std::string& what) {
        check_unsupported_word();
        if (!at(TokenKind::Identifier))
            throw err("expected " + what + ", found '" + describe(peek()) + "'");
        return take().text;
    }

    // ---- validation -------------------------------------------------------

    void declare(DesignAst& design, const std::string& name, const SourcePos& pos) {
        if (design.is_declared(name))
            throw Error(ErrorKind::Parse, pos, "duplicate declaration of '" + name + "'");
    }

    void validate(DesignAst& design) {
        // Single clock domain; the clock must be a declared input.
        for (const auto& blk : design.always_blocks) {
            if (!blk.edge_sensitive) continue;
            const Port* p = design.find_port(blk.clock);
            if (!p || p->dir != PortDir::Input)
                throw Error(ErrorKind::Parse, blk.pos,
                            "clock '" + blk.clock + "' is not a declared input port");
            if (design.clock && *design.clock != blk.clock)
                throw Error(ErrorKind::UnsupportedConstruct, blk.pos,
                            "unsupported construct: multiple clock domains ('" + *design.clock +
                                "' and '" + blk.clock + "')");
            design.clock = blk.clock;
        }
        for (auto& ca : design.assigns) {
            check_target(design, ca.lhs, ca.pos);
            annotate_widths(*ca.rhs, design);
        }
        for (auto& blk : design.always_blocks)
            for (auto& s : blk.body)
                validate_stmt(design, *s);
    }

    void validate_stmt(DesignAst& design, Stmt& s) {
        switch (s.kind) {
        case Stmt::Kind::Assign:
            check_target(design, s.lhs, s.pos);
            annotate_widths(*s.rhs, design);
            break;
        case Stmt::Kind::If:
            annotate_widths(*s.cond, design);
            for (auto& c : s.then_stmts) validate_stmt(design, *c);
            for (auto& c : s.else_stmts) validate_stmt(design, *c);
            break;
        case Stmt::Kind::Case:
            annotate_widths(*s.subject, design);
            for (auto& arm : s.arms) {
                for (auto& l : arm.labels) annotate_widths(*l, design);
                for (auto& c : arm.body) validate_stmt(design, *c);
            }
            break;
        }
    }

    void check_target(const DesignAst& design, const std::string& name, const SourcePos& pos) {
        if (const Port* p = design.find_port(name)) {
            if (p->dir == PortDir::Input)
                throw Error(ErrorKind::Parse, pos, "assignment to input port '" + name + "'");
            return;
        }
        if (!design.find_var(name))
            throw Error(ErrorKind::Parse, pos, "undeclared identifier '" + name + "'");
    }

    std::vector<Token> toks_;
    std::string file_;
    std::size_t idx_ = 0;
};

/// Parse one module from source text. `file` names the origin for diagnostics.
inline DesignAst parse_design(std::string_view source, const std::string& file) {
    return Parser(tokenize(source, file), file).run();
}

} // namespace pecker
