#include <set>
#include <string>

#include "java_lexer.hpp"
#include "jeedep/oo_frontend.hpp"

namespace jeedep {

namespace {

using java::Token;

// Raised for problems confined to one statement (or field initializer); the
// statement is skipped and parsing continues.
class StatementError : public std::runtime_error {
public:
    StatementError(const std::string& what, Position pos, bool unsupported)
        : std::runtime_error(what), pos_(pos), unsupported_(unsupported)
    {
    }
    Position position() const { return pos_; }
    bool unsupported() const { return unsupported_; }

private:
    Position pos_;
    bool unsupported_;
};

const std::set<std::string, std::less<>> kPrimitives = {"int",   "long",   "short",   "byte", "char",
                                                        "float", "double", "boolean", "void"};

const std::set<std::string, std::less<>> kModifiers = {
    "public",   "private",  "protected", "static",   "final",     "abstract",  "native",
    "synchronized", "transient", "volatile", "strictfp", "default", "sealed", "non-sealed",
};

const std::set<std::string, std::less<>> kReserved = {
    "abstract", "assert",     "boolean",   "break",     "byte",       "case",      "catch",   "char",
    "class",    "const",      "continue",  "default",   "do",         "double",    "else",    "enum",
    "extends",  "final",      "finally",   "float",     "for",        "goto",      "if",      "implements",
    "import",   "instanceof", "int",       "interface", "long",       "native",    "new",     "package",
    "private",  "protected",  "public",    "return",    "short",      "static",    "strictfp", "super",
    "switch",   "synchronized", "this",    "throw",     "throws",     "transient", "try",     "void",
    "volatile", "while",      "true",      "false",     "null",
};

struct Modifiers {
    std::vector<AnnotationUse> annotations;
    bool is_public = false;
    bool is_static = false;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string_view path, Diagnostics& diags)
        : toks_(std::move(tokens)), path_(path), diags_(diags)
    {
    }

    OoCompilationUnit parse()
    {
        unit_.path = std::string(path_);
        Modifiers leading = parse_modifiers();
        if (accept("package")) {
            unit_.package_name = qualified_name();
            expect(";");
            leading = {};
        }
        while (peek().is("import")) {
            next();
            ImportDecl imp;
            imp.is_static = accept("static");
            imp.name = qualified_name();
            if (accept(".")) {
                expect("*");
                imp.name += ".*";
            }
            expect(";");
            unit_.imports.push_back(std::move(imp));
        }
        bool first = true;
        while (peek().kind != Token::Kind::End) {
            if (accept(";")) continue;
            Modifiers mods = first ? merge(std::move(leading), parse_modifiers()) : parse_modifiers();
            first = false;
            if (!parse_type_decl(mods, "")) error("expected a type declaration");
        }
        if (unit_.classes.empty()) throw SyntaxError("no class or interface declaration", peek().pos);
        return std::move(unit_);
    }

private:
    // ---- token helpers -------------------------------------------------

    const Token& peek(std::size_t k = 0) const
    {
        std::size_t idx = std::min(i_ + k, toks_.size() - 1);
        return toks_[idx];
    }
    const Token& next()
    {
        const Token& t = toks_[i_];
        if (i_ + 1 < toks_.size()) ++i_;
        return t;
    }
    bool accept(std::string_view text)
    {
        if (peek().is(text) && peek().kind != Token::Kind::String) {
            next();
            return true;
        }
        return false;
    }
    bool at(std::string_view text) const { return peek().is(text) && peek().kind != Token::Kind::String; }

    [[noreturn]] void error(const std::string& what) const
    {
        if (body_depth_ > 0) throw StatementError(what, peek().pos, false);
        throw SyntaxError(what, peek().pos);
    }
    [[noreturn]] void unsupported(const std::string& what) const { throw StatementError(what, peek().pos, true); }

    void expect(std::string_view text)
    {
        if (!accept(text)) {
            const Token& t = peek();
            error("expected '" + std::string(text) + "' but found " +
                  (t.kind == Token::Kind::End ? std::string("end of file") : "'" + t.text + "'"));
        }
    }

    std::string identifier()
    {
        const Token& t = peek();
        if (!t.ident() || kReserved.count(t.text)) error("expected identifier, found '" + t.text + "'");
        return next().text;
    }

    std::string qualified_name()
    {
        std::string name = identifier();
        while (at(".") && peek(1).ident() && !kReserved.count(peek(1).text)) {
            next();
            name += "." + next().text;
        }
        return name;
    }

    static bool adjacent(const Token& a, const Token& b) { return a.offset + a.length == b.offset; }

    static Modifiers merge(Modifiers a, Modifiers b)
    {
        for (auto& ann : b.annotations) a.annotations.push_back(std::move(ann));
        a.is_public = a.is_public || b.is_public;
        a.is_static = a.is_static || b.is_static;
        return a;
    }

    // Skips a balanced (), [], {} or <> group starting at the current token.
    void skip_balanced(std::string_view open, std::string_view close)
    {
        int depth = 0;
        do {
            if (peek().kind == Token::Kind::End) throw SyntaxError("unbalanced '" + std::string(open) + "'", peek().pos);
            if (at(open)) ++depth;
            else if (at(close)) --depth;
            next();
        } while (depth > 0);
    }

    // ---- declarations --------------------------------------------------

    Modifiers parse_modifiers()
    {
        Modifiers mods;
        for (;;) {
            if (at("@") && !peek(1).is("interface")) {
                mods.annotations.push_back(parse_annotation());
            } else if (peek().ident() && kModifiers.count(peek().text)) {
                if (peek().is("public")) mods.is_public = true;
                if (peek().is("static")) mods.is_static = true;
                // "default" in a switch is handled by the switch parser, never here
                next();
            } else {
                return mods;
            }
        }
    }

    AnnotationUse parse_annotation()
    {
        AnnotationUse ann;
        ann.pos = peek().pos;
        expect("@");
        ann.name = qualified_name();
        if (!accept("(")) return ann;
        if (accept(")")) return ann;
        if (peek().ident() && peek(1).is("=")) {
            do {
                std::string key = identifier();
                expect("=");
                ann.arguments[key] = parse_annotation_value();
            } while (accept(","));
        } else {
            ann.arguments["value"] = parse_annotation_value();
        }
        expect(")");
        return ann;
    }

    AnnotationValue parse_annotation_value()
    {
        AnnotationValue value;
        auto element = [&] {
            if (peek().kind == Token::Kind::String && (peek(1).is(",") || peek(1).is(")") || peek(1).is("}"))) {
                value.literals.push_back(next().text);
                return;
            }
            value.literal_only = false;
            int depth = 0;
            while (peek().kind != Token::Kind::End) {
                if (depth == 0 && (at(",") || at(")") || at("}"))) break;
                if (at("(") || at("{")) ++depth;
                if (at(")") || at("}")) --depth;
                next();
            }
        };
        if (accept("{")) {
            while (!at("}")) {
                element();
                if (!accept(",")) break;
            }
            expect("}");
        } else {
            element();
        }
        return value;
    }

    void skip_type_params()
    {
        if (at("<")) skip_balanced("<", ">");
    }

    std::vector<std::string> type_list()
    {
        std::vector<std::string> out;
        do {
            out.push_back(parse_type());
        } while (accept(","));
        return out;
    }

    // Returns false when the current token does not start a type declaration.
    bool parse_type_decl(const Modifiers& mods, const std::string& outer)
    {
        if (at("@") && peek(1).is("interface")) {
            next();
            next();
            identifier();
            skip_balanced("{", "}");
            return true;
        }
        ClassDecl cls;
        cls.pos = peek().pos;
        if (accept("class")) cls.kind = ClassDecl::Kind::Class;
        else if (accept("interface")) cls.kind = ClassDecl::Kind::Interface;
        else if (accept("enum")) cls.kind = ClassDecl::Kind::Enum;
        else if (peek().is("record") && peek(1).ident()) {
            next();
            cls.kind = ClassDecl::Kind::Record;
        } else
            return false;

        cls.name = identifier();
        cls.outer = outer;
        cls.annotations = mods.annotations;
        cls.is_public = mods.is_public;
        skip_type_params();

        if (cls.kind == ClassDecl::Kind::Record) {
            for (auto& p : parse_params()) {
                FieldDecl f;
                f.name = p.name;
                f.type_name = p.type_name;
                f.pos = cls.pos;
                cls.fields.push_back(std::move(f));
            }
        }
        if (accept("extends")) {
            auto bases = type_list();
            if (cls.kind == ClassDecl::Kind::Interface)
                cls.interfaces = std::move(bases);
            else
                cls.superclass = bases.front();
        }
        if (accept("implements")) {
            for (auto& i : type_list()) cls.interfaces.push_back(std::move(i));
        }
        if (accept("permits")) type_list();

        std::size_t slot = unit_.classes.size();
        unit_.classes.emplace_back();
        parse_class_body(cls);
        unit_.classes[slot] = std::move(cls);
        return true;
    }

    void parse_class_body(ClassDecl& cls)
    {
        expect("{");
        if (cls.kind == ClassDecl::Kind::Enum) skip_enum_constants();
        for (;;) {
            if (peek().kind == Token::Kind::End) throw SyntaxError("unterminated class body for " + cls.name, cls.pos);
            if (accept("}")) return;
            if (accept(";")) continue;
            if (at("{") || (at("static") && peek(1).is("{"))) {
                accept("static");
                cls.initializers.push_back(parse_body_block());
                continue;
            }
            Modifiers mods = parse_modifiers();
            if (parse_type_decl(mods, cls.nested_name())) continue;
            skip_type_params();
            Position pos = peek().pos;
            if (peek().is(cls.name) && peek(1).is("(")) {
                MethodDecl m;
                m.name = identifier();
                m.is_constructor = true;
                parse_method_rest(m, mods, pos);
                cls.methods.push_back(std::move(m));
                continue;
            }
            std::string type = parse_type();
            Position name_pos = peek().pos;
            std::string name = identifier();
            if (at("(")) {
                MethodDecl m;
                m.name = std::move(name);
                m.return_type = std::move(type);
                parse_method_rest(m, mods, name_pos);
                cls.methods.push_back(std::move(m));
                continue;
            }
            parse_field_rest(cls, mods, type, name, name_pos);
        }
    }

    void skip_enum_constants()
    {
        while (!at(";") && !at("}")) {
            if (peek().kind == Token::Kind::End) throw SyntaxError("unterminated enum", peek().pos);
            if (at("@")) {
                parse_annotation();
                continue;
            }
            identifier();
            if (at("(")) skip_balanced("(", ")");
            if (at("{")) skip_balanced("{", "}");
            if (!accept(",")) break;
        }
        accept(";");
    }

    std::vector<Parameter> parse_params()
    {
        std::vector<Parameter> params;
        expect("(");
        if (accept(")")) return params;
        do {
            parse_modifiers();
            Parameter p;
            p.type_name = parse_type();
            if (accept("...")) p.type_name += "[]";
            if (at("this")) {  // receiver parameter
                next();
                continue;
            }
            p.name = identifier();
            while (at("[") && peek(1).is("]")) {
                next();
                next();
                p.type_name += "[]";
            }
            params.push_back(std::move(p));
        } while (accept(","));
        expect(")");
        return params;
    }

    void parse_method_rest(MethodDecl& m, const Modifiers& mods, Position pos)
    {
        m.pos = pos;
        m.annotations = mods.annotations;
        m.is_static = mods.is_static;
        m.params = parse_params();
        while (at("[") && peek(1).is("]")) {
            next();
            next();
        }
        if (accept("throws")) type_list();
        if (accept("default")) {  // annotation member default
            while (!at(";") && peek().kind != Token::Kind::End) next();
        }
        if (accept(";")) return;
        if (!at("{")) error("expected method body for " + m.name);
        m.has_body = true;
        m.body = parse_body_block();
    }

    void parse_field_rest(ClassDecl& cls, const Modifiers& mods, const std::string& type, std::string name,
                          Position pos)
    {
        for (;;) {
            FieldDecl f;
            f.name = std::move(name);
            f.type_name = type;
            f.is_static = mods.is_static;
            f.pos = pos;
            while (at("[") && peek(1).is("]")) {
                next();
                next();
                f.type_name += "[]";
            }
            if (accept("=")) {
                std::size_t start = i_;
                ++body_depth_;
                try {
                    f.init = parse_var_init();
                } catch (const StatementError& e) {
                    report(e);
                    i_ = start;
                    resync_field();
                    --body_depth_;
                    cls.fields.push_back(std::move(f));
                    return;
                }
                --body_depth_;
            }
            cls.fields.push_back(std::move(f));
            if (accept(";")) return;
            expect(",");
            pos = peek().pos;
            name = identifier();
        }
    }

    // Skips to the ';' that ends a field declaration.
    void resync_field()
    {
        int depth = 0;
        while (peek().kind != Token::Kind::End) {
            if (at("{") || at("(")) ++depth;
            if (at("}") || at(")")) {
                if (depth == 0) return;
                --depth;
            }
            if (depth == 0 && at(";")) {
                next();
                return;
            }
            next();
        }
        throw SyntaxError("unterminated field declaration", peek().pos);
    }

    // ---- types ---------------------------------------------------------

    void skip_type_args()
    {
        expect("<");
        int depth = 1;
        while (depth > 0) {
            const Token& t = peek();
            if (t.is("<")) ++depth;
            else if (t.is(">")) --depth;
            else if (t.is(">=")) error("unexpected '>=' in type arguments");
            else if (!(t.ident() || t.is(".") || t.is(",") || t.is("?") || t.is("&") || t.is("[") || t.is("]") ||
                       t.is("@")))
                error("unexpected '" + t.text + "' in type arguments");
            next();
        }
    }

    std::string parse_type()
    {
        while (at("@")) parse_annotation();
        std::string name;
        if (peek().ident() && kPrimitives.count(peek().text)) {
            name = next().text;
        } else {
            name = identifier();
            if (at("<")) skip_type_args();
            while (at(".") && peek(1).ident() && !kReserved.count(peek(1).text)) {
                next();
                name += "." + next().text;
                if (at("<")) skip_type_args();
            }
        }
        while (at("[") && peek(1).is("]")) {
            next();
            next();
            name += "[]";
        }
        return name;
    }

    std::optional<std::string> try_parse_type()
    {
        std::size_t save = i_;
        int depth = body_depth_;
        body_depth_ = 1;  // failures must not escape as structural errors
        try {
            auto t = parse_type();
            body_depth_ = depth;
            return t;
        } catch (const StatementError&) {
            body_depth_ = depth;
            i_ = save;
            return std::nullopt;
        }
    }

    // ---- statements ----------------------------------------------------

    void report(const StatementError& e)
    {
        diags_.warn(e.unsupported() ? "unsupported-statement" : "statement-parse-error",
                    std::string(e.unsupported() ? "unsupported construct skipped: " : "statement skipped: ") + e.what(),
                    SourceLocation{std::string(path_), e.position().line, e.position().column});
    }

    std::vector<Statement> parse_body_block()
    {
        ++body_depth_;
        Position open = peek().pos;
        expect("{");
        auto out = statements_until_close(open);
        --body_depth_;
        return out;
    }

    // Parses statements up to and including the closing brace.
    std::vector<Statement> statements_until_close(Position open, bool in_switch = false,
                                                  std::vector<Expr>* labels = nullptr)
    {
        std::vector<Statement> out;
        for (;;) {
            if (peek().kind == Token::Kind::End) throw SyntaxError("unterminated block", open);
            if (accept("}")) return out;
            if (in_switch && (at("case") || at("default"))) {
                std::size_t start = i_;
                try {
                    parse_case_label(labels);
                } catch (const StatementError& e) {
                    report(e);
                    i_ = start;
                    resync();
                }
                continue;
            }
            std::size_t start = i_;
            try {
                out.push_back(parse_statement());
            } catch (const StatementError& e) {
                report(e);
                i_ = start;
                resync();
            }
        }
    }

    void parse_case_label(std::vector<Expr>* labels)
    {
        if (accept("default")) {
            if (at("->")) unsupported("switch rule");
            expect(":");
            return;
        }
        expect("case");
        do {
            Expr e = parse_conditional();
            if (labels) labels->push_back(std::move(e));
        } while (accept(","));
        if (at("->")) unsupported("switch rule");
        expect(":");
    }

    // Skips the tokens of one failed statement.
    void resync()
    {
        int brace = 0;
        int paren = 0;
        for (;;) {
            const Token& t = peek();
            if (t.kind == Token::Kind::End) throw SyntaxError("unterminated block", t.pos);
            if (t.is("{")) {
                ++brace;
            } else if (t.is("}")) {
                if (brace == 0) return;
                --brace;
                next();
                if (brace == 0 && paren == 0) {
                    if (accept(";")) return;
                    if (!(at(")") || at(",") || at("."))) return;
                }
                continue;
            } else if (t.is("(")) {
                ++paren;
            } else if (t.is(")")) {
                paren = std::max(0, paren - 1);
            } else if (t.is(";") && brace == 0) {
                next();
                return;
            }
            next();
        }
    }

    Statement make(Statement::Kind kind, Position pos)
    {
        Statement s;
        s.kind = kind;
        s.pos = pos;
        return s;
    }

    std::vector<Statement> as_body(Statement s)
    {
        if (s.kind == Statement::Kind::Block) return std::move(s.body);
        std::vector<Statement> out;
        out.push_back(std::move(s));
        return out;
    }

    bool looks_like_local_var()
    {
        std::size_t save = i_;
        while (at("final") || at("@")) {
            if (at("@")) {
                int depth = body_depth_;
                try {
                    parse_annotation();
                } catch (...) {
                    body_depth_ = depth;
                    i_ = save;
                    return false;
                }
            } else {
                next();
            }
        }
        bool result = false;
        if (peek().ident() && !(kReserved.count(peek().text) && !kPrimitives.count(peek().text))) {
            if (try_parse_type() && peek().ident() && !kReserved.count(peek().text)) {
                const Token& after = peek(1);
                result = after.is("=") || after.is(";") || after.is(",") || after.is("[") || after.is(":");
            }
        }
        i_ = save;
        return result;
    }

    Statement parse_local_var()
    {
        Statement s = make(Statement::Kind::LocalVar, peek().pos);
        parse_modifiers();
        s.type_name = parse_type();
        do {
            Declarator d;
            d.pos = peek().pos;
            d.name = identifier();
            while (at("[") && peek(1).is("]")) {
                next();
                next();
            }
            if (accept("=")) d.init = parse_var_init();
            s.declarators.push_back(std::move(d));
        } while (accept(","));
        return s;
    }

    Expr parse_var_init() { return at("{") ? parse_array_init() : parse_expression(); }

    Expr parse_array_init()
    {
        Expr e;
        e.kind = Expr::Kind::ArrayInit;
        e.pos = peek().pos;
        expect("{");
        while (!at("}")) {
            e.operands.push_back(parse_var_init());
            if (!accept(",")) break;
        }
        expect("}");
        return e;
    }

    Statement parse_statement()
    {
        const Token& t = peek();
        Position pos = t.pos;

        if (t.kind != Token::Kind::Identifier && t.kind != Token::Kind::Punct) {
            Statement s = make(Statement::Kind::ExprStmt, pos);
            s.expr = parse_expression();
            expect(";");
            return s;
        }
        if (at("{")) {
            Statement s = make(Statement::Kind::Block, pos);
            next();
            s.body = statements_until_close(pos);
            return s;
        }
        if (accept(";")) return make(Statement::Kind::Empty, pos);
        if (accept("if")) {
            Statement s = make(Statement::Kind::If, pos);
            expect("(");
            s.expr = parse_expression();
            expect(")");
            s.body = as_body(parse_statement());
            if (accept("else")) s.else_body = as_body(parse_statement());
            return s;
        }
        if (accept("for")) return parse_for(pos);
        if (accept("while")) {
            Statement s = make(Statement::Kind::While, pos);
            expect("(");
            s.expr = parse_expression();
            expect(")");
            s.body = as_body(parse_statement());
            return s;
        }
        if (accept("do")) {
            Statement s = make(Statement::Kind::DoWhile, pos);
            s.body = as_body(parse_statement());
            expect("while");
            expect("(");
            s.expr = parse_expression();
            expect(")");
            expect(";");
            return s;
        }
        if (accept("return")) {
            Statement s = make(Statement::Kind::Return, pos);
            if (!at(";")) s.expr = parse_expression();
            expect(";");
            return s;
        }
        if (accept("throw")) {
            Statement s = make(Statement::Kind::Throw, pos);
            s.expr = parse_expression();
            expect(";");
            return s;
        }
        if (at("break") || at("continue")) {
            Statement s = make(at("break") ? Statement::Kind::Break : Statement::Kind::Continue, pos);
            next();
            if (peek().ident() && !kReserved.count(peek().text)) next();
            expect(";");
            return s;
        }
        if (accept("try")) return parse_try(pos);
        if (accept("switch")) {
            Statement s = make(Statement::Kind::Switch, pos);
            expect("(");
            s.expr = parse_expression();
            expect(")");
            Position open = peek().pos;
            expect("{");
            s.body = statements_until_close(open, true, &s.update);
            return s;
        }
        if (at("synchronized") && peek(1).is("(")) {
            next();
            Statement s = make(Statement::Kind::Sync, pos);
            expect("(");
            s.expr = parse_expression();
            expect(")");
            Position open = peek().pos;
            expect("{");
            s.body = statements_until_close(open);
            return s;
        }
        if (at("assert")) {
            next();
            Statement s = make(Statement::Kind::ExprStmt, pos);
            s.expr = parse_expression();
            if (accept(":")) parse_expression();
            expect(";");
            return s;
        }
        if (at("class") || at("interface") || at("enum") || (at("record") && peek(1).ident() && peek(2).is("(")) ||
            ((at("abstract") || at("static")) && (peek(1).is("class") || peek(1).is("interface"))))
            unsupported("local type declaration");
        if (at("yield") && !peek(1).is("=") && !peek(1).is("(") && !peek(1).is("."))
            unsupported("yield statement");
        if (peek().ident() && !kReserved.count(peek().text) && peek(1).is(":") && !peek(2).is(":")) {
            next();
            next();
            return parse_statement();  // labeled statement
        }
        if (looks_like_local_var()) {
            Statement s = parse_local_var();
            expect(";");
            return s;
        }
        Statement s = make(Statement::Kind::ExprStmt, pos);
        s.expr = parse_expression();
        expect(";");
        return s;
    }

    Statement parse_for(Position pos)
    {
        expect("(");
        // enhanced for
        {
            std::size_t save = i_;
            while (at("final") || at("@")) {
                if (at("@"))
                    parse_annotation();
                else
                    next();
            }
            auto type = try_parse_type();
            if (type && peek().ident() && !kReserved.count(peek().text) && peek(1).is(":")) {
                Statement s = make(Statement::Kind::ForEach, pos);
                s.type_name = *type;
                Declarator d;
                d.pos = peek().pos;
                d.name = identifier();
                s.declarators.push_back(std::move(d));
                expect(":");
                s.expr = parse_expression();
                expect(")");
                s.body = as_body(parse_statement());
                return s;
            }
            i_ = save;
        }
        Statement s = make(Statement::Kind::For, pos);
        if (!at(";")) {
            if (looks_like_local_var()) {
                s.init.push_back(parse_local_var());
            } else {
                do {
                    Statement e = make(Statement::Kind::ExprStmt, peek().pos);
                    e.expr = parse_expression();
                    s.init.push_back(std::move(e));
                } while (accept(","));
            }
        }
        expect(";");
        if (!at(";")) s.expr = parse_expression();
        expect(";");
        if (!at(")")) {
            do {
                s.update.push_back(parse_expression());
            } while (accept(","));
        }
        expect(")");
        s.body = as_body(parse_statement());
        return s;
    }

    Statement parse_try(Position pos)
    {
        Statement s = make(Statement::Kind::Try, pos);
        if (accept("(")) {
            while (!at(")")) {
                if (looks_like_local_var()) {
                    s.init.push_back(parse_local_var());
                } else {
                    Statement e = make(Statement::Kind::ExprStmt, peek().pos);
                    e.expr = parse_expression();
                    s.init.push_back(std::move(e));
                }
                if (!accept(";")) break;
            }
            expect(")");
        }
        Position open = peek().pos;
        expect("{");
        s.body = statements_until_close(open);
        while (at("catch")) {
            CatchClause c;
            c.pos = next().pos;
            expect("(");
            parse_modifiers();
            c.type_name = parse_type();
            while (accept("|")) parse_type();
            c.var_name = identifier();
            expect(")");
            Position copen = peek().pos;
            expect("{");
            c.body = statements_until_close(copen);
            s.catches.push_back(std::move(c));
        }
        if (accept("finally")) {
            Position fopen = peek().pos;
            expect("{");
            s.else_body = statements_until_close(fopen);
        }
        if (s.catches.empty() && s.else_body.empty() && s.init.empty()) error("try without catch or finally");
        return s;
    }

    // ---- expressions ---------------------------------------------------

    Expr node(Expr::Kind kind, Position pos, std::string text = {})
    {
        Expr e;
        e.kind = kind;
        e.pos = pos;
        e.text = std::move(text);
        return e;
    }

    bool lambda_ahead() const
    {
        if (peek().ident() && peek(1).is("->")) return true;
        if (!at("(")) return false;
        int depth = 0;
        for (std::size_t k = 0; i_ + k < toks_.size(); ++k) {
            const Token& t = peek(k);
            if (t.kind == Token::Kind::End) return false;
            if (t.is("(")) ++depth;
            if (t.is(")") && --depth == 0) return peek(k + 1).is("->");
        }
        return false;
    }

    Expr parse_expression() { return parse_assignment(); }

    // Assignment operator at the current position, with its token count.
    std::pair<std::string, int> assignment_op() const
    {
        static const std::set<std::string, std::less<>> simple = {"=",  "+=", "-=", "*=", "/=",
                                                                  "%=", "&=", "|=", "^=", "<<="};
        const Token& t = peek();
        if (t.kind == Token::Kind::Punct && simple.count(t.text)) return {t.text, 1};
        if (t.is(">") && peek(1).is(">=") && adjacent(t, peek(1))) return {">>=", 2};
        if (t.is(">") && peek(1).is(">") && peek(2).is(">=") && adjacent(t, peek(1)) && adjacent(peek(1), peek(2)))
            return {">>>=", 3};
        return {{}, 0};
    }

    Expr parse_assignment()
    {
        if (lambda_ahead()) unsupported("lambda expression");
        Expr lhs = parse_conditional();
        auto [op, count] = assignment_op();
        if (count == 0) return lhs;
        Position pos = peek().pos;
        for (int k = 0; k < count; ++k) next();
        Expr e = node(Expr::Kind::Assign, pos, op);
        e.operands.push_back(std::move(lhs));
        e.operands.push_back(at("{") ? parse_array_init() : parse_assignment());
        return e;
    }

    Expr parse_conditional()
    {
        Expr cond = parse_binary(1);
        if (!at("?")) return cond;
        Position pos = next().pos;
        Expr e = node(Expr::Kind::Conditional, pos);
        e.operands.push_back(std::move(cond));
        if (lambda_ahead()) unsupported("lambda expression");
        e.operands.push_back(parse_conditional());
        expect(":");
        if (lambda_ahead()) unsupported("lambda expression");
        e.operands.push_back(parse_conditional());
        return e;
    }

    // Binary operator at the current position: (text, precedence, tokens).
    std::tuple<std::string, int, int> binary_op() const
    {
        const Token& t = peek();
        if (t.kind != Token::Kind::Punct && !t.is("instanceof")) return {{}, 0, 0};
        if (t.is(">")) {
            if (peek(1).is(">") && adjacent(t, peek(1))) {
                if (peek(2).is(">") && adjacent(peek(1), peek(2))) {
                    if (peek(3).is(">=") && adjacent(peek(2), peek(3))) return {{}, 0, 0};
                    return {">>>", 8, 3};
                }
                if (peek(2).is(">=") && adjacent(peek(1), peek(2))) return {{}, 0, 0};
                return {">>", 8, 2};
            }
            if (peek(1).is(">=") && adjacent(t, peek(1))) return {{}, 0, 0};
            return {">", 7, 1};
        }
        static const std::map<std::string, int, std::less<>> prec = {
            {"||", 1}, {"&&", 2}, {"|", 3},  {"^", 4},  {"&", 5},  {"==", 6},         {"!=", 6},
            {"<", 7},  {"<=", 7}, {">=", 7}, {"<<", 8}, {"+", 9},  {"-", 9},          {"*", 10},
            {"/", 10}, {"%", 10}, {"instanceof", 7},
        };
        auto it = prec.find(t.text);
        if (it == prec.end()) return {{}, 0, 0};
        return {it->first, it->second, 1};
    }

    Expr parse_binary(int min_prec)
    {
        Expr lhs = parse_unary();
        for (;;) {
            auto [op, prec, count] = binary_op();
            if (count == 0 || prec < min_prec) return lhs;
            Position pos = peek().pos;
            for (int k = 0; k < count; ++k) next();
            if (op == "instanceof") {
                accept("final");
                Expr e = node(Expr::Kind::InstanceOf, pos, parse_type());
                if (peek().ident() && !kReserved.count(peek().text)) next();  // pattern binding
                e.operands.push_back(std::move(lhs));
                lhs = std::move(e);
                continue;
            }
            Expr rhs = parse_binary(prec + 1);
            Expr e = node(Expr::Kind::Binary, pos, op);
            e.operands.push_back(std::move(lhs));
            e.operands.push_back(std::move(rhs));
            lhs = std::move(e);
        }
    }

    bool starts_cast_operand(const Token& t) const
    {
        if (t.kind == Token::Kind::String || t.kind == Token::Kind::Char || t.kind == Token::Kind::Number) return true;
        if (t.kind == Token::Kind::Identifier) return !t.is("instanceof");
        return t.is("(") || t.is("!") || t.is("~");
    }

    Expr parse_unary()
    {
        const Token& t = peek();
        if (t.kind == Token::Kind::Punct &&
            (t.is("+") || t.is("-") || t.is("!") || t.is("~") || t.is("++") || t.is("--"))) {
            Position pos = t.pos;
            std::string op = next().text;
            Expr e = node(Expr::Kind::Unary, pos, op);
            e.operands.push_back(parse_unary());
            return e;
        }
        if (at("(")) {
            Position pos = t.pos;
            if (peek(1).ident() && kPrimitives.count(peek(1).text) && (peek(2).is(")") || peek(2).is("["))) {
                next();
                Expr e = node(Expr::Kind::Cast, pos, parse_type());
                expect(")");
                e.operands.push_back(parse_unary());
                return e;
            }
            std::size_t save = i_;
            next();
            if (!lambda_ahead()) {
                auto type = try_parse_type();
                if (type && at(")") && starts_cast_operand(peek(1)) && !lambda_after_paren()) {
                    next();
                    Expr e = node(Expr::Kind::Cast, pos, *type);
                    e.operands.push_back(parse_unary());
                    return e;
                }
            }
            i_ = save;
        }
        return parse_postfix(parse_primary());
    }

    bool lambda_after_paren() const { return peek(1).ident() && peek(2).is("->"); }

    std::vector<Expr> parse_args()
    {
        std::vector<Expr> args;
        expect("(");
        if (accept(")")) return args;
        do {
            args.push_back(parse_expression());
        } while (accept(","));
        expect(")");
        return args;
    }

    static std::string dotted(const Expr& e)
    {
        if (e.kind == Expr::Kind::Name) return e.text;
        if (e.kind == Expr::Kind::FieldAccess) return dotted(e.operands.front()) + "." + e.text;
        return {};
    }

    Expr parse_primary()
    {
        const Token& t = peek();
        Position pos = t.pos;
        switch (t.kind) {
        case Token::Kind::String: return node(Expr::Kind::StringLit, pos, next().text);
        case Token::Kind::Char: return node(Expr::Kind::CharLit, pos, next().text);
        case Token::Kind::Number: return node(Expr::Kind::NumberLit, pos, next().text);
        case Token::Kind::End: error("unexpected end of file in expression");
        default: break;
        }
        if (accept("(")) {
            Expr inner = parse_expression();
            expect(")");
            return inner;
        }
        if (at("true") || at("false")) return node(Expr::Kind::BoolLit, pos, next().text);
        if (accept("null")) return node(Expr::Kind::NullLit, pos);
        if (at("this") || at("super")) {
            std::string word = next().text;
            if (at("(")) {
                Expr call = node(Expr::Kind::Call, pos, word);
                call.operands = parse_args();
                return call;
            }
            return node(word == "this" ? Expr::Kind::This : Expr::Kind::Super, pos);
        }
        if (accept("new")) return parse_new(pos);
        if (at("switch")) unsupported("switch expression");
        if (t.ident() && kPrimitives.count(t.text)) {
            std::string type = parse_type();
            expect(".");
            expect("class");
            return node(Expr::Kind::ClassLit, pos, type);
        }
        if (t.ident() && !kReserved.count(t.text)) {
            std::string name = next().text;
            if (at("(")) {
                Expr call = node(Expr::Kind::Call, pos, name);
                call.operands = parse_args();
                return call;
            }
            return node(Expr::Kind::Name, pos, name);
        }
        error("unexpected '" + t.text + "' in expression");
    }

    Expr parse_new(Position pos)
    {
        while (at("@")) parse_annotation();
        std::string type;
        if (peek().ident() && kPrimitives.count(peek().text)) {
            type = next().text;
        } else {
            type = identifier();
            if (at("<")) skip_type_args();
            while (at(".") && peek(1).ident()) {
                next();
                type += "." + next().text;
                if (at("<")) skip_type_args();
            }
        }
        if (at("[")) {
            Expr e = node(Expr::Kind::NewArray, pos, type);
            while (accept("[")) {
                if (!at("]")) e.operands.push_back(parse_expression());
                expect("]");
            }
            if (at("{")) e.operands.push_back(parse_array_init());
            return e;
        }
        Expr e = node(Expr::Kind::New, pos, type);
        e.operands = parse_args();
        if (at("{")) {
            diags_.warn("anonymous-class-skipped", "anonymous class body of " + type + " not analyzed",
                        SourceLocation{std::string(path_), peek().pos.line, peek().pos.column});
            skip_balanced("{", "}");
        }
        return e;
    }

    Expr parse_postfix(Expr e)
    {
        for (;;) {
            if (at(".")) {
                next();
                if (at("new")) unsupported("qualified instance creation");
                if (at("<")) skip_type_args();
                Position pos = peek().pos;
                if (accept("class")) {
                    std::string name = dotted(e);
                    if (name.empty()) error("unexpected '.class'");
                    e = node(Expr::Kind::ClassLit, e.pos, name);
                    continue;
                }
                if (accept("this")) {
                    e = node(Expr::Kind::This, e.pos);
                    continue;
                }
                std::string name = identifier();
                if (at("(")) {
                    Expr call = node(Expr::Kind::Call, pos, name);
                    call.has_receiver = true;
                    call.operands.push_back(std::move(e));
                    for (auto& a : parse_args()) call.operands.push_back(std::move(a));
                    e = std::move(call);
                } else {
                    Expr fa = node(Expr::Kind::FieldAccess, pos, name);
                    fa.operands.push_back(std::move(e));
                    e = std::move(fa);
                }
            } else if (at("[")) {
                if (peek(1).is("]")) {
                    std::string name = dotted(e);
                    while (at("[") && peek(1).is("]")) {
                        next();
                        next();
                        name += "[]";
                    }
                    expect(".");
                    expect("class");
                    e = node(Expr::Kind::ClassLit, e.pos, name);
                    continue;
                }
                Position pos = next().pos;
                Expr idx = node(Expr::Kind::Index, pos);
                idx.operands.push_back(std::move(e));
                idx.operands.push_back(parse_expression());
                expect("]");
                e = std::move(idx);
            } else if (at("++") || at("--")) {
                Position pos = peek().pos;
                Expr u = node(Expr::Kind::Unary, pos, "post" + next().text);
                u.operands.push_back(std::move(e));
                e = std::move(u);
            } else if (at("::")) {
                unsupported("method reference");
            } else {
                return e;
            }
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    std::string_view path_;
    Diagnostics& diags_;
    OoCompilationUnit unit_;
    int body_depth_ = 0;
};

} // namespace

std::string AnnotationUse::simple_name() const
{
    auto dot = name.rfind('.');
    return dot == std::string::npos ? name : name.substr(dot + 1);
}

OoCompilationUnit parse_unit(std::string_view source, std::string_view path, Diagnostics& diags)
{
    // Strip a UTF-8 byte order mark.
    if (source.substr(0, 3) == "\xEF\xBB\xBF") source.remove_prefix(3);
    return Parser(java::tokenize(source), path, diags).parse();
}

} // namespace jeedep
