#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jeedep {

struct Position {
    int line = 1;
    int column = 1;

    auto operator<=>(const Position&) const = default;
    bool operator==(const Position&) const = default;
};

// Expression tree for the supported Java subset. Operand layout per kind:
//   FieldAccess  [target]                text = field name
//   Call         [receiver?] args...     text = method name, has_receiver
//   New          args...                 text = type name
//   NewArray     dims/initializer...     text = element type
//   Binary       [lhs, rhs]              text = operator
//   Unary        [operand]               text = operator ("post++" for postfix)
//   Assign       [target, value]         text = operator
//   Conditional  [cond, then, else]
//   Cast         [operand]               text = type name
//   InstanceOf   [operand]               text = type name
//   Index        [array, index]
//   ArrayInit    elements...
//   StringLit/CharLit/NumberLit/BoolLit  text = decoded value
//   Name         text = identifier; ClassLit text = type name
struct Expr {
    enum class Kind {
        StringLit,
        CharLit,
        NumberLit,
        BoolLit,
        NullLit,
        Name,
        This,
        Super,
        FieldAccess,
        Call,
        New,
        NewArray,
        ArrayInit,
        Binary,
        Unary,
        Assign,
        Conditional,
        Cast,
        InstanceOf,
        Index,
        ClassLit,
    };

    Kind kind = Kind::NullLit;
    std::string text;
    std::vector<Expr> operands;
    bool has_receiver = false;
    Position pos;

    // Call helpers.
    const Expr* receiver() const { return has_receiver ? &operands.front() : nullptr; }
    std::size_t arity() const { return operands.size() - (has_receiver ? 1 : 0); }
    const Expr& arg(std::size_t i) const { return operands[i + (has_receiver ? 1 : 0)]; }
};

struct Declarator {
    std::string name;
    std::optional<Expr> init;
    Position pos;
};

struct Statement;

struct CatchClause {
    std::string type_name;
    std::string var_name;
    std::vector<Statement> body;
    Position pos;
};

//   LocalVar   type_name + declarators
//   ExprStmt   expr
//   If         expr, body (then), else_body
//   For        init, expr (condition, optional), update, body
//   ForEach    type_name + declarators[0] (loop variable), expr (iterable), body
//   While/DoWhile  expr, body
//   Return/Throw   expr (optional for return)
//   Block/Sync     body (Sync: expr = monitor)
//   Try        init (resources), body, catches, else_body (finally)
//   Switch     expr (selector), update (case labels), body
struct Statement {
    enum class Kind {
        LocalVar,
        ExprStmt,
        If,
        For,
        ForEach,
        While,
        DoWhile,
        Return,
        Throw,
        Break,
        Continue,
        Block,
        Sync,
        Try,
        Switch,
        Empty,
    };

    Kind kind = Kind::Empty;
    Position pos;
    std::string type_name;
    std::vector<Declarator> declarators;
    std::optional<Expr> expr;
    std::vector<Statement> init;
    std::vector<Expr> update;
    std::vector<Statement> body;
    std::vector<Statement> else_body;
    std::vector<CatchClause> catches;
};

struct AnnotationValue {
    std::vector<std::string> literals;  // string literals, in order
    bool literal_only = true;           // false when any element was not a string literal
};

struct AnnotationUse {
    std::string name;  // as written, e.g. "WebServlet" or "javax.servlet.annotation.WebServlet"
    std::map<std::string, AnnotationValue> arguments;  // single-element form is stored under "value"
    Position pos;

    std::string simple_name() const;
};

struct Parameter {
    std::string type_name;
    std::string name;
};

struct MethodDecl {
    std::string name;
    std::string return_type;  // empty for constructors
    std::vector<Parameter> params;
    std::vector<AnnotationUse> annotations;
    std::vector<Statement> body;
    bool has_body = false;
    bool is_constructor = false;
    bool is_static = false;
    Position pos;

    std::size_t arity() const { return params.size(); }
};

struct FieldDecl {
    std::string name;
    std::string type_name;
    std::optional<Expr> init;
    bool is_static = false;
    Position pos;
};

struct ClassDecl {
    enum class Kind { Class, Interface, Enum, Record };

    Kind kind = Kind::Class;
    std::string name;        // simple name
    std::string outer;       // enclosing class path ("Outer" or "Outer.Mid"), empty when top-level
    std::optional<std::string> superclass;
    std::vector<std::string> interfaces;
    std::vector<AnnotationUse> annotations;
    std::vector<MethodDecl> methods;
    std::vector<FieldDecl> fields;
    std::vector<std::vector<Statement>> initializers;  // instance/static initializer blocks
    bool is_public = false;
    Position pos;

    // Name relative to the package: "Outer.Inner" for nested classes.
    std::string nested_name() const { return outer.empty() ? name : outer + "." + name; }
};

struct ImportDecl {
    std::string name;  // dotted; on-demand imports end in ".*"
    bool is_static = false;
};

struct OoCompilationUnit {
    std::string path;
    std::string package_name;
    std::vector<ImportDecl> imports;
    std::vector<ClassDecl> classes;  // nested classes follow their outer class

    std::string qualify(const ClassDecl& cls) const
    {
        return package_name.empty() ? cls.nested_name() : package_name + "." + cls.nested_name();
    }
};

// Structural problem in class or method layout; the unit cannot be used.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& what, Position pos) : std::runtime_error(what), pos_(pos) {}
    Position position() const { return pos_; }

private:
    Position pos_;
};

} // namespace jeedep
