#include "java_walk.hpp"

namespace jeedep::java {

const std::string* Scope::lookup(std::string_view name) const
{
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
        auto found = it->find(name);
        if (found != it->end()) return &found->second;
    }
    return nullptr;
}

void walk_expr(const Expr& expr, const Scope& scope, const Member& member, const ExprVisitor& visit)
{
    visit(expr, scope, member);
    for (const auto& operand : expr.operands) walk_expr(operand, scope, member, visit);
}

namespace {

void walk_statement(const Statement& s, Scope& scope, const Member& member, const ExprVisitor& visit);

void walk_nested(const std::vector<Statement>& body, Scope& scope, const Member& member, const ExprVisitor& visit)
{
    scope.push();
    walk_statements(body, scope, member, visit);
    scope.pop();
}

void walk_statement(const Statement& s, Scope& scope, const Member& member, const ExprVisitor& visit)
{
    using K = Statement::Kind;
    switch (s.kind) {
    case K::LocalVar:
        for (const auto& d : s.declarators) {
            if (d.init) walk_expr(*d.init, scope, member, visit);
            scope.declare(d.name, s.type_name);
        }
        break;
    case K::For:
        scope.push();
        walk_statements(s.init, scope, member, visit);
        if (s.expr) walk_expr(*s.expr, scope, member, visit);
        for (const auto& u : s.update) walk_expr(u, scope, member, visit);
        walk_nested(s.body, scope, member, visit);
        scope.pop();
        break;
    case K::ForEach:
        if (s.expr) walk_expr(*s.expr, scope, member, visit);
        scope.push();
        for (const auto& d : s.declarators) scope.declare(d.name, s.type_name);
        walk_nested(s.body, scope, member, visit);
        scope.pop();
        break;
    case K::Try:
        scope.push();
        walk_statements(s.init, scope, member, visit);
        walk_nested(s.body, scope, member, visit);
        scope.pop();
        for (const auto& c : s.catches) {
            scope.push();
            scope.declare(c.var_name, c.type_name);
            walk_statements(c.body, scope, member, visit);
            scope.pop();
        }
        walk_nested(s.else_body, scope, member, visit);
        break;
    case K::Switch:
        if (s.expr) walk_expr(*s.expr, scope, member, visit);
        for (const auto& label : s.update) walk_expr(label, scope, member, visit);
        walk_nested(s.body, scope, member, visit);
        break;
    default:
        if (s.expr) walk_expr(*s.expr, scope, member, visit);
        walk_nested(s.body, scope, member, visit);
        walk_nested(s.else_body, scope, member, visit);
        break;
    }
}

} // namespace

void walk_statements(const std::vector<Statement>& body, Scope& scope, const Member& member, const ExprVisitor& visit)
{
    for (const auto& s : body) walk_statement(s, scope, member, visit);
}

void walk_class(const ClassDecl& cls, const ExprVisitor& visit)
{
    Member outer{&cls, nullptr};
    for (const auto& f : cls.fields) {
        if (!f.init) continue;
        Scope scope;
        scope.push();
        walk_expr(*f.init, scope, outer, visit);
    }
    for (const auto& block : cls.initializers) {
        Scope scope;
        scope.push();
        walk_statements(block, scope, outer, visit);
    }
    for (const auto& m : cls.methods) {
        Scope scope;
        scope.push();
        for (const auto& p : m.params) scope.declare(p.name, p.type_name);
        walk_statements(m.body, scope, Member{&cls, &m}, visit);
    }
}

} // namespace jeedep::java
