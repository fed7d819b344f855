#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "jeedep/java_ast.hpp"

namespace jeedep::java {

// Local variables and parameters visible at a point in a body.
class Scope {
public:
    void push() { frames_.emplace_back(); }
    void pop() { frames_.pop_back(); }
    void declare(const std::string& name, const std::string& type) { frames_.back()[name] = type; }
    const std::string* lookup(std::string_view name) const;

private:
    std::vector<std::map<std::string, std::string, std::less<>>> frames_;
};

// The member whose code is being walked. `method` is null for initializer
// blocks and field initializers.
struct Member {
    const ClassDecl* cls = nullptr;
    const MethodDecl* method = nullptr;
};

// Called for every expression node, parents before operands.
using ExprVisitor = std::function<void(const Expr&, const Scope&, const Member&)>;

void walk_expr(const Expr& expr, const Scope& scope, const Member& member, const ExprVisitor& visit);
void walk_statements(const std::vector<Statement>& body, Scope& scope, const Member& member, const ExprVisitor& visit);

// Walks method bodies (parameters in scope), initializer blocks and field
// initializers of one class, in declaration order per category.
void walk_class(const ClassDecl& cls, const ExprVisitor& visit);

} // namespace jeedep::java
