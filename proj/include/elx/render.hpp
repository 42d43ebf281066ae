#pragma once

#include <string>

#include "elx/term.hpp"
#include "elx/types.hpp"

namespace elx {

// Canonical text form: applications as f(a, b), pairs as <a, b>, markers as
// prim(T), binders as `lam x1:e. body` with x1, x2, ... assigned in render
// order, so alpha-variants print identically. A quantification
// det(lam x. <restriction, scope>) prints as det(x1, restriction, scope).
std::string render_term(const TermPtr& t);

// Parses the canonical notation back, resolving atoms against env plus the
// binder names in scope. Inverse of render_term on closed terms up to alpha;
// Syntax on malformed input, UnknownConstant on unresolvable names.
TermPtr parse_reading(const std::string& text, const Env& env);

// Inverse of show_type: e, t, a->b (right associative), a*b (binds tighter).
TypePtr parse_type_text(const std::string& text);

} // namespace elx
