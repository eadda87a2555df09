#pragma once

#include <string>

#include "dockrule/tree.hpp"

namespace dockrule {

// Canonical form: (KIND child...) with children separated by single
// spaces, or (KIND "literal") for literal leaves. Only '"' and '\' are
// escaped inside literals.
std::string sexp_encode(const TreeNode& t);

// Like sexp_encode but appends :id=N, :eu, :count, :degraded and
// :span=l.c-l.c annotations after the kind so trees round-trip exactly.
std::string sexp_encode_annotated(const TreeNode& t);

// Accepts both plain and annotated forms. Throws ParseError with a
// 1-based line and column on malformed input.
TreeNode sexp_decode(const std::string& text);

std::string escape_literal(const std::string& s);

}  // namespace dockrule
