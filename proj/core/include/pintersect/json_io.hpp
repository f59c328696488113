#pragma once

// JSON forms of the domain types. Big integers travel as decimal strings.

#include <nlohmann/json.hpp>

#include "pintersect/counting.hpp"
#include "pintersect/increment.hpp"
#include "pintersect/intersective.hpp"
#include "pintersect/polycore.hpp"

namespace pintersect::json {

using nlohmann::json;

json big(const BigInt& v);
/// Accepts a decimal string or a JSON integer.
BigInt parse_big(const json& j);
json rational(const BigRational& v);
BigRational parse_rational(const json& j);

/// ["a0", "a1", ...], lowest degree first.
json poly(const IntPoly& p);
IntPoly parse_poly(const json& j);
IntPoly parse_poly_text(const std::string& text);

/// {"L": n, "members": [...]}
json index_set(const IndexSet& B);
IndexSet parse_index_set(const json& j);

json verdict(const IntersectivityVerdict& v);
IntersectivityVerdict parse_verdict(const json& j);

json aux(const AuxData& a);
AuxData parse_aux(const json& j);

json padic_choice(const PadicRootChoice& c);

/// {"value", "weight", "terms": [{y, prime, pairs}], "pairs": [[x, y], ...] (if listed)}
json r_count(const RCount& r);
RCount parse_r_count(const json& j);

json step(const IncrementStep& s);
IncrementStep parse_step(const json& j);

/// {"start": {...}, "steps": [...], "outcome": s, ...}
json trace(const IterationTrace& t);
IterationTrace parse_trace(const json& j);

}  // namespace pintersect::json
