#pragma once

// Text and JSON serialization for the core value types.
//
// Rational functions print in a small human-readable grammar, e.g.
//
//     (1 - q^{1}t^{-1}) / (1 - t^{1})
//     q^{1/2} + 1
//     -3/4q^{2}t^{-1/2}
//
// Exponents are integers or half-integers (written "c/2").  Because both the
// printer and the parser go through the canonical form, printing and
// re-parsing reproduces the value bit for bit.
//
// The JSON layout lists polynomial terms as [qe2, te2, "coeff"] triples with
// doubled exponents, newest-first in the canonical term order, and a rational
// function as {"num": [...], "den": [...]}.

#include <string>
#include <vector>

#include "json.hpp"
#include "qtsf/partition.hpp"
#include "qtsf/rational.hpp"
#include "qtsf/ribbon.hpp"

namespace qtsf {

std::string to_string(const QTPoly& p);
std::string to_string(const QTRational& v);
std::string to_string(const Partition& p);  // "[4,3,1]", "[]"
std::string to_string(const SkewShape& s);  // "[4,3,1]/[2,1]"

// Parsers throw UsageError on malformed input.
QTRational parse_rational(const std::string& text);
Partition parse_partition(const std::string& text);
// "[4,3,1]/[2,1]"; a bare "[4,3,1]" means an empty inner shape.
SkewShape parse_skew(const std::string& text);

nlohmann::json to_json(const QTPoly& p);
nlohmann::json to_json(const QTRational& v);
nlohmann::json to_json(const Ribbon& r);  // boxes as [x, y] in path order
nlohmann::json to_json(const std::vector<Ribbon>& tiling);
nlohmann::json to_json(const RibbonTableau& t);  // layers, innermost first

QTPoly poly_from_json(const nlohmann::json& j);
QTRational rational_from_json(const nlohmann::json& j);

}  // namespace qtsf
