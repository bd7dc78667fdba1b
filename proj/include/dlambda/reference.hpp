#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dlambda/diffop.hpp"

// Formulas as they are displayed in the source text, transcribed into the
// parser grammar without correction. Minors Dij are spelled out as
// polynomials in the g-entries; nu1, nu2 stand for l2 - 2 m1 + m2 and
// l1 + m1 - 2 m2.
namespace dlambda::ref {

enum class Table { Matrix, Cell, Weights, Conic };

struct Display {
  std::string id;
  Table table = Table::Matrix;
  std::string text;
  std::string what;
};

const std::vector<Display>& displays();
/// Throws PreconditionError for an unknown id.
const Display& display(std::string_view id);

ChartPtr table_chart(Table t);
/// nu1, nu2 expanded in l and m.
std::string expand_weights(std::string text);

RatFunc as_function(const Display& d);
DiffOp as_operator(const Display& d);

}  // namespace dlambda::ref
