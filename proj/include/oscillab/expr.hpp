#pragma once

#include <memory>
#include <string>

#include "oscillab/jets.hpp"

namespace oscillab {

/// Parsed arithmetic expression over x, xi components, abs(xi), jap(xi),
/// sin, cos, exp and powers with numeric exponents.  Evaluates as plain
/// doubles (hot paths) or as degree-4 jets (derivative access).
class Expression {
  public:
    Expression(const std::string& text, int n);

    double eval(std::array<double, 2> x, std::array<double, 2> xi) const;
    Jet<double> jet(std::array<double, 2> x, std::array<double, 2> xi) const;

    const std::string& text() const { return text_; }

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    std::string text_;
};

}  // namespace oscillab
