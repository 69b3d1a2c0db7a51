#pragma once

#include <complex>
#include <string>

namespace refinery {

// Evaluates coefficient expressions such as "(1+sqrt(3))/4", "0.25", "2/3",
// "1-2*i". Grammar: + - * / unary minus, parentheses, sqrt(...), integers,
// decimals with optional exponent, and the imaginary unit i.
std::complex<double> parse_expression(const std::string& text);

}  // namespace refinery
