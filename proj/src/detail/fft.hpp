#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lyz/torus_field.hpp"

namespace lyz::detail {

// Unnormalized r2c over the full grid.
std::vector<std::complex<double>> forward(const TorusGrid& grid, std::span<const double> in);

// c2r of a half spectrum, divided by the point count. Consumes spec.
void backward(const TorusGrid& grid, std::vector<std::complex<double>>& spec, std::span<double> out);

}  // namespace lyz::detail
