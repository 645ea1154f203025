#pragma once

#include "roughlab/controlled_path.hpp"

namespace roughlab {

// Rough integral of a controlled path against its driver, as the compensated
// sum of first-order terms and second-level corrections over grid steps.
//
// Tensor form: for (Z, Z') with values in R^m, returns the (m*d)-dimensional
// controlled path I with I_{(a,j)}(t) = \int_0^t Z_a dX^j, accumulated per
// step as Z_a dX^j + (Z' area)_{a,j}. Component (a,j) is stored at flat index
// a*d + j, and the result carries the Gubinelli derivative Z x Id.
ControlledPath rough_integral(const ControlledPath& z, const RoughPath& rough);

// Contraction form: the values of (A, A') are read as p x d matrices (m must
// equal p*d, row-major flattening), and the integral is the p-vector path
//   I_a(t) = sum_i \int_0^t A_{a,i} dX^i ,
// accumulated per step as A_{a,i} dX^i + A'_{(a,i),k} area^{k,i}. The result
// carries the matrix A itself as its Gubinelli derivative.
ControlledPath rough_integral_contract(const ControlledPath& a,
                                       const RoughPath& rough);

// Node values of \int_0^t B_s ds by the trapezoidal rule.
SampledPath time_integral(const SampledPath& b);

}  // namespace roughlab
