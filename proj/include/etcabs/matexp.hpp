#ifndef ETCABS_MATEXP_HPP_
#define ETCABS_MATEXP_HPP_

#include "etcabs/types.hpp"

namespace etcabs {

/// Matrix exponential e^A by scaling-and-squaring with the order-13
/// diagonal Pade approximant.
Matrix expm(const Matrix& A);

/// The integral F(t) = \int_0^t e^{As} ds, computed as the top-right block
/// of exp([[A, I], [0, 0]] t). Valid for singular A.
Matrix exp_integral(const Matrix& A, double t);

/// Largest eigenvalue of a symmetric matrix.
double lambda_max(const Matrix& S);

/// Smallest eigenvalue of a symmetric matrix.
double lambda_min(const Matrix& S);

}  // namespace etcabs

#endif
