#pragma once

// Frozen-state eigenstructure of the closed loop and its discrete equivalents.
//
// For s != 0 the closed loop reads x' = M(s) x + [0, delta]^T with x = [s, phi]^T and
//
//   M(s) = [ -k1 |s|^(alpha-1)  1 ]
//          [ -k2 |s|^(-1)       0 ]
//
// Exact matching places the discrete eigenvalues at exp(lambda Ts) and realizes
// them with
//
//   Mq = [ u1  Ts ]     u1 = lq1 + lq2 - 1,   u2 = (u1 - lq1 lq2) / Ts.
//        [ u2  1  ]

#include <array>
#include <complex>

namespace mlsta {

using Complex = std::complex<double>;

struct EigenPair {
    Complex lambda1;
    Complex lambda2;

    bool is_real() const noexcept { return lambda1.imag() == 0.0 && lambda2.imag() == 0.0; }
};

/// exp(lambda Ts) together with exp(lambda Ts) - 1 evaluated without cancellation.
struct MatchedEigenvalues {
    Complex q1;
    Complex q2;
    Complex q1_minus_one;
    Complex q2_minus_one;
};

struct DiscreteCoeffs {
    double u1_tilde = 1.0;
    double u2_tilde = 0.0;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Imaginary residue tolerance (relative) when collapsing complex sums/products to reals.
inline constexpr double kImagResidueTol = 1e-12;

/// Roots of lambda^2 + k1 |s|^(alpha-1) lambda + k2 / |s| = 0, cancellation-free.
/// Throws DomainError for s_abs <= 0.
EigenPair continuous_eigenvalues(double k1, double k2, double s_abs, double alpha);

MatchedEigenvalues match_eigenvalues(const EigenPair& pair, double ts);

/// Throws std::logic_error if the pair is neither real nor conjugate.
DiscreteCoeffs discrete_coeffs(Complex lq1, Complex lq2, double ts);
DiscreteCoeffs discrete_coeffs(const MatchedEigenvalues& matched, double ts);

Mat2 assemble_mq(const DiscreteCoeffs& coeffs, double ts);

/// Forward-Euler coefficients in the same discrete law:
/// u1 = 1 - Ts k1 |s|^(alpha-1), u2 = -Ts k2 / |s|.
DiscreteCoeffs euler_coeffs(double k1, double k2, double s_abs, double alpha, double ts);

}  // namespace mlsta
