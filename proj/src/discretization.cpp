#include "mlsta/discretization.hpp"

#include <cmath>
#include <stdexcept>

#include "mlsta/errors.hpp"

namespace mlsta {

namespace {

// exp(z) - 1 for complex z, accurate when |z| is small.
Complex expm1_complex(Complex z) {
    const double a = z.real();
    const double b = z.imag();
    if (b == 0.0) {
        return {std::expm1(a), 0.0};
    }
    const double half_sin = std::sin(0.5 * b);
    // e^a cos b - 1 = expm1(a) cos b - 2 sin^2(b/2)
    const double re = std::expm1(a) * std::cos(b) - 2.0 * half_sin * half_sin;
    const double im = std::exp(a) * std::sin(b);
    return {re, im};
}

double collapse_real(Complex z, const char* what) {
    const double scale = std::abs(z);
    if (std::fabs(z.imag()) > kImagResidueTol * scale) {
        throw std::logic_error(std::string("discrete_coeffs: non-real ") + what +
                               "; eigenvalues must be real or a conjugate pair");
    }
    return z.real();
}

}  // namespace

EigenPair continuous_eigenvalues(double k1, double k2, double s_abs, double alpha) {
    if (!(s_abs > 0.0)) {
        throw DomainError("continuous_eigenvalues: M(s) is undefined at s = 0");
    }
    const double b = k1 * std::pow(s_abs, alpha - 1.0);
    const double c = k2 / s_abs;
    const double disc = b * b - 4.0 * c;
    if (disc >= 0.0) {
        const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        if (q == 0.0) {
            return {Complex{0.0, 0.0}, Complex{0.0, 0.0}};
        }
        return {Complex{q, 0.0}, Complex{c / q, 0.0}};
    }
    const double re = -0.5 * b;
    const double im = 0.5 * std::sqrt(-disc);
    return {Complex{re, im}, Complex{re, -im}};
}

MatchedEigenvalues match_eigenvalues(const EigenPair& pair, double ts) {
    MatchedEigenvalues out;
    out.q1_minus_one = expm1_complex(pair.lambda1 * ts);
    out.q2_minus_one = expm1_complex(pair.lambda2 * ts);
    out.q1 = out.q1_minus_one + 1.0;
    out.q2 = out.q2_minus_one + 1.0;
    return out;
}

DiscreteCoeffs discrete_coeffs(const MatchedEigenvalues& matched, double ts) {
    // u1 - 1 = (q1 - 1) + (q2 - 1) and u1 - q1 q2 = -(q1 - 1)(q2 - 1).
    const Complex sum = matched.q1_minus_one + matched.q2_minus_one;
    const Complex prod = matched.q1_minus_one * matched.q2_minus_one;
    DiscreteCoeffs out;
    out.u1_tilde = 1.0 + collapse_real(sum, "eigenvalue sum");
    out.u2_tilde = -collapse_real(prod, "eigenvalue product") / ts;
    return out;
}

DiscreteCoeffs discrete_coeffs(Complex lq1, Complex lq2, double ts) {
    return discrete_coeffs(MatchedEigenvalues{lq1, lq2, lq1 - 1.0, lq2 - 1.0}, ts);
}

Mat2 assemble_mq(const DiscreteCoeffs& coeffs, double ts) {
    return {{{coeffs.u1_tilde, ts}, {coeffs.u2_tilde, 1.0}}};
}

DiscreteCoeffs euler_coeffs(double k1, double k2, double s_abs, double alpha, double ts) {
    if (!(s_abs > 0.0)) {
        throw DomainError("euler_coeffs: sgn(s)/|s| is undefined at s = 0");
    }
    return {1.0 - ts * k1 * std::pow(s_abs, alpha - 1.0), -ts * k2 / s_abs};
}

}  // namespace mlsta
