#ifndef COOPFIELD_SPECIAL_HPP
#define COOPFIELD_SPECIAL_HPP

namespace coopfield {

// Digamma Psi(z) for z > 0: upward recurrence to z >= 6, then the asymptotic
// expansion ln z - 1/(2z) - sum_{k<=6} B_{2k}/(2k z^{2k}).
// Absolute error <= ~1e-12 for z >= 1.
double digamma(double z);

// ln C(n, m) via lgamma.
double log_choose(double n, double m);

// Stirling number of the second kind S(n, k), n capped at kStirlingCap.
// The value is computed by the exact recurrence in 80-bit floats (exact as an
// integer while it fits, correctly rounded beyond); log_value stays finite up
// to the cap where the direct value may overflow to infinity.
inline constexpr int kStirlingCap = 512;

struct Stirling2 {
    double value;
    double log_value;  // -inf when the number is zero
};

Stirling2 stirling2(int n, int k);

}  // namespace coopfield

#endif
