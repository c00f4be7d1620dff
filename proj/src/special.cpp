#include "coopfield/special.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "coopfield/errors.hpp"

namespace coopfield {

double digamma(double z) {
    if (!(z > 0.0)) {
        throw ParameterError("digamma requires z > 0 (got " + std::to_string(z) + ")");
    }
    // Psi(z) = Psi(z+1) - 1/z lifts the argument into the asymptotic range.
    double shift = 0.0;
    while (z < 6.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    // B_{2k}/(2k) for k = 1..6.
    static constexpr double coeff[6] = {
        1.0 / 12.0,       -1.0 / 120.0,      1.0 / 252.0,
        -1.0 / 240.0,     1.0 / 132.0,       -691.0 / 32760.0,
    };
    const double inv2 = 1.0 / (z * z);
    double series = 0.0;
    double power = inv2;
    for (double c : coeff) {
        series += c * power;
        power *= inv2;
    }
    return shift + std::log(z) - 0.5 / z - series;
}

double log_choose(double n, double m) {
    return std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
}

namespace {

// Dense triangular table of S(n, k) for n <= kStirlingCap, built once.
// long double keeps the recurrence exact up to 2^64 and finite (~1e4932)
// through the cap; the largest entry at n = 512 is near exp(1750).
class StirlingTable {
public:
    StirlingTable() {
        rows_.resize(kStirlingCap + 1);
        rows_[0] = {1.0L};
        for (int n = 1; n <= kStirlingCap; ++n) {
            auto& row = rows_[static_cast<std::size_t>(n)];
            const auto& prev = rows_[static_cast<std::size_t>(n - 1)];
            row.assign(static_cast<std::size_t>(n) + 1, 0.0L);
            for (int k = 1; k <= n; ++k) {
                const long double up = (k < n) ? prev[static_cast<std::size_t>(k)] : 0.0L;
                const long double diag = prev[static_cast<std::size_t>(k - 1)];
                row[static_cast<std::size_t>(k)] = k * up + diag;
            }
        }
    }

    long double at(int n, int k) const {
        if (k > n) return 0.0L;
        return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }

private:
    std::vector<std::vector<long double>> rows_;
};

}  // namespace

Stirling2 stirling2(int n, int k) {
    if (n < 0 || k < 0) throw ParameterError("stirling2 requires nonnegative arguments");
    if (n > kStirlingCap) {
        throw CapacityError("stirling2 capped at n <= " + std::to_string(kStirlingCap) +
                            " (got " + std::to_string(n) + ")");
    }
    static const StirlingTable table;
    const long double v = table.at(n, k);
    const double value = static_cast<double>(v);
    const double log_value = (v > 0.0L) ? static_cast<double>(logl(v))
                                        : -std::numeric_limits<double>::infinity();
    return {value, log_value};
}

}  // namespace coopfield
