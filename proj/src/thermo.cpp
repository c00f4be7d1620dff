#include "coopfield/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "coopfield/errors.hpp"
#include "coopfield/special.hpp"

namespace coopfield {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln(1 + e^x) without overflow.
double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// logistic
double xi_of(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ln(a + b) from ln a, ln b; either may be -inf.
double log_add(double la, double lb) {
    if (la == kNegInf) return lb;
    if (lb == kNegInf) return la;
    const double hi = std::max(la, lb);
    return hi + std::log1p(std::exp(std::min(la, lb) - hi));
}

}  // namespace

double pg_mean_density(const GameParams& p, double beta) {
    if (p.punishment != 0.0) {
        throw ModeError("pg_mean_density is the gamma = 0 closed form (got gamma = " +
                        std::to_string(p.punishment) + ")");
    }
    if (!(beta >= 0.0)) throw ParameterError("beta must be nonnegative");
    return mean_field_density(p, beta);
}

ThermoResult exact_thermo(const EnergyModel& model, double beta) {
    if (!(beta >= 0.0)) throw ParameterError("beta must be nonnegative");
    if (std::isnan(model.alpha1) || std::isnan(model.alpha2)) {
        throw ParameterError("couplings are NaN");
    }
    const int n = model.n_players;
    std::vector<double> lw(static_cast<std::size_t>(n) + 1);
    double lmax = kNegInf;
    for (int m = 0; m <= n; ++m) {
        const double md = m;
        const double lt = log_choose(n, md) + beta * (model.alpha2 * md * md + model.alpha1 * md);
        lw[static_cast<std::size_t>(m)] = lt;
        lmax = std::max(lmax, lt);
    }
    long double norm = 0.0L, first = 0.0L;
    for (int m = 0; m <= n; ++m) {
        const long double w = expl(static_cast<long double>(lw[static_cast<std::size_t>(m)] - lmax));
        norm += w;
        first += w * (static_cast<long double>(m) / n);
    }
    const double log_partition = lmax + static_cast<double>(logl(norm));
    const double mean = static_cast<double>(first / norm);
    // Two-pass variance: stable when all weight freezes onto one count.
    long double var_acc = 0.0L, energy_acc = 0.0L;
    for (int m = 0; m <= n; ++m) {
        const long double w = expl(static_cast<long double>(lw[static_cast<std::size_t>(m)] - lmax));
        const long double d = static_cast<long double>(m) / n - mean;
        var_acc += w * d * d;
        const double md = m;
        energy_acc += w * static_cast<long double>(-(model.alpha2 * md * md + model.alpha1 * md));
    }
    return ThermoResult{log_partition, mean, static_cast<double>(var_acc / norm),
                        static_cast<double>(energy_acc / norm)};
}

CEll c_ell(double y, int ell, const SeriesParams& sp) {
    if (!(y >= 0.0)) throw ParameterError("c_ell requires y >= 0");
    if (ell < 1) throw ParameterError("c_ell requires ell >= 1");
    if (sp.truncation_k < 1) throw ParameterError("truncation_k must be >= 1");

    if (y == 0.0) return {0.0, kNegInf, false};

    if (sp.use_asymptotic_stirling) {
        // C_ell ~ (e^{y ell^2} - 1) / ell!
        const double z = y * static_cast<double>(ell) * static_cast<double>(ell);
        const double lg = std::lgamma(ell + 1.0);
        const double log_value =
            (z > 36.0 ? z : std::log(std::expm1(z))) - lg;
        return {std::exp(log_value), log_value, false};
    }

    if (2 * sp.truncation_k > kStirlingCap) {
        throw CapacityError("truncation_k exceeds the Stirling table cap");
    }
    const double ly = std::log(y);
    double lsum = kNegInf;
    double prev_term = kNegInf;
    bool growing_at_end = false;
    for (int k = 1; k <= sp.truncation_k; ++k) {
        const double ls = stirling2(2 * k, ell).log_value;
        if (ls == kNegInf) continue;  // S(2k, ell) = 0 for ell > 2k
        const double lt = k * ly - std::lgamma(k + 1.0) + ls;
        lsum = log_add(lsum, lt);
        growing_at_end = (k == sp.truncation_k) && (lt > prev_term);
        prev_term = lt;
    }
    if (lsum == kNegInf) return {0.0, kNegInf, false};
    return {std::exp(lsum), lsum, growing_at_end};
}

GValue g_function(double x, double y, int n_players, const SeriesParams& sp) {
    if (!(y >= 0.0)) throw ParameterError("g_function requires y >= 0");
    const double xi = xi_of(x);
    if (xi == 0.0 || y == 0.0) return {0.0, kNegInf, false};

    const double lxi = x - softplus(x);  // ln(xi), stable for very negative x
    const double lgn = std::lgamma(n_players + 1.0);
    // In exact mode C_ell vanishes for ell > 2K.
    const int ell_max = sp.use_asymptotic_stirling
                            ? n_players
                            : std::min(n_players, 2 * sp.truncation_k);
    double lsum = kNegInf;
    bool truncated = false;
    for (int ell = 1; ell <= ell_max; ++ell) {
        const CEll ce = c_ell(y, ell, sp);
        truncated = truncated || ce.truncated;
        if (ce.log_value == kNegInf) continue;
        const double lff = lgn - std::lgamma(n_players - ell + 1.0);
        lsum = log_add(lsum, lff + ce.log_value + ell * lxi);
    }
    if (lsum == kNegInf) return {0.0, kNegInf, truncated};
    return {std::exp(lsum), lsum, truncated};
}

namespace {

// ln(1 + G) from a GValue, robust to G overflowing double.
double log1p_g(const GValue& g) {
    if (g.log_value == kNegInf) return 0.0;
    if (g.log_value > 36.0) return g.log_value + std::log1p(std::exp(-g.log_value));
    return std::log1p(g.value);
}

}  // namespace

double series_log_partition(const EnergyModel& model, double beta, const SeriesParams& sp) {
    if (!(beta >= 0.0)) throw ParameterError("beta must be nonnegative");
    const double x = beta * model.alpha1;
    const double y = beta * model.alpha2;
    const GValue g = g_function(x, y, model.n_players, sp);
    if (g.value < -1.0) {
        throw NumericalValidityError("series G(x,y) fell below -1; expansion invalid here");
    }
    return model.n_players * softplus(x) + log1p_g(g);
}

double density_series(const EnergyModel& model, double beta, const SeriesParams& sp) {
    if (!(beta >= 0.0)) throw ParameterError("beta must be nonnegative");
    const int n = model.n_players;
    const double x = beta * model.alpha1;
    const double y = beta * model.alpha2;
    const double xi = xi_of(x);
    const GValue g = g_function(x, y, n, sp);
    if (g.value < -1.0) {
        throw NumericalValidityError("series G(x,y) fell below -1; expansion invalid here");
    }
    double correction = 0.0;
    if (g.log_value != kNegInf && xi > 0.0) {
        const double lxi = x - softplus(x);
        const double lgn = std::lgamma(n + 1.0);
        const int ell_max =
            sp.use_asymptotic_stirling ? n : std::min(n, 2 * sp.truncation_k);
        double lsum = kNegInf;
        for (int ell = 1; ell <= ell_max; ++ell) {
            const CEll ce = c_ell(y, ell, sp);
            if (ce.log_value == kNegInf) continue;
            const double lff = lgn - std::lgamma(n - ell + 1.0);
            lsum = log_add(lsum, std::log(static_cast<double>(ell)) + lff + ce.log_value +
                                     ell * lxi);
        }
        if (lsum != kNegInf) {
            correction = (1.0 - xi) / n * std::exp(lsum - log1p_g(g));
        }
    }
    const double density = xi + correction;
    if (density < -1e-9 || density > 1.0 + 1e-9) {
        throw NumericalValidityError("series density " + std::to_string(density) +
                                     " outside [0,1] beyond tolerance");
    }
    return std::clamp(density, 0.0, 1.0);
}

double density_upper_bound(double x, double y, int n_players, const SeriesParams& sp) {
    const GValue g = g_function(x, y, n_players, sp);
    if (g.log_value == kNegInf) {
        throw std::domain_error("density upper bound undefined for G = 0; the gamma = 0 "
                                "case must be treated separately");
    }
    // (G + xi)/(1 + G) = 1 - (1 - xi) e^{-ln(1+G)}
    return 1.0 - (1.0 - xi_of(x)) * std::exp(-log1p_g(g));
}

std::vector<double> solve_density_condition(const EnergyModel& model, double beta) {
    if (!(beta > 0.0)) throw ParameterError("density condition requires beta > 0");
    const int n = model.n_players;
    const auto f = [&](double rho) {
        return 2.0 * beta * model.alpha2 * n * rho + beta * model.alpha1 -
               digamma(n * rho + 1.0) + digamma(n - n * rho + 1.0);
    };
    constexpr int kGrid = 1024;
    std::vector<double> roots;
    double prev_rho = 0.0;
    double prev_val = f(prev_rho);
    for (int i = 1; i < kGrid; ++i) {
        const double rho = static_cast<double>(i) / (kGrid - 1);
        const double val = f(rho);
        if (prev_val == 0.0 && prev_rho > 0.0) {
            roots.push_back(prev_rho);
        } else if ((prev_val < 0.0 && val > 0.0) || (prev_val > 0.0 && val < 0.0)) {
            double lo = prev_rho, hi = rho, flo = prev_val;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_rho = rho;
        prev_val = val;
    }
    return roots;  // ascending by construction
}

std::vector<double> solve_density_condition(const GameParams& p, double beta,
                                            const RiskMode& mode) {
    return solve_density_condition(build_energy_model(p, beta, mode), beta);
}

double crossing_beta(double b, double c) {
    if (!(2.0 * c > b)) {
        throw std::domain_error("crossing requires 2c > b; punishment never loses "
                                "efficacy otherwise");
    }
    return std::log(2.0) / (2.0 * c - b);
}

double self_consistent_density(const GameParams& p, double beta, double tol, int max_iter) {
    if (!(beta >= 0.0)) throw ParameterError("beta must be nonnegative");
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
    double rho = mean_field_density(p, beta);
    double mapped = rho;
    for (int it = 0; it < max_iter; ++it) {
        const EnergyModel model =
            build_energy_model_at_density(p, rho, RiskMode::self_consistent(tol, max_iter));
        mapped = exact_thermo(model, beta).mean_density;
        if (std::abs(mapped - rho) < tol) return mapped;
        rho = 0.5 * (rho + mapped);  // damping keeps the map contractive
    }
    throw ConvergenceError("self-consistent density did not converge in " +
                               std::to_string(max_iter) + " iterations",
                           rho, mapped);
}

}  // namespace coopfield
