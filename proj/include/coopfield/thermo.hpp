#ifndef COOPFIELD_THERMO_HPP
#define COOPFIELD_THERMO_HPP

#include <vector>

#include "coopfield/energy.hpp"
#include "coopfield/game.hpp"

namespace coopfield {

// Truncation and accumulation controls for the series expansion of the
// punished partition function.
struct SeriesParams {
    int truncation_k = 64;               // series index K in C_ell
    bool use_asymptotic_stirling = false; // C_ell ~ (e^{y l^2}-1)/l!
    bool log_domain = true;               // accumulate sums in log space
};

struct ThermoResult {
    double log_partition;    // ln Z
    double mean_density;     // <n> in [0, 1]
    double density_variance; // <n^2> - <n>^2 >= 0
    double mean_energy;      // <H>
};

// Series coefficient C_ell(y) = sum_{k>=1} y^k/k! * S(2k, ell), truncated at
// K terms (exact mode) or the closed asymptotic form. `truncated` flags a
// failed ratio test: terms were still growing at the last index.
struct CEll {
    double value;
    double log_value;
    bool truncated;
};

// G(x, y) = sum_{ell=1..N} N!/(N-ell)! * C_ell(y) * xi^ell, xi = 1/(1+e^-x).
struct GValue {
    double value;      // may overflow to +inf for large arguments
    double log_value;  // always finite unless G = 0
    bool truncated;
};

// Closed-form PG density nbar (gamma = 0 only; use mean_field_density for the
// closure value inside gamma > 0 couplings).
double pg_mean_density(const GameParams& p, double beta);

// Exact thermodynamics from the degeneracy sum Z = sum_m C(N,m) e^{-beta E(m)},
// evaluated in log space; supports N up to 2^14 and beyond.
ThermoResult exact_thermo(const EnergyModel& model, double beta);

CEll c_ell(double y, int ell, const SeriesParams& sp);
GValue g_function(double x, double y, int n_players, const SeriesParams& sp);

// ln Z = N ln(1+e^x) + ln(1+G) with x = beta*alpha1, y = beta*alpha2.
double series_log_partition(const EnergyModel& model, double beta, const SeriesParams& sp);

// <n> = xi + (1/N) (1-xi)/(1+G) sum_ell ell N!/(N-ell)! C_ell xi^ell.
double density_series(const EnergyModel& model, double beta, const SeriesParams& sp);

// Upper bound (G + xi)/(1 + G); requires G > 0.
double density_upper_bound(double x, double y, int n_players, const SeriesParams& sp);

// All roots rho in (0,1) of
//   2 beta alpha2 N rho + beta alpha1 = Psi(N rho + 1) - Psi(N - N rho + 1),
// located by a 1024-point sign scan plus bisection to 1e-12 and sorted
// ascending. Multiple roots signal phase coexistence; an empty list means the
// summand is extremal only at the boundary (saturated phase).
std::vector<double> solve_density_condition(const EnergyModel& model, double beta);
std::vector<double> solve_density_condition(const GameParams& p, double beta,
                                            const RiskMode& mode);

// Temperature where the punished density meets the unpunished one:
// beta* = ln 2 / (2c - b). Requires 2c > b.
double crossing_beta(double b, double c);

// Damped fixed-point closure rho <- (rho + T(rho))/2 with
// T(rho) = exact mean density under couplings built at rho, started from nbar.
// Stops when |T(rho) - rho| < tol.
double self_consistent_density(const GameParams& p, double beta, double tol = 1e-10,
                               int max_iter = 10000);

}  // namespace coopfield

#endif
