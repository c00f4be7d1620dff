#ifndef COOPFIELD_EXPERIMENTS_HPP
#define COOPFIELD_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "coopfield/energy.hpp"
#include "coopfield/game.hpp"
#include "coopfield/montecarlo.hpp"
#include "coopfield/thermo.hpp"

namespace coopfield {

enum class Solver { MC, Exact, Series, Digamma };

// One (beta, b, c, gamma) grid point with its observables. std_error and
// tau_int are meaningful for the MC solver only and NaN otherwise.
struct SweepRecord {
    double beta = 0.0;
    double b = 0.0;
    double c = 0.0;
    double gamma = 0.0;
    int n_players = 0;
    Solver solver = Solver::Exact;
    RiskKind mode = RiskKind::MeanFieldClosedForm;
    double mean_density = 0.0;
    double density_variance = 0.0;
    double std_error = 0.0;
    double tau_int = 0.0;
    bool ok = true;
    std::string error;
};

struct SweepOptions {
    RiskMode mode = RiskMode::mean_field();
    ChainConfig chain;      // MC solver; chains warm-start along the grid
    SeriesParams series;    // Series solver
};

// Evaluates each requested solver on the ascending beta grid. Exact, Series
// and Digamma points run in parallel; MC points run in grid order so each
// chain warm-starts from the previous beta's final state (annealing). A
// failing point yields a record with ok = false and the sweep continues.
std::vector<SweepRecord> beta_sweep(const GameParams& p, const std::vector<double>& betas,
                                    const std::vector<Solver>& solvers,
                                    const SweepOptions& opts);

// Bisects <n>(gamma) - nbar(gamma=0) over [beta_lo, beta_hi] on the Exact
// solver; |result - root| < 1e-4. Requires 2c > b (no crossing otherwise).
double find_crossing(const GameParams& p, double beta_lo, double beta_hi,
                     const RiskMode& mode);

// Gap Lambda_c(beta) = <n>(c_low) - <n>(c_high); the params may differ only
// in cost.
double transition_gap(const GameParams& p_low, const GameParams& p_high, double beta,
                      const RiskMode& mode);

struct VarianceCurve {
    std::vector<std::pair<double, double>> points;  // (beta, variance)
    double peak_beta = 0.0;       // local quadratic fit around the max sample
    bool boundary_warning = false;  // peak sits on the grid edge
};

VarianceCurve variance_curve(const GameParams& p, const std::vector<double>& betas,
                             const RiskMode& mode);

// Least-squares fit of ln<n> = -omega1 ln|beta - beta0| - omega2 beta + const
// over the records inside the window; beta0 grid-searched in [1.8, 2.6] with
// step 0.005 (restricted below the window start, where the model diverges).
struct FitResult {
    double beta0 = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

FitResult fit_decay(const std::vector<SweepRecord>& records, double window_lo,
                    double window_hi);

}  // namespace coopfield

#endif
