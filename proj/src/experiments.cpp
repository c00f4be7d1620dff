#include "coopfield/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "coopfield/errors.hpp"
#include "coopfield/parallel.hpp"
#include "coopfield/rng.hpp"
#include "coopfield/special.hpp"

namespace coopfield {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SweepRecord blank_record(const GameParams& p, double beta, Solver solver, RiskKind mode) {
    SweepRecord rec;
    rec.beta = beta;
    rec.b = p.benefit;
    rec.c = p.cost;
    rec.gamma = p.punishment;
    rec.n_players = p.n_players;
    rec.solver = solver;
    rec.mode = mode;
    rec.mean_density = kNaN;
    rec.density_variance = kNaN;
    rec.std_error = kNaN;
    rec.tau_int = kNaN;
    return rec;
}

// Continuous log-weight of the degeneracy summand at density rho.
double summand_log_weight(const EnergyModel& model, double beta, double rho) {
    const double n = model.n_players;
    const double m = rho * n;
    return log_choose(n, m) + beta * (model.alpha2 * m * m + model.alpha1 * m);
}

// Digamma-solver density: stationary densities plus the two saturated
// candidates, ranked by the free energy of the degeneracy summand.
double digamma_density(const EnergyModel& model, double beta) {
    std::vector<double> candidates = solve_density_condition(model, beta);
    candidates.push_back(0.0);
    candidates.push_back(1.0);
    double best = candidates.front();
    double best_weight = -std::numeric_limits<double>::infinity();
    for (double rho : candidates) {
        const double w = summand_log_weight(model, beta, rho);
        if (w > best_weight) {
            best_weight = w;
            best = rho;
        }
    }
    return best;
}

double exact_density(const GameParams& p, double beta, const RiskMode& mode) {
    return exact_thermo(build_energy_model(p, beta, mode), beta).mean_density;
}

}  // namespace

std::vector<SweepRecord> beta_sweep(const GameParams& p, const std::vector<double>& betas,
                                    const std::vector<Solver>& solvers,
                                    const SweepOptions& opts) {
    if (betas.empty()) throw ParameterError("beta grid must be non-empty");
    if (!std::is_sorted(betas.begin(), betas.end())) {
        throw ParameterError("beta grid must be sorted ascending");
    }
    if (solvers.empty()) throw ParameterError("at least one solver is required");

    std::vector<SweepRecord> records;
    const RiskKind kind = opts.mode.kind;

    for (Solver solver : solvers) {
        const std::size_t base = records.size();
        for (double beta : betas) records.push_back(blank_record(p, beta, solver, kind));

        if (solver == Solver::MC) {
            // Sequential: each chain warm-starts from the previous final state.
            std::optional<Configuration> state;
            for (std::size_t i = 0; i < betas.size(); ++i) {
                SweepRecord& rec = records[base + i];
                try {
                    const EnergyModel model = build_energy_model(p, betas[i], opts.mode);
                    ChainConfig cfg = opts.chain;
                    cfg.seed = derive_stream_seed(opts.chain.seed, i);
                    const ChainResult res =
                        state ? metropolis_run(model, betas[i], cfg, *state)
                              : metropolis_run(model, betas[i], cfg);
                    state = res.final_state;
                    rec.mean_density = res.mean_density;
                    rec.density_variance = res.density_variance;
                    rec.std_error = res.std_error;
                    rec.tau_int = res.tau_int;
                } catch (const std::exception& e) {
                    rec.ok = false;
                    rec.error = e.what();
                }
            }
            continue;
        }

        parallel_for(betas.size(), [&, base, solver](std::size_t i) {
            SweepRecord& rec = records[base + i];
            try {
                const EnergyModel model = build_energy_model(p, betas[i], opts.mode);
                switch (solver) {
                    case Solver::Exact: {
                        const ThermoResult t = exact_thermo(model, betas[i]);
                        rec.mean_density = t.mean_density;
                        rec.density_variance = t.density_variance;
                        break;
                    }
                    case Solver::Series:
                        rec.mean_density = density_series(model, betas[i], opts.series);
                        break;
                    case Solver::Digamma:
                        rec.mean_density =
                            betas[i] > 0.0 ? digamma_density(model, betas[i]) : 0.5;
                        break;
                    case Solver::MC:
                        break;  // handled above
                }
            } catch (const std::exception& e) {
                rec.ok = false;
                rec.error = e.what();
            }
        });
    }
    return records;
}

double find_crossing(const GameParams& p, double beta_lo, double beta_hi,
                     const RiskMode& mode) {
    if (!(2.0 * p.cost > p.benefit)) {
        throw std::domain_error("crossing requires 2c > b");
    }
    if (!(beta_lo >= 0.0 && beta_hi > beta_lo)) {
        throw ParameterError("need 0 <= beta_lo < beta_hi");
    }
    const GameParams unpunished(p.n_players, p.benefit, p.cost, 0.0);
    const auto f = [&](double beta) {
        return exact_density(p, beta, mode) - pg_mean_density(unpunished, beta);
    };
    double lo = beta_lo, hi = beta_hi;
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw NumericalValidityError("no crossing: density difference does not change "
                                     "sign in the window");
    }
    // Resolve well below the 1e-4 contract so the densities coincide to
    // ~1e-8 at the returned point (the difference has O(0.1) slope here).
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double transition_gap(const GameParams& p_low, const GameParams& p_high, double beta,
                      const RiskMode& mode) {
    if (p_low.n_players != p_high.n_players || p_low.benefit != p_high.benefit ||
        p_low.punishment != p_high.punishment) {
        throw ParameterError("transition gap params may differ only in cost");
    }
    if (p_low.cost > p_high.cost) {
        throw ParameterError("expected c_low <= c_high");
    }
    return exact_density(p_low, beta, mode) - exact_density(p_high, beta, mode);
}

VarianceCurve variance_curve(const GameParams& p, const std::vector<double>& betas,
                             const RiskMode& mode) {
    if (betas.size() < 3) throw ParameterError("variance curve needs at least 3 points");
    if (!std::is_sorted(betas.begin(), betas.end())) {
        throw ParameterError("beta grid must be sorted ascending");
    }
    VarianceCurve curve;
    curve.points.resize(betas.size());
    parallel_for(betas.size(), [&](std::size_t i) {
        const EnergyModel model = build_energy_model(p, betas[i], mode);
        curve.points[i] = {betas[i], exact_thermo(model, betas[i]).density_variance};
    });

    std::size_t imax = 0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        if (curve.points[i].second > curve.points[imax].second) imax = i;
    }
    if (imax == 0 || imax + 1 == curve.points.size()) {
        curve.boundary_warning = true;
        curve.peak_beta = curve.points[imax].first;
        return curve;
    }
    // Vertex of the parabola through the max sample and its neighbours.
    const auto [x0, y0] = curve.points[imax - 1];
    const auto [x1, y1] = curve.points[imax];
    const auto [x2, y2] = curve.points[imax + 1];
    const double m0 = 0.5 * (x0 + x1);
    const double m1 = 0.5 * (x1 + x2);
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curvature = (d1 - d0) / (m1 - m0);
    curve.peak_beta =
        curvature < 0.0 ? std::clamp(m0 - d0 / curvature, x0, x2) : x1;
    return curve;
}

FitResult fit_decay(const std::vector<SweepRecord>& records, double window_lo,
                    double window_hi) {
    std::vector<double> betas, logn;
    for (const auto& rec : records) {
        if (!rec.ok || !(rec.mean_density > 0.0)) continue;
        if (rec.beta < window_lo || rec.beta > window_hi) continue;
        betas.push_back(rec.beta);
        logn.push_back(std::log(rec.mean_density));
    }
    if (betas.size() < 10) {
        throw ParameterError("decay fit needs at least 10 records with positive density "
                             "inside the window (got " + std::to_string(betas.size()) + ")");
    }
    const double lo = *std::min_element(betas.begin(), betas.end());
    if (lo <= 1.8) {
        throw ParameterError("decay fit needs the window to start above the beta0 "
                             "search range [1.8, 2.6)");
    }

    FitResult best;
    double best_rms = std::numeric_limits<double>::infinity();
    for (double beta0 = 1.8; beta0 <= 2.6 + 1e-12; beta0 += 0.005) {
        if (beta0 >= lo) break;  // the model diverges at beta0
        // Design columns: -ln|beta - beta0|, -beta, 1.
        double a00 = 0, a01 = 0, a02 = 0, a11 = 0, a12 = 0, a22 = 0;
        double r0 = 0, r1 = 0, r2 = 0;
        for (std::size_t i = 0; i < betas.size(); ++i) {
            const double u = -std::log(std::abs(betas[i] - beta0));
            const double v = -betas[i];
            const double y = logn[i];
            a00 += u * u; a01 += u * v; a02 += u;
            a11 += v * v; a12 += v; a22 += 1.0;
            r0 += u * y; r1 += v * y; r2 += y;
        }
        // Solve the 3x3 normal equations by Gaussian elimination.
        double mat[3][4] = {{a00, a01, a02, r0}, {a01, a11, a12, r1}, {a02, a12, a22, r2}};
        bool singular = false;
        for (int col = 0; col < 3 && !singular; ++col) {
            int pivot = col;
            for (int row = col + 1; row < 3; ++row) {
                if (std::abs(mat[row][col]) > std::abs(mat[pivot][col])) pivot = row;
            }
            if (std::abs(mat[pivot][col]) < 1e-12) {
                singular = true;
                break;
            }
            std::swap(mat[col], mat[pivot]);
            for (int row = 0; row < 3; ++row) {
                if (row == col) continue;
                const double factor = mat[row][col] / mat[col][col];
                for (int cc = col; cc < 4; ++cc) mat[row][cc] -= factor * mat[col][cc];
            }
        }
        if (singular) continue;
        const double omega1 = mat[0][3] / mat[0][0];
        const double omega2 = mat[1][3] / mat[1][1];
        const double intercept = mat[2][3] / mat[2][2];
        double ss = 0.0;
        for (std::size_t i = 0; i < betas.size(); ++i) {
            const double fitted = -omega1 * std::log(std::abs(betas[i] - beta0)) -
                                  omega2 * betas[i] + intercept;
            ss += (logn[i] - fitted) * (logn[i] - fitted);
        }
        const double rms = std::sqrt(ss / static_cast<double>(betas.size()));
        if (rms < best_rms) {
            best_rms = rms;
            best = FitResult{beta0, omega1, omega2, intercept, rms, window_lo, window_hi};
        }
    }
    if (!(best_rms < std::numeric_limits<double>::infinity())) {
        throw NumericalValidityError("decay fit failed: singular design matrix at every "
                                     "beta0 candidate");
    }
    return best;
}

}  // namespace coopfield
