#pragma once

#include "nahm/lattice.hpp"

namespace nahm {

struct SolverOptions {
    long max_iterations = 400;
    double tolerance = 1e-20;  // on the squared objective (total_residual)
    int restarts = 5;
    unsigned long seed = 1;
    double init_scale = 1.0;
    double damping = 1e-3;  // initial Levenberg-Marquardt damping
};

struct SolveReport {
    bool converged = false;
    double final_residual = 0.0;
    long iterations = 0;
    int restart_index = 0;
    StabilityReport stability;
};

/// Pins the exact symmetries of the residual that would otherwise leave the
/// outcome seed-dependent: shifts every beta by -tr(alpha1)/kappa and scales
/// all fields so that sum_j |a_{p_j}|^2 = N - 1.  Residual-preserving up to
/// the positive scale factor, which maps zeros to zeros.
NahmSolution canonicalize(const NahmSolution& s);

/// Damped Gauss-Newton on the stacked complex+real discrete Nahm residuals,
/// with random restarts; degenerate minima (a = 0, b = 0, non-injective
/// gamma) are rejected via check_stability and trigger a restart.  Never
/// throws on failure: the best candidate is returned with converged=false.
std::pair<NahmSolution, SolveReport> solve(const MonopoleType& t, const SolverOptions& opts);

/// Continues minimization from s; no re-randomization, no restarts.
std::pair<NahmSolution, SolveReport> refine(const NahmSolution& s, const SolverOptions& opts);

/// Exact closed-form solution for the N=2, k=1 chain: type (-p,), (1,),
/// p a positive half-integer or integer.  All matrices are scalar; the real
/// equations force |gamma_i|^2 = |a|^2 = |b|^2 and the complex equations make
/// beta constant; the canonical representative has beta = 0 and unit fields.
NahmSolution su2_k1_oracle(double p);

} // namespace nahm
