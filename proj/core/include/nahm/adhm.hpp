#pragma once

#include <array>

#include "nahm/lattice.hpp"

namespace nahm {

/// The equivariant block ADHM matrices of a lattice solution.  Columns are
/// ordered by ascending doubled weight; alpha1 is block-diagonal in the
/// beta blocks, alpha2 carries the gamma blocks on the block-superdiagonal.
struct ADHMData {
    MonopoleType type;
    Matrix alpha1;  // kappa x kappa
    Matrix alpha2;  // kappa x kappa
    Matrix a;       // N x kappa
    Matrix b;       // kappa x N
    std::vector<long> weight_of_column;  // doubled weights, size kappa
};

/// Homogeneous point of P^3; [x:y:z:0] restricts to the P^2 construction.
using ProjPoint = std::array<Complex, 4>;

ADHMData assemble(const NahmSolution& s);

/// Inverse of assemble; off-pattern entries above the absolute tolerance
/// raise OffBlockViolation (reporting the worst entry).
NahmSolution disassemble(const ADHMData& d, double off_block_tol = 1e-12);

struct EquivarianceReport {
    // max relative deviation of the four Norbury conditions
    std::array<double, 4> deviation{};
    bool pass(double tol = 1e-10) const {
        for (double d : deviation)
            if (!(d <= tol)) return false;
        return true;
    }
};

EquivarianceReport equivariance_check(const ADHMData& d, Complex c);

/// [alpha1, alpha2] + b a
Matrix adhm_complex_residual(const ADHMData& d);

/// [alpha1, alpha1*] + [alpha2, alpha2*] + b b* - a* a
Matrix adhm_real_residual(const ADHMData& d);

struct MonadMaps {
    Matrix A;  // (2 kappa + N) x kappa
    Matrix B;  // kappa x (2 kappa + N)
    ProjPoint point;
};

MonadMaps monad_maps(const ADHMData& d, const ProjPoint& X);

struct MonadCheck {
    double sigma_min_A = 0.0;  // injectivity margin
    double sigma_min_B = 0.0;  // surjectivity margin
    double BA_norm = 0.0;
    double A_norm = 0.0;
    double B_norm = 0.0;
};

MonadCheck monad_check(const ADHMData& d, const ProjPoint& X);

/// Orthonormal basis of ker(B_X) intersect (im A_X)^perp; dimension N for a
/// non-degenerate monad, else DegenerateMonad is thrown.
Matrix fibre(const ADHMData& d, const ProjPoint& X);

/// The restriction of (A_X, B_X) to the doubled weight w2 over the fixed
/// line X = [x:0:z:0].  Row/column bookkeeping follows the weight split of
/// K into (H-copy, shifted H-copy, framing).
struct SmallMonad {
    Matrix A;        // (dim K_w) x (dim H_w)
    Matrix B;        // (dim L_w) x (dim K_w)
    long dim_H = 0;  // chi_w
    long dim_K = 0;  // chi_w + chi_{w-1} + #framing
    long dim_L = 0;  // chi_{w-1}
};

SmallMonad weight_restrict(const NahmSolution& s, Complex x, Complex z, long w2);

/// dim ker(B) - rank(A), with ranks at relative threshold 1e-8 * sigma_max.
long small_monad_cohomology_dim(const SmallMonad& sm);

} // namespace nahm
