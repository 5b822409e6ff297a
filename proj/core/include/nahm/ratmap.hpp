#pragma once

#include "nahm/adhm.hpp"

namespace nahm {

/// A solution put into the interval gauge: interior gammas are the identity
/// and the betas collapse to one constant matrix per interval.  Indices i
/// refer to intervals / mass points, not lattice sites.
struct NormalizedSolution {
    MonopoleType type;
    std::map<int, Matrix> beta_interval;  // i = 1..N-1, (k_1+...+k_i) square
    std::map<int, Matrix> gamma_jump;     // i = 2..N-1, rectangular jump block
    std::map<int, Matrix> a_norm;         // i = 1..N-1, row
    std::map<int, Matrix> b_norm;         // i = 2..N, column
    double beta_spread = 0.0;  // worst deviation of the interval betas from constancy
};

/// Sweeps the GL gauge freedom left-to-right across each interval so that
/// every interior gamma becomes the identity.  Requires interior gammas
/// invertible (relative sigma_min threshold 1e-8).
NormalizedSolution normalize(const NahmSolution& s);

/// The resolvent coefficients c_{j,i}(x), 1 <= j < i <= N, stored at
/// (j-1, i-1) of an upper-triangular N x N table.
Matrix rational_coefficients(const NormalizedSolution& ns, Complex h, Complex x);

/// Value of the flag-valued rational map at one x: orthonormal nested bases
/// of V_1 subset ... subset V_{N-1} in C^N.
struct FlagPoint {
    Complex x;
    std::vector<Matrix> subspaces;  // subspaces[m-1] is N x m
};

FlagPoint flag_at(const NormalizedSolution& ns, Complex h, Complex x);

/// Largest principal-angle deviation between the column spans of two
/// orthonormal bases of equal dimension.
double subspace_distance(const Matrix& u, const Matrix& v);

/// Plucker coordinates of an orthonormal basis (all maximal minors, in
/// lexicographic row-subset order), normalized to unit length.
Eigen::VectorXcd plucker(const Matrix& basis);

/// The weight-p_i small-monad flag F_i at x: the image of the A-map nested
/// inside the orthocomplement of the B-map's adjoint image.
struct BoundaryFlag {
    Matrix inner;  // M x (k_1+...+k_i), orthonormal
    Matrix outer;  // M x (k_1+...+k_i+1), orthonormal
};

BoundaryFlag boundary_flag_map(const NahmSolution& s, int i, Complex x);

/// Dimension of the Plucker-Segre ambient projective space of F_i:
/// C(M, K) * C(M, K+1) - 1 with K = k_1+...+k_i, M = 2k_1+...+2k_{i-1}+k_i+1.
long kfrak(const MonopoleType& t, int i);

/// Local curvature density of the weight-p_i line bundle: the 5-point
/// discrete Laplacian of -log ||sigma|| for the affine-normalized holomorphic
/// generator sigma of L_{p_i}.  The integral of this density over P^1
/// divided by 2 pi is the degree.
double curvature_density(const NahmSolution& s, int i, Complex x, double step);

/// Numerical degree of L_{p_i}: curvature integrated over two polar charts
/// split at |x| = 1 with grid x grid samples each, divided by 2 pi.
double chern_integral(const NahmSolution& s, int i, int grid);

} // namespace nahm
