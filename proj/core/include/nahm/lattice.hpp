#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <vector>

#include "nahm/typedata.hpp"

namespace nahm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Lattice fields of a solution candidate of the (N-1)-interval discrete
/// Nahm equations.  beta keyed by doubled half-integer site 2i+1, gamma by
/// doubled integer site 2i, a and b by the mass index j.  The boundary
/// matrices gamma_{p_1} and gamma_{p_N} are identically zero and not stored.
struct NahmSolution {
    MonopoleType type;
    std::map<long, Matrix> beta;
    std::map<long, Matrix> gamma;
    std::map<int, Matrix> avec;  // j = 1..N-1, shape 1 x chi_{p_j}
    std::map<int, Matrix> bvec;  // j = 2..N,   shape chi_{p_j - 1} x 1
};

struct GaugeTransform {
    std::map<long, Matrix> g;        // per beta site, chi_i x chi_i invertible
    std::map<int, Complex> lambda;   // j = 1..N, nonzero framing factors
};

/// Throws ShapeMismatch if any stored matrix disagrees with site_dims.
void validate_shapes(const NahmSolution& s);

/// Deterministic i.i.d. complex Gaussian fields with the given deviation.
NahmSolution random_init(const MonopoleType& t, unsigned long seed, double scale);

NahmSolution zero_solution(const MonopoleType& t);

/// Complex discrete Nahm residuals, keyed by doubled site 2(i+1); the b*a
/// source appears exactly at interior mass sites.
std::map<long, Matrix> complex_residual(const NahmSolution& s);

/// Real discrete Nahm residuals, keyed by doubled site 2i; Hermitian up to
/// round-off.  a*a sources at i = p_j (j <= N-1), b b* sources at i+1 = p_j
/// (j >= 2); overlapping sources are summed.
std::map<long, Matrix> real_residual(const NahmSolution& s);

/// Sum of squared Frobenius norms of all complex and real residual blocks.
double total_residual(const NahmSolution& s);

GaugeTransform identity_gauge(const MonopoleType& t);
GaugeTransform random_unitary_gauge(const MonopoleType& t, unsigned long seed);
GaugeTransform random_invertible_gauge(const MonopoleType& t, unsigned long seed);
GaugeTransform compose(const GaugeTransform& h, const GaugeTransform& g);

NahmSolution gauge_transform(const NahmSolution& s, const GaugeTransform& g);

/// Unitary-gauge invariants used to compare solutions modulo gauge.
struct GaugeInvariants {
    std::map<long, Eigen::VectorXd> gamma_singular_values;
    std::map<long, std::vector<Complex>> beta_eigenvalues;  // sorted lexicographically
    std::map<int, double> a_norms;
    std::map<int, double> b_norms;
};

GaugeInvariants gauge_invariants(const NahmSolution& s);

/// Largest absolute difference between two invariant records.
double invariant_distance(const GaugeInvariants& u, const GaugeInvariants& v);

/// Injectivity margins of the gamma blocks and the Krylov span ranks of the
/// normalized interval data (Braam-Austin stability).
struct StabilityReport {
    bool ok = false;
    std::map<long, double> gamma_min_singular;        // per gamma site
    std::map<int, long> krylov_rank;                  // per interval i
    std::map<int, long> krylov_required;              // k_1 + ... + k_i
    std::string failure;                              // empty when ok
};

/// Defined in ratmap.cpp (delegates to normalize for the Krylov test).
StabilityReport check_stability(const NahmSolution& s);

} // namespace nahm
