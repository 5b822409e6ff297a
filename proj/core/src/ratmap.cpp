#include "nahm/ratmap.hpp"

#include <cmath>
#include <sstream>

#include "nahm/detail/linalg.hpp"

namespace nahm {

using detail::image_basis;
using detail::ipow;
using detail::kernel_basis;
using detail::rank_of;

NormalizedSolution normalize(const NahmSolution& s) {
    validate_shapes(s);
    const MonopoleType& t = s.type;
    NormalizedSolution ns{t, {}, {}, {}, {}, 0.0};

    // accumulated gauge factors at beta sites, per interval sweep
    std::map<long, Matrix> g;
    for (int i = 1; i <= t.n() - 1; ++i) {
        const long lo = t.mass2(i);
        const long hi = t.mass2(i + 1);
        const long dim = t.cumulative_charge(i);
        g[lo + 1] = Matrix::Identity(dim, dim);
        for (long w2 = lo + 2; w2 <= hi - 2; w2 += 2) {
            const Matrix& gam = s.gamma.at(w2);
            Eigen::JacobiSVD<Matrix> svd(gam);
            const double smax = svd.singularValues().maxCoeff();
            const double smin = svd.singularValues().minCoeff();
            if (!(smin > 1e-8 * smax)) {
                std::ostringstream os;
                os << "interior gamma at doubled site " << w2 << " singular (margin " << smin
                   << ")";
                throw SingularGamma(os.str());
            }
            g[w2 + 1] = g[w2 - 1] * gam;
        }
    }

    double spread = 0.0;
    for (int i = 1; i <= t.n() - 1; ++i) {
        const long lo = t.mass2(i);
        const long hi = t.mass2(i + 1);
        const Matrix beta0 = s.beta.at(lo + 1);  // g there is the identity
        ns.beta_interval[i] = beta0;
        for (long site = lo + 3; site <= hi - 1; site += 2) {
            const Matrix& gs = g.at(site);
            const Matrix transformed = gs * s.beta.at(site) * gs.inverse();
            spread = std::max(spread, (transformed - beta0).cwiseAbs().maxCoeff());
        }
    }
    ns.beta_spread = spread;

    for (int i = 2; i <= t.n() - 1; ++i)
        ns.gamma_jump[i] = g.at(t.mass2(i) - 1) * s.gamma.at(t.mass2(i));
    for (int i = 1; i <= t.n() - 1; ++i)
        ns.a_norm[i] = s.avec.at(i);  // g at the interval start is the identity
    for (int i = 2; i <= t.n(); ++i)
        ns.b_norm[i] = g.at(t.mass2(i) - 1) * s.bvec.at(i);
    return ns;
}

Matrix rational_coefficients(const NormalizedSolution& ns, Complex h, Complex x) {
    if (h == Complex(0, 0)) throw ZeroHorosphere("horosphere parameter must be nonzero");
    const MonopoleType& t = ns.type;
    const int n = t.n();

    std::map<int, Matrix> resolvent;  // (x - beta_{[p_j]})^{-1}
    for (int j = 1; j <= n - 1; ++j) {
        const Matrix& beta = ns.beta_interval.at(j);
        const Matrix m = x * Matrix::Identity(beta.rows(), beta.cols()) - beta;
        Eigen::JacobiSVD<Matrix> svd(m);
        const double smin = svd.singularValues().minCoeff();
        if (!(smin > 1e-12 * std::max(1.0, std::abs(x)))) {
            std::ostringstream os;
            os << "x = " << x.real() << "+" << x.imag() << "i hits the spectrum of beta_[" << j
               << "]";
            throw PoleAtX(os.str());
        }
        resolvent[j] = m.inverse();
    }

    Matrix c = Matrix::Zero(n, n);
    for (int j = 1; j <= n - 1; ++j) {
        const long kj = t.cumulative_charge(j);
        const Matrix row = ns.a_norm.at(j) * resolvent.at(j);  // 1 x kj
        for (int i = j + 1; i <= n; ++i) {
            const Matrix& b = ns.b_norm.at(i);
            const long e = (t.mass2(j) - t.mass2(i)) / 2;  // always an integer
            c(j - 1, i - 1) = ipow(-h, e) * (row * b.topRows(kj))(0, 0);
        }
    }
    return c;
}

FlagPoint flag_at(const NormalizedSolution& ns, Complex h, Complex x) {
    const MonopoleType& t = ns.type;
    const int n = t.n();
    const Matrix c = rational_coefficients(ns, h, x);

    // constraint j: r_j - sum_{i>j} c_{j,i} r_i = 0
    Matrix constraints = Matrix::Zero(n - 1, n);
    for (int j = 1; j <= n - 1; ++j) {
        constraints(j - 1, j - 1) = Complex(1, 0);
        for (int i = j + 1; i <= n; ++i) constraints(j - 1, i - 1) = -c(j - 1, i - 1);
    }

    FlagPoint f;
    f.x = x;
    f.subspaces.resize(static_cast<std::size_t>(n - 1));
    for (int m = n - 1; m >= 1; --m) {
        const Matrix rows = constraints.bottomRows(n - m);  // constraints j = m..N-1
        Matrix v = kernel_basis(rows);
        if (v.cols() != m) throw DegenerateFlag("flag subspace has wrong dimension");
        f.subspaces[static_cast<std::size_t>(m - 1)] = std::move(v);
    }
    for (int m = 1; m <= n - 2; ++m) {
        const Matrix& inner = f.subspaces[static_cast<std::size_t>(m - 1)];
        const Matrix& outer = f.subspaces[static_cast<std::size_t>(m)];
        const double dev = (inner - outer * (outer.adjoint() * inner)).norm();
        if (!(dev <= 1e-8)) throw DegenerateFlag("flag nesting violated");
    }
    return f;
}

double subspace_distance(const Matrix& u, const Matrix& v) {
    if (u.cols() != v.cols() || u.rows() != v.rows()) return 1.0;
    if (u.cols() == 0) return 0.0;
    // sin of the largest principal angle, via the orthogonal projectors;
    // avoids the sqrt(1 - s^2) cancellation near zero angle
    const Matrix diff = u * u.adjoint() - v * v.adjoint();
    Eigen::JacobiSVD<Matrix> svd(diff);
    return svd.singularValues().maxCoeff();
}

namespace {

void subsets(long n, long m, long start, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
    if (static_cast<long>(cur.size()) == m) {
        out.push_back(cur);
        return;
    }
    for (long i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, m, i + 1, cur, out);
        cur.pop_back();
    }
}

} // namespace

Eigen::VectorXcd plucker(const Matrix& basis) {
    const long n = basis.rows();
    const long m = basis.cols();
    std::vector<std::vector<long>> idx;
    std::vector<long> cur;
    subsets(n, m, 0, cur, idx);
    Eigen::VectorXcd p(static_cast<long>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        Matrix minor(m, m);
        for (long r = 0; r < m; ++r) minor.row(r) = basis.row(idx[k][static_cast<std::size_t>(r)]);
        p(static_cast<long>(k)) = minor.determinant();
    }
    const double norm = p.norm();
    if (norm > 0.0) p /= norm;
    return p;
}

BoundaryFlag boundary_flag_map(const NahmSolution& s, int i, Complex x) {
    const MonopoleType& t = s.type;
    if (i < 1 || i > t.n() - 1) throw WeightOutOfRange("interval index out of range");
    const SmallMonad sm = weight_restrict(s, x, Complex(-1, 0), t.mass2(i));
    const long k = t.cumulative_charge(i);

    BoundaryFlag f;
    f.inner = image_basis(sm.A);
    f.outer = kernel_basis(sm.B);
    if (f.inner.cols() != k || f.outer.cols() != k + 1)
        throw DegenerateSmallMonad("small monad degenerate: flag dimensions off");
    return f;
}

long kfrak(const MonopoleType& t, int i) {
    if (i < 1 || i > t.n() - 1) throw WeightOutOfRange("interval index out of range");
    const long k = t.cumulative_charge(i);
    const long m = t.cumulative_charge(i - 1) + k + 1;  // 2k_1+...+2k_{i-1}+k_i+1
    auto binom = [](long nn, long kk) {
        long long r = 1;
        for (long j = 1; j <= kk; ++j) r = r * (nn - kk + j) / j;
        return r;
    };
    return static_cast<long>(binom(m, k) * binom(m, k + 1) - 1);
}

namespace {

// Unit generator of the line L_{p_i} at the homogeneous point [xh:0:zh:0].
Eigen::VectorXcd line_generator(const NahmSolution& s, long w2, Complex xh, Complex zh) {
    const SmallMonad sm = weight_restrict(s, xh, zh, w2);
    const Matrix kerB = kernel_basis(sm.B);
    const Matrix imA = image_basis(sm.A);
    const Matrix y = kernel_basis(imA.adjoint() * kerB);
    const Matrix line = kerB * y;
    if (line.cols() != 1)
        throw DegenerateSmallMonad("small monad cohomology is not one-dimensional");
    Eigen::VectorXcd g = line.col(0);
    return g / g.norm();
}

// Discrete Laplacian of -log||sigma|| at a chart point; chart 0 has
// homogeneous lift (x, -1), chart 1 lifts u to (1, -u).
double density_in_chart(const NahmSolution& s, long w2, int chart, Complex coord, double step) {
    auto gen = [&](Complex c) {
        return chart == 0 ? line_generator(s, w2, c, Complex(-1, 0))
                          : line_generator(s, w2, Complex(1, 0), -c);
    };
    const Eigen::VectorXcd g0 = gen(coord);
    const std::array<Complex, 4> offs = {Complex(step, 0), Complex(-step, 0), Complex(0, step),
                                         Complex(0, -step)};
    double sum = 0.0;
    for (const Complex& d : offs) {
        const Eigen::VectorXcd gk = gen(coord + d);
        const Complex overlap = g0.dot(gk);  // conjugate-linear in g0
        if (std::abs(overlap) < 1e-8)
            throw StencilAcrossPole("affine normalization breaks down across the stencil");
        // sigma = gk / <g0, gk>, so log||sigma|| = -log|<g0, gk>|
        sum += -std::log(std::abs(overlap));
    }
    // f(center) = 0 by normalization
    return -sum / (step * step);
}

} // namespace

double curvature_density(const NahmSolution& s, int i, Complex x, double step) {
    const MonopoleType& t = s.type;
    if (i < 1 || i > t.n() - 1) throw WeightOutOfRange("interval index out of range");
    if (!(step > 0.0)) throw NahmError("stencil step must be positive");
    return density_in_chart(s, t.mass2(i), 0, x, step);
}

double chern_integral(const NahmSolution& s, int i, int grid) {
    const MonopoleType& t = s.type;
    if (i < 1 || i > t.n() - 1) throw WeightOutOfRange("interval index out of range");
    if (grid < 4) throw NahmError("grid too coarse");
    const long w2 = t.mass2(i);

    const double step = 1e-4;
    const double two_pi = 6.283185307179586;
    double total = 0.0;
    for (int chart = 0; chart < 2; ++chart) {
        const long nr = grid;
        const long nt = grid;
        const double dr = 1.0 / static_cast<double>(nr);
        const double dt = two_pi / static_cast<double>(nt);
        for (long mr = 0; mr < nr; ++mr) {
            const double rho = (static_cast<double>(mr) + 0.5) * dr;
            for (long mt = 0; mt < nt; ++mt) {
                const double th = (static_cast<double>(mt) + 0.5) * dt;
                const Complex c(rho * std::cos(th), rho * std::sin(th));
                total += density_in_chart(s, w2, chart, c, step) * rho * dr * dt;
            }
        }
    }
    return total / two_pi;
}

StabilityReport check_stability(const NahmSolution& s) {
    validate_shapes(s);
    const MonopoleType& t = s.type;
    StabilityReport rep;
    rep.ok = true;

    for (const auto& [site, gam] : s.gamma) {
        if (gam.rows() == 0 || gam.cols() == 0) continue;
        Eigen::JacobiSVD<Matrix> svd(gam);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        rep.gamma_min_singular[site] = smin;
        const bool interior = t.mass_index_at(site) == 0;
        if (interior && !(smin > 1e-8 * smax)) {
            rep.ok = false;
            if (rep.failure.empty()) {
                std::ostringstream os;
                os << "gamma at doubled site " << site << " is not injective";
                rep.failure = os.str();
            }
        }
    }
    if (!rep.ok) return rep;

    const NormalizedSolution ns = [&] {
        try {
            return normalize(s);
        } catch (const SingularGamma& e) {
            throw NormalizationFailed(e.what());
        }
    }();

    for (int i = 1; i <= t.n() - 1; ++i) {
        const long k = t.cumulative_charge(i);
        const Matrix& beta = ns.beta_interval.at(i);
        Matrix krylov(k + 1, k);
        Matrix row = ns.a_norm.at(i);
        for (long l = 0; l <= k; ++l) {
            krylov.row(l) = row;
            row = row * beta;
        }
        const long rank = rank_of(krylov);
        rep.krylov_rank[i] = rank;
        rep.krylov_required[i] = k;
        if (rank < k) {
            rep.ok = false;
            if (rep.failure.empty()) {
                std::ostringstream os;
                os << "Krylov span deficient on interval " << i << " (rank " << rank << " < " << k
                   << ")";
                rep.failure = os.str();
            }
        }
    }
    return rep;
}

} // namespace nahm
