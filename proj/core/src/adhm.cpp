#include "nahm/adhm.hpp"

#include <sstream>

#include "nahm/detail/linalg.hpp"

namespace nahm {

using detail::ipow;
using detail::kernel_basis;
using detail::rank_of;

namespace {

// column offset of each doubled-weight block
std::map<long, long> weight_offsets(const MonopoleType& t) {
    std::map<long, long> off;
    long cursor = 0;
    for (long w2 = t.lo2(); w2 <= t.hi2() - 2; w2 += 2) {
        off[w2] = cursor;
        cursor += t.chi2(w2);
    }
    return off;
}

} // namespace

ADHMData assemble(const NahmSolution& s) {
    validate_shapes(s);
    const MonopoleType& t = s.type;
    const long kappa = t.kappa();
    const auto off = weight_offsets(t);

    ADHMData d{t,
               Matrix::Zero(kappa, kappa),
               Matrix::Zero(kappa, kappa),
               Matrix::Zero(t.n(), kappa),
               Matrix::Zero(kappa, t.n()),
               {}};
    d.weight_of_column.resize(static_cast<std::size_t>(kappa));
    for (const auto& [w2, o] : off)
        for (long c = 0; c < t.chi2(w2); ++c)
            d.weight_of_column[static_cast<std::size_t>(o + c)] = w2;

    for (const auto& [site, b] : s.beta) {
        const long o = off.at(site - 1);
        d.alpha1.block(o, o, b.rows(), b.cols()) = b;
    }
    for (const auto& [site, g] : s.gamma)
        d.alpha2.block(off.at(site - 2), off.at(site), g.rows(), g.cols()) = g;
    for (const auto& [j, a] : s.avec)
        d.a.block(j - 1, off.at(t.mass2(j)), 1, a.cols()) = a;
    for (const auto& [j, b] : s.bvec)
        d.b.block(off.at(t.mass2(j) - 2), j - 1, b.rows(), 1) = b;
    return d;
}

NahmSolution disassemble(const ADHMData& d, double off_block_tol) {
    const MonopoleType& t = d.type;
    const long kappa = t.kappa();
    if (d.alpha1.rows() != kappa || d.alpha1.cols() != kappa || d.alpha2.rows() != kappa ||
        d.alpha2.cols() != kappa || d.a.rows() != t.n() || d.a.cols() != kappa ||
        d.b.rows() != kappa || d.b.cols() != t.n())
        throw ShapeMismatch("ADHM matrices disagree with kappa/N");

    const auto off = weight_offsets(t);
    const SiteLayout lay = site_dims(t);

    NahmSolution s{t, {}, {}, {}, {}};
    for (const auto& [site, shape] : lay.beta) {
        const long o = off.at(site - 1);
        s.beta[site] = d.alpha1.block(o, o, shape.first, shape.second);
    }
    for (const auto& [site, shape] : lay.gamma)
        s.gamma[site] = d.alpha2.block(off.at(site - 2), off.at(site), shape.first, shape.second);
    for (const auto& [j, shape] : lay.a)
        s.avec[j] = d.a.block(j - 1, off.at(t.mass2(j)), 1, shape.second);
    for (const auto& [j, shape] : lay.b)
        s.bvec[j] = d.b.block(off.at(t.mass2(j) - 2), j - 1, shape.first, 1);

    // everything outside the block pattern must vanish
    const ADHMData re = assemble(s);
    double worst = 0.0;
    const char* which = "";
    long wr = 0, wc = 0;
    auto scan = [&](const Matrix& got, const Matrix& want, const char* name) {
        for (long r = 0; r < got.rows(); ++r)
            for (long c = 0; c < got.cols(); ++c) {
                const double dev = std::abs(got(r, c) - want(r, c));
                if (dev > worst) {
                    worst = dev;
                    which = name;
                    wr = r;
                    wc = c;
                }
            }
    };
    scan(d.alpha1, re.alpha1, "alpha1");
    scan(d.alpha2, re.alpha2, "alpha2");
    scan(d.a, re.a, "a");
    scan(d.b, re.b, "b");
    if (worst > off_block_tol) {
        std::ostringstream os;
        os << "off-block entry in " << which << " at (" << wr << "," << wc << ") of magnitude "
           << worst;
        throw OffBlockViolation(os.str());
    }
    return s;
}

EquivarianceReport equivariance_check(const ADHMData& d, Complex c) {
    const MonopoleType& t = d.type;
    const auto& w = d.weight_of_column;
    EquivarianceReport rep;

    auto relative_dev = [](const Matrix& m, const Matrix& scaled) {
        const double base = m.cwiseAbs().maxCoeff();
        const double dev = (m - scaled).cwiseAbs().maxCoeff();
        return base > 0.0 ? dev / base : dev;
    };

    const long kappa = t.kappa();
    Matrix m1(kappa, kappa), m2(kappa, kappa);
    for (long r = 0; r < kappa; ++r)
        for (long col = 0; col < kappa; ++col) {
            const long e = (w[static_cast<std::size_t>(r)] - w[static_cast<std::size_t>(col)]) / 2;
            m1(r, col) = ipow(c, e) * d.alpha1(r, col);
            m2(r, col) = ipow(c, e + 1) * d.alpha2(r, col);
        }
    rep.deviation[0] = relative_dev(d.alpha1, m1);
    rep.deviation[1] = relative_dev(d.alpha2, m2);

    Matrix ma(t.n(), kappa);
    for (long r = 0; r < t.n(); ++r)
        for (long col = 0; col < kappa; ++col) {
            const long e = (t.mass2(static_cast<int>(r) + 1) - w[static_cast<std::size_t>(col)]) / 2;
            ma(r, col) = ipow(c, e) * d.a(r, col);
        }
    rep.deviation[2] = relative_dev(d.a, ma);

    Matrix mb(kappa, t.n());
    for (long r = 0; r < kappa; ++r)
        for (long col = 0; col < t.n(); ++col) {
            const long e = 1 + (w[static_cast<std::size_t>(r)] - t.mass2(static_cast<int>(col) + 1)) / 2;
            mb(r, col) = ipow(c, e) * d.b(r, col);
        }
    rep.deviation[3] = relative_dev(d.b, mb);
    return rep;
}

Matrix adhm_complex_residual(const ADHMData& d) {
    return d.alpha1 * d.alpha2 - d.alpha2 * d.alpha1 + d.b * d.a;
}

Matrix adhm_real_residual(const ADHMData& d) {
    return d.alpha1 * d.alpha1.adjoint() - d.alpha1.adjoint() * d.alpha1 +
           d.alpha2 * d.alpha2.adjoint() - d.alpha2.adjoint() * d.alpha2 +
           d.b * d.b.adjoint() - d.a.adjoint() * d.a;
}

MonadMaps monad_maps(const ADHMData& d, const ProjPoint& X) {
    double mag = 0.0;
    for (const auto& c : X) mag += std::norm(c);
    if (mag == 0.0) throw ZeroPoint("monad maps need a nonzero projective point");

    const auto& [x, y, z, w] = X;
    const long kappa = d.type.kappa();
    const long n = d.type.n();
    const Matrix id = Matrix::Identity(kappa, kappa);

    MonadMaps m;
    m.point = X;
    m.A.resize(2 * kappa + n, kappa);
    m.A.topRows(kappa) = x * id + z * d.alpha1 - w * d.alpha2.adjoint();
    m.A.middleRows(kappa, kappa) = y * id + z * d.alpha2 + w * d.alpha1.adjoint();
    m.A.bottomRows(n) = z * d.a + w * d.b.adjoint();
    m.B.resize(kappa, 2 * kappa + n);
    m.B.leftCols(kappa) = -y * id - z * d.alpha2 - w * d.alpha1.adjoint();
    m.B.middleCols(kappa, kappa) = x * id + z * d.alpha1 - w * d.alpha2.adjoint();
    m.B.rightCols(n) = z * d.b - w * d.a.adjoint();
    return m;
}

MonadCheck monad_check(const ADHMData& d, const ProjPoint& X) {
    const MonadMaps m = monad_maps(d, X);
    MonadCheck chk;
    Eigen::JacobiSVD<Matrix> sa(m.A);
    Eigen::JacobiSVD<Matrix> sb(m.B);
    chk.sigma_min_A = sa.singularValues().minCoeff();
    chk.sigma_min_B = sb.singularValues().minCoeff();
    chk.A_norm = m.A.norm();
    chk.B_norm = m.B.norm();
    chk.BA_norm = (m.B * m.A).norm();
    return chk;
}

Matrix fibre(const ADHMData& d, const ProjPoint& X) {
    const MonadMaps m = monad_maps(d, X);
    const long n = d.type.n();
    const Matrix kerB = kernel_basis(m.B);

    // orthonormal image of A
    Eigen::JacobiSVD<Matrix> sa(m.A, Eigen::ComputeThinU);
    const auto& sv = sa.singularValues();
    const double thresh = 1e-8 * (sv.size() > 0 ? sv(0) : 0.0);
    long rankA = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++rankA;
    const Matrix imA = sa.matrixU().leftCols(rankA);

    const Matrix overlap = imA.adjoint() * kerB;  // rankA x dim ker B
    const Matrix y = kernel_basis(overlap);
    Matrix basis = kerB * y;
    if (basis.cols() != n)
        throw DegenerateMonad("fibre dimension differs from N");
    // re-orthonormalize against round-off
    Eigen::HouseholderQR<Matrix> qr(basis);
    return qr.householderQ() * Matrix::Identity(basis.rows(), n);
}

SmallMonad weight_restrict(const NahmSolution& s, Complex x, Complex z, long w2) {
    validate_shapes(s);
    const MonopoleType& t = s.type;
    const long parity = ((t.lo2() % 2) + 2) % 2;
    if (w2 < t.lo2() || w2 > t.hi2() || ((w2 % 2) + 2) % 2 != parity)
        throw WeightOutOfRange("weight outside [p_1, p_N] or of wrong parity");

    const long chi_w = t.chi2(w2);
    const long chi_wm = t.chi2(w2 - 2);
    const int j = t.mass_index_at(w2);
    const long framing = (j >= 1 && j <= t.n()) ? 1 : 0;

    SmallMonad sm;
    sm.dim_H = chi_w;
    sm.dim_L = chi_wm;
    sm.dim_K = chi_w + chi_wm + framing;

    sm.A = Matrix::Zero(sm.dim_K, sm.dim_H);
    sm.B = Matrix::Zero(sm.dim_L, sm.dim_K);
    if (chi_w > 0)
        sm.A.topRows(chi_w) =
            x * Matrix::Identity(chi_w, chi_w) + z * s.beta.at(w2 + 1);
    if (chi_w > 0 && chi_wm > 0) {
        const Matrix& gam = s.gamma.at(w2);
        sm.A.middleRows(chi_w, chi_wm) = z * gam;
        sm.B.leftCols(chi_w) = -z * gam;
    }
    if (framing == 1 && j <= t.n() - 1 && chi_w > 0)
        sm.A.bottomRows(1) = z * s.avec.at(j);
    if (chi_wm > 0)
        sm.B.middleCols(chi_w, chi_wm) =
            x * Matrix::Identity(chi_wm, chi_wm) + z * s.beta.at(w2 - 1);
    if (framing == 1 && j >= 2 && chi_wm > 0)
        sm.B.rightCols(1) = z * s.bvec.at(j);
    return sm;
}

long small_monad_cohomology_dim(const SmallMonad& sm) {
    const long rank_B = rank_of(sm.B);
    const long rank_A = rank_of(sm.A);
    return (sm.dim_K - rank_B) - rank_A;
}

} // namespace nahm
