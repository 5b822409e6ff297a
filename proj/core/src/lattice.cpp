#include "nahm/lattice.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace nahm {

namespace {

void check_one(const Matrix& m, long rows, long cols, const char* what, long key) {
    if (m.rows() != rows || m.cols() != cols) {
        std::ostringstream os;
        os << what << " at site " << key << " has shape " << m.rows() << "x" << m.cols()
           << ", expected " << rows << "x" << cols;
        throw ShapeMismatch(os.str());
    }
}

Matrix gaussian(long rows, long cols, double scale, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) {
            const double re = dist(rng);
            const double im = dist(rng);
            m(r, c) = scale * Complex(re, im);
        }
    return m;
}

} // namespace

void validate_shapes(const NahmSolution& s) {
    const SiteLayout lay = site_dims(s.type);
    if (s.beta.size() != lay.beta.size() || s.gamma.size() != lay.gamma.size() ||
        s.avec.size() != lay.a.size() || s.bvec.size() != lay.b.size())
        throw ShapeMismatch("wrong number of lattice sites");
    for (const auto& [site, shape] : lay.beta)
        check_one(s.beta.at(site), shape.first, shape.second, "beta", site);
    for (const auto& [site, shape] : lay.gamma)
        check_one(s.gamma.at(site), shape.first, shape.second, "gamma", site);
    for (const auto& [j, shape] : lay.a)
        check_one(s.avec.at(j), shape.first, shape.second, "a", j);
    for (const auto& [j, shape] : lay.b)
        check_one(s.bvec.at(j), shape.first, shape.second, "b", j);
}

NahmSolution random_init(const MonopoleType& t, unsigned long seed, double scale) {
    std::mt19937_64 rng(seed);
    const SiteLayout lay = site_dims(t);
    NahmSolution s{t, {}, {}, {}, {}};
    for (const auto& [site, shape] : lay.beta)
        s.beta[site] = gaussian(shape.first, shape.second, scale, rng);
    for (const auto& [site, shape] : lay.gamma)
        s.gamma[site] = gaussian(shape.first, shape.second, scale, rng);
    for (const auto& [j, shape] : lay.a)
        s.avec[j] = gaussian(shape.first, shape.second, scale, rng);
    for (const auto& [j, shape] : lay.b)
        s.bvec[j] = gaussian(shape.first, shape.second, scale, rng);
    return s;
}

NahmSolution zero_solution(const MonopoleType& t) {
    return random_init(t, 0, 0.0);
}

std::map<long, Matrix> complex_residual(const NahmSolution& s) {
    validate_shapes(s);
    const MonopoleType& t = s.type;
    std::map<long, Matrix> res;
    // sites i+1 for p_1 <= i <= p_N - 2, doubled key 2i+2
    for (long w2 = t.lo2() + 2; w2 <= t.hi2() - 2; w2 += 2) {
        const Matrix& gam = s.gamma.at(w2);
        const Matrix& bl = s.beta.at(w2 - 1);
        const Matrix& br = s.beta.at(w2 + 1);
        Matrix r = bl * gam - gam * br;
        const int j = t.mass_index_at(w2);
        if (j >= 2 && j <= t.n() - 1)
            r += s.bvec.at(j) * s.avec.at(j);
        res[w2] = std::move(r);
    }
    return res;
}

std::map<long, Matrix> real_residual(const NahmSolution& s) {
    validate_shapes(s);
    const MonopoleType& t = s.type;
    std::map<long, Matrix> res;
    for (long w2 = t.lo2(); w2 <= t.hi2() - 2; w2 += 2) {
        const Matrix& b = s.beta.at(w2 + 1);
        Matrix r = b * b.adjoint() - b.adjoint() * b;
        if (w2 + 2 <= t.hi2() - 2) {
            const Matrix& gnext = s.gamma.at(w2 + 2);
            r += gnext * gnext.adjoint();
        }
        if (w2 >= t.lo2() + 2) {
            const Matrix& g = s.gamma.at(w2);
            r -= g.adjoint() * g;
        }
        const int j = t.mass_index_at(w2);
        if (j >= 1 && j <= t.n() - 1)
            r -= s.avec.at(j).adjoint() * s.avec.at(j);
        const int jn = t.mass_index_at(w2 + 2);
        if (jn >= 2)
            r += s.bvec.at(jn) * s.bvec.at(jn).adjoint();
        res[w2] = std::move(r);
    }
    return res;
}

double total_residual(const NahmSolution& s) {
    double sum = 0.0;
    for (const auto& [site, r] : complex_residual(s)) sum += r.squaredNorm();
    for (const auto& [site, r] : real_residual(s)) sum += r.squaredNorm();
    return sum;
}

GaugeTransform identity_gauge(const MonopoleType& t) {
    GaugeTransform g;
    for (const auto& [site, shape] : site_dims(t).beta)
        g.g[site] = Matrix::Identity(shape.first, shape.first);
    for (int j = 1; j <= t.n(); ++j) g.lambda[j] = Complex(1.0, 0.0);
    return g;
}

namespace {

GaugeTransform random_gauge(const MonopoleType& t, unsigned long seed, bool unitary) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    GaugeTransform g;
    for (const auto& [site, shape] : site_dims(t).beta) {
        Matrix m = gaussian(shape.first, shape.first, 1.0, rng);
        if (unitary) {
            Eigen::HouseholderQR<Matrix> qr(m);
            Matrix q = qr.householderQ() * Matrix::Identity(shape.first, shape.first);
            g.g[site] = q;
        } else {
            // shift away from singular
            g.g[site] = m + 3.0 * Matrix::Identity(shape.first, shape.first);
        }
    }
    for (int j = 1; j <= t.n(); ++j) {
        const double th = angle(rng);
        Complex lam(std::cos(th), std::sin(th));
        if (!unitary) lam *= 1.0 + 0.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        g.lambda[j] = lam;
    }
    return g;
}

} // namespace

GaugeTransform random_unitary_gauge(const MonopoleType& t, unsigned long seed) {
    return random_gauge(t, seed, true);
}

GaugeTransform random_invertible_gauge(const MonopoleType& t, unsigned long seed) {
    return random_gauge(t, seed, false);
}

GaugeTransform compose(const GaugeTransform& h, const GaugeTransform& g) {
    GaugeTransform out;
    for (const auto& [site, hm] : h.g) out.g[site] = hm * g.g.at(site);
    for (const auto& [j, hl] : h.lambda) out.lambda[j] = hl * g.lambda.at(j);
    return out;
}

NahmSolution gauge_transform(const NahmSolution& s, const GaugeTransform& g) {
    validate_shapes(s);
    const MonopoleType& t = s.type;
    for (const auto& [site, m] : g.g) {
        Eigen::JacobiSVD<Matrix> svd(m);
        const double smin = svd.singularValues().minCoeff();
        if (!(smin > 1e-14))
            throw SingularGauge("gauge matrix numerically singular");
    }
    for (const auto& [j, lam] : g.lambda)
        if (std::abs(lam) < 1e-300)
            throw SingularGauge("zero framing factor");

    NahmSolution out{t, {}, {}, {}, {}};
    for (const auto& [site, b] : s.beta) {
        const Matrix& gs = g.g.at(site);
        out.beta[site] = gs * b * gs.inverse();
    }
    for (const auto& [site, gam] : s.gamma) {
        const Matrix& gl = g.g.at(site - 1);
        const Matrix& gr = g.g.at(site + 1);
        out.gamma[site] = gl * gam * gr.inverse();
    }
    for (const auto& [j, a] : s.avec) {
        const Matrix& gr = g.g.at(t.mass2(j) + 1);
        out.avec[j] = g.lambda.at(j) * a * gr.inverse();
    }
    for (const auto& [j, b] : s.bvec) {
        const Matrix& gl = g.g.at(t.mass2(j) - 1);
        out.bvec[j] = gl * b / g.lambda.at(j);
    }
    return out;
}

GaugeInvariants gauge_invariants(const NahmSolution& s) {
    validate_shapes(s);
    GaugeInvariants inv;
    for (const auto& [site, gam] : s.gamma) {
        Eigen::JacobiSVD<Matrix> svd(gam);
        inv.gamma_singular_values[site] = svd.singularValues();
    }
    for (const auto& [site, b] : s.beta) {
        Eigen::ComplexEigenSolver<Matrix> es(b);
        std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(ev.begin(), ev.end(), [](Complex u, Complex v) {
            if (u.real() != v.real()) return u.real() < v.real();
            return u.imag() < v.imag();
        });
        inv.beta_eigenvalues[site] = std::move(ev);
    }
    for (const auto& [j, a] : s.avec) inv.a_norms[j] = a.norm();
    for (const auto& [j, b] : s.bvec) inv.b_norms[j] = b.norm();
    return inv;
}

double invariant_distance(const GaugeInvariants& u, const GaugeInvariants& v) {
    double d = 0.0;
    for (const auto& [site, sv] : u.gamma_singular_values)
        d = std::max(d, (sv - v.gamma_singular_values.at(site)).cwiseAbs().maxCoeff());
    for (const auto& [site, ev] : u.beta_eigenvalues) {
        const auto& ew = v.beta_eigenvalues.at(site);
        for (std::size_t i = 0; i < ev.size(); ++i)
            d = std::max(d, std::abs(ev[i] - ew[i]));
    }
    for (const auto& [j, n] : u.a_norms) d = std::max(d, std::abs(n - v.a_norms.at(j)));
    for (const auto& [j, n] : u.b_norms) d = std::max(d, std::abs(n - v.b_norms.at(j)));
    return d;
}

} // namespace nahm
