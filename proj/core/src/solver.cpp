#include "nahm/solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace nahm {

namespace {

// Field identifiers for the flattened parameter vector.
enum class Field : char { Beta = 'b', Gamma = 'g', A = 'a', B = 'v' };

struct Slot {
    long offset = 0;  // first real parameter index
    long rows = 0;
    long cols = 0;
};

using SlotKey = std::pair<Field, long>;

// Flattens a NahmSolution into real parameters (Re, Im interleaved per
// entry, row-major) and assembles the residual vector and its analytic
// Jacobian.  Every residual term is a product of two fields, so the
// Jacobian rows are exact bilinear derivatives.
class Problem {
public:
    explicit Problem(const MonopoleType& t) : type_(t), layout_(site_dims(t)) {
        long off = 0;
        auto add = [&](Field f, long key, std::pair<long, long> shape) {
            slots_[{f, key}] = Slot{off, shape.first, shape.second};
            off += 2 * shape.first * shape.second;
        };
        for (const auto& [site, shape] : layout_.beta) add(Field::Beta, site, shape);
        for (const auto& [site, shape] : layout_.gamma) add(Field::Gamma, site, shape);
        for (const auto& [j, shape] : layout_.a) add(Field::A, j, shape);
        for (const auto& [j, shape] : layout_.b) add(Field::B, j, shape);
        num_params_ = off;

        long rows = 0;
        for (long w2 = t.lo2() + 2; w2 <= t.hi2() - 2; w2 += 2) {
            complex_rows_[w2] = rows;
            rows += 2 * t.chi2(w2 - 2) * t.chi2(w2);
        }
        for (long w2 = t.lo2(); w2 <= t.hi2() - 2; w2 += 2) {
            real_rows_[w2] = rows;
            rows += 2 * t.chi2(w2) * t.chi2(w2);
        }
        num_residuals_ = rows;
    }

    long num_params() const { return num_params_; }
    long num_residuals() const { return num_residuals_; }

    Eigen::VectorXd pack(const NahmSolution& s) const {
        Eigen::VectorXd v(num_params_);
        auto put = [&](Field f, long key, const Matrix& m) {
            const Slot& sl = slots_.at({f, key});
            for (long r = 0; r < sl.rows; ++r)
                for (long c = 0; c < sl.cols; ++c) {
                    v(sl.offset + 2 * (r * sl.cols + c)) = m(r, c).real();
                    v(sl.offset + 2 * (r * sl.cols + c) + 1) = m(r, c).imag();
                }
        };
        for (const auto& [site, m] : s.beta) put(Field::Beta, site, m);
        for (const auto& [site, m] : s.gamma) put(Field::Gamma, site, m);
        for (const auto& [j, m] : s.avec) put(Field::A, j, m);
        for (const auto& [j, m] : s.bvec) put(Field::B, j, m);
        return v;
    }

    NahmSolution unpack(const Eigen::VectorXd& v) const {
        NahmSolution s{type_, {}, {}, {}, {}};
        auto get = [&](Field f, long key) {
            const Slot& sl = slots_.at({f, key});
            Matrix m(sl.rows, sl.cols);
            for (long r = 0; r < sl.rows; ++r)
                for (long c = 0; c < sl.cols; ++c)
                    m(r, c) = Complex(v(sl.offset + 2 * (r * sl.cols + c)),
                                      v(sl.offset + 2 * (r * sl.cols + c) + 1));
            return m;
        };
        for (const auto& [site, shape] : layout_.beta) s.beta[site] = get(Field::Beta, site);
        for (const auto& [site, shape] : layout_.gamma) s.gamma[site] = get(Field::Gamma, site);
        for (const auto& [j, shape] : layout_.a) s.avec[j] = get(Field::A, j);
        for (const auto& [j, shape] : layout_.b) s.bvec[j] = get(Field::B, j);
        return s;
    }

    Eigen::VectorXd residual(const NahmSolution& s) const {
        Eigen::VectorXd r(num_residuals_);
        for (const auto& [w2, m] : complex_residual(s)) write_block(r, complex_rows_.at(w2), m);
        for (const auto& [w2, m] : real_residual(s)) write_block(r, real_rows_.at(w2), m);
        return r;
    }

    Eigen::MatrixXd jacobian(const NahmSolution& s) const {
        const MonopoleType& t = type_;
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(num_residuals_, num_params_);

        for (long w2 = t.lo2() + 2; w2 <= t.hi2() - 2; w2 += 2) {
            const long row = complex_rows_.at(w2);
            // beta_{w-1/2} gamma_w - gamma_w beta_{w+1/2} (+ b_j a_j)
            add_product(J, row, s.beta.at(w2 - 1), {Field::Beta, w2 - 1}, false,
                        s.gamma.at(w2), {Field::Gamma, w2}, false, Complex(1, 0));
            add_product(J, row, s.gamma.at(w2), {Field::Gamma, w2}, false,
                        s.beta.at(w2 + 1), {Field::Beta, w2 + 1}, false, Complex(-1, 0));
            const int j = t.mass_index_at(w2);
            if (j >= 2 && j <= t.n() - 1)
                add_product(J, row, s.bvec.at(j), {Field::B, j}, false,
                            s.avec.at(j), {Field::A, j}, false, Complex(1, 0));
        }

        for (long w2 = t.lo2(); w2 <= t.hi2() - 2; w2 += 2) {
            const long row = real_rows_.at(w2);
            const Matrix& b = s.beta.at(w2 + 1);
            add_product(J, row, b, {Field::Beta, w2 + 1}, false, b.adjoint(),
                        {Field::Beta, w2 + 1}, true, Complex(1, 0));
            add_product(J, row, b.adjoint(), {Field::Beta, w2 + 1}, true, b,
                        {Field::Beta, w2 + 1}, false, Complex(-1, 0));
            if (w2 + 2 <= t.hi2() - 2) {
                const Matrix& gn = s.gamma.at(w2 + 2);
                add_product(J, row, gn, {Field::Gamma, w2 + 2}, false, gn.adjoint(),
                            {Field::Gamma, w2 + 2}, true, Complex(1, 0));
            }
            if (w2 >= t.lo2() + 2) {
                const Matrix& g = s.gamma.at(w2);
                add_product(J, row, g.adjoint(), {Field::Gamma, w2}, true, g,
                            {Field::Gamma, w2}, false, Complex(-1, 0));
            }
            const int j = t.mass_index_at(w2);
            if (j >= 1 && j <= t.n() - 1) {
                const Matrix& a = s.avec.at(j);
                add_product(J, row, a.adjoint(), {Field::A, j}, true, a, {Field::A, j}, false,
                            Complex(-1, 0));
            }
            const int jn = t.mass_index_at(w2 + 2);
            if (jn >= 2) {
                const Matrix& bv = s.bvec.at(jn);
                add_product(J, row, bv, {Field::B, jn}, false, bv.adjoint(), {Field::B, jn},
                            true, Complex(1, 0));
            }
        }
        return J;
    }

private:
    static void write_block(Eigen::VectorXd& r, long row, const Matrix& m) {
        for (long i = 0; i < m.rows(); ++i)
            for (long j = 0; j < m.cols(); ++j) {
                r(row + 2 * (i * m.cols() + j)) = m(i, j).real();
                r(row + 2 * (i * m.cols() + j) + 1) = m(i, j).imag();
            }
    }

    // d/dz and d/d(conj z) contributions of a complex-linear coefficient.
    static void add_linear(Eigen::MatrixXd& J, long re_row, long param, Complex coeff,
                           bool conjugated) {
        J(re_row, param) += coeff.real();
        J(re_row + 1, param) += coeff.imag();
        if (!conjugated) {
            J(re_row, param + 1) += -coeff.imag();
            J(re_row + 1, param + 1) += coeff.real();
        } else {
            J(re_row, param + 1) += coeff.imag();
            J(re_row + 1, param + 1) += -coeff.real();
        }
    }

    // Derivatives of sign * X * Y where X, Y are views of the unknown
    // matrices (daggered views differentiate through the conjugate).
    void add_product(Eigen::MatrixXd& J, long row, const Matrix& X, SlotKey xkey, bool xdag,
                     const Matrix& Y, SlotKey ykey, bool ydag, Complex sign) const {
        const Slot& sx = slots_.at(xkey);
        const Slot& sy = slots_.at(ykey);
        const long m = X.rows(), q = X.cols(), p = Y.cols();
        for (long i = 0; i < m; ++i)
            for (long tt = 0; tt < q; ++tt)
                for (long j = 0; j < p; ++j) {
                    const long re_row = row + 2 * (i * p + j);
                    // X factor
                    const Complex cx = sign * Y(tt, j);
                    const long px = xdag ? sx.offset + 2 * (tt * sx.cols + i)
                                         : sx.offset + 2 * (i * sx.cols + tt);
                    add_linear(J, re_row, px, cx, xdag);
                    // Y factor
                    const Complex cy = sign * X(i, tt);
                    const long py = ydag ? sy.offset + 2 * (j * sy.cols + tt)
                                         : sy.offset + 2 * (tt * sy.cols + j);
                    add_linear(J, re_row, py, cy, ydag);
                }
    }

    MonopoleType type_;
    SiteLayout layout_;
    std::map<SlotKey, Slot> slots_;
    std::map<long, long> complex_rows_;
    std::map<long, long> real_rows_;
    long num_params_ = 0;
    long num_residuals_ = 0;
};

struct MinimizeResult {
    NahmSolution solution;
    double objective = 0.0;
    long iterations = 0;
};

MinimizeResult minimize(const Problem& prob, const NahmSolution& start, const SolverOptions& opts,
                        long max_iterations) {
    Eigen::VectorXd theta = prob.pack(start);
    NahmSolution cur = prob.unpack(theta);
    Eigen::VectorXd r = prob.residual(cur);
    double F = r.squaredNorm();
    double mu = opts.damping;
    long it = 0;
    for (; it < max_iterations && F > opts.tolerance; ++it) {
        const Eigen::MatrixXd J = prob.jacobian(cur);
        const Eigen::VectorXd grad = J.transpose() * r;
        if (grad.norm() < 1e-16) break;
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::MatrixXd M = JtJ;
            M.diagonal().array() += mu;
            const Eigen::VectorXd delta = M.ldlt().solve(-grad);
            const Eigen::VectorXd trial = theta + delta;
            const NahmSolution tsol = prob.unpack(trial);
            const Eigen::VectorXd tr = prob.residual(tsol);
            const double Ft = tr.squaredNorm();
            if (Ft < F) {
                theta = trial;
                cur = tsol;
                r = tr;
                F = Ft;
                mu = std::max(mu / 3.0, 1e-14);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if (!accepted) break;
    }
    return {cur, F, it};
}

} // namespace

NahmSolution canonicalize(const NahmSolution& s) {
    validate_shapes(s);
    const MonopoleType& t = s.type;
    Complex trace(0, 0);
    for (const auto& [site, b] : s.beta) trace += b.trace();
    const Complex shift = -trace / static_cast<double>(t.kappa());

    double asq = 0.0;
    for (const auto& [j, a] : s.avec) asq += a.squaredNorm();
    const double target = static_cast<double>(t.n() - 1);
    const double scale = asq > 0.0 ? std::sqrt(target / asq) : 1.0;

    NahmSolution out = s;
    for (auto& [site, b] : out.beta) {
        b.diagonal().array() += shift;
        b *= scale;
    }
    for (auto& [site, g] : out.gamma) g *= scale;
    for (auto& [j, a] : out.avec) a *= scale;
    for (auto& [j, b] : out.bvec) b *= scale;
    return out;
}

std::pair<NahmSolution, SolveReport> solve(const MonopoleType& t, const SolverOptions& opts) {
    const Problem prob(t);
    NahmSolution best = zero_solution(t);
    SolveReport best_rep;
    best_rep.final_residual = std::numeric_limits<double>::infinity();

    const int restarts = std::max(opts.restarts, 1);
    for (int attempt = 0; attempt < restarts; ++attempt) {
        const NahmSolution init = random_init(t, opts.seed + static_cast<unsigned long>(attempt),
                                             opts.init_scale);
        MinimizeResult res = minimize(prob, init, opts, opts.max_iterations);
        if (res.objective <= opts.tolerance) {
            // pin the translation/scale freedom, then polish
            NahmSolution canon = canonicalize(res.solution);
            MinimizeResult polish = minimize(prob, canon, opts, 25);
            const StabilityReport stab = check_stability(polish.solution);
            SolveReport rep;
            rep.final_residual = polish.objective;
            rep.iterations = res.iterations + polish.iterations;
            rep.restart_index = attempt;
            rep.stability = stab;
            rep.converged = polish.objective <= opts.tolerance && stab.ok;
            if (rep.converged) return {polish.solution, rep};
            if (polish.objective < best_rep.final_residual) {
                best = polish.solution;
                best_rep = rep;
            }
        } else if (res.objective < best_rep.final_residual) {
            best = res.solution;
            best_rep.converged = false;
            best_rep.final_residual = res.objective;
            best_rep.iterations = res.iterations;
            best_rep.restart_index = attempt;
        }
    }
    best_rep.converged = false;
    return {best, best_rep};
}

std::pair<NahmSolution, SolveReport> refine(const NahmSolution& s, const SolverOptions& opts) {
    validate_shapes(s);
    const Problem prob(s.type);
    MinimizeResult res = minimize(prob, s, opts, opts.max_iterations);
    SolveReport rep;
    rep.iterations = res.iterations;
    rep.restart_index = 0;
    NahmSolution out = res.solution;
    if (res.objective <= opts.tolerance) {
        NahmSolution canon = canonicalize(out);
        MinimizeResult polish = minimize(prob, canon, opts, 25);
        out = polish.solution;
        rep.iterations += polish.iterations;
        rep.final_residual = polish.objective;
        rep.stability = check_stability(out);
        rep.converged = polish.objective <= opts.tolerance && rep.stability.ok;
    } else {
        rep.final_residual = res.objective;
        rep.stability = check_stability(out);
        rep.converged = false;
    }
    return {out, rep};
}

NahmSolution su2_k1_oracle(double p) {
    const double doubled = 2.0 * p;
    if (std::abs(doubled - std::round(doubled)) > 1e-9 || doubled < 1.0)
        throw UnsupportedType("oracle needs a half-integer or integer p >= 1/2");
    const long p2 = static_cast<long>(std::round(doubled));
    const MonopoleType t({-p2}, {1});

    NahmSolution s = zero_solution(t);
    for (auto& [site, g] : s.gamma) g(0, 0) = Complex(1, 0);
    s.avec.at(1)(0, 0) = Complex(1, 0);
    s.bvec.at(2)(0, 0) = Complex(1, 0);
    return s;
}

} // namespace nahm
