#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "nahm/adhm.hpp"
#include "nahm/solver.hpp"

using namespace nahm;

namespace {

const MonopoleType su3{{-6, -2}, {1, 1}};
const MonopoleType su3k{{-6, -2}, {2, 1}};
const MonopoleType su4{{-3, -1, 1}, {1, 2, 1}};  // half-integer masses

ProjPoint random_point(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ProjPoint x;
    for (auto& c : x) c = Complex(g(rng), g(rng));
    return x;
}

// Extracts the block of m whose rows carry doubled weight rw and whose
// columns carry doubled weight cw, using the assembled column order.
Matrix block_of(const Matrix& m, const std::vector<long>& w, long rw, long cw) {
    std::vector<long> rows, cols;
    for (long i = 0; i < static_cast<long>(w.size()); ++i) {
        if (w[static_cast<std::size_t>(i)] == rw) rows.push_back(i);
        if (w[static_cast<std::size_t>(i)] == cw) cols.push_back(i);
    }
    Matrix out(static_cast<long>(rows.size()), static_cast<long>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            out(static_cast<long>(r), static_cast<long>(c)) = m(rows[r], cols[c]);
    return out;
}

} // namespace

TEST_CASE("assemble round-trips through disassemble") {
    for (const MonopoleType& t : {su3, su3k, su4}) {
        const NahmSolution s = random_init(t, 9, 1.0);
        const NahmSolution back = disassemble(assemble(s));
        for (const auto& [site, m] : s.beta) CHECK((m - back.beta.at(site)).norm() == 0.0);
        for (const auto& [site, m] : s.gamma) CHECK((m - back.gamma.at(site)).norm() == 0.0);
        for (const auto& [j, m] : s.avec) CHECK((m - back.avec.at(j)).norm() == 0.0);
        for (const auto& [j, m] : s.bvec) CHECK((m - back.bvec.at(j)).norm() == 0.0);
    }
}

TEST_CASE("disassemble rejects off-pattern entries") {
    ADHMData d = assemble(random_init(su3, 2, 1.0));
    d.alpha1(0, d.alpha1.cols() - 1) = Complex(1e-6, 0);  // weight-violating corner
    CHECK_THROWS_AS(disassemble(d), OffBlockViolation);
}

TEST_CASE("ADHM residuals agree with lattice residuals block by block") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> pick(0, 2);
    const MonopoleType types[] = {su3, su3k, su4};
    for (int trial = 0; trial < 100; ++trial) {
        const MonopoleType& t = types[pick(rng)];
        const NahmSolution s = random_init(t, 1000 + static_cast<unsigned long>(trial), 1.0);
        const ADHMData d = assemble(s);
        Matrix cres = adhm_complex_residual(d);
        Matrix rres = adhm_real_residual(d);

        for (const auto& [w2, m] : complex_residual(s)) {
            const Matrix blk = block_of(cres, d.weight_of_column, w2 - 2, w2);
            CHECK((blk - m).cwiseAbs().maxCoeff() < 1e-13);
        }
        for (const auto& [w2, m] : real_residual(s)) {
            const Matrix blk = block_of(rres, d.weight_of_column, w2, w2);
            CHECK((blk - m).cwiseAbs().maxCoeff() < 1e-13);
        }

        // zero the on-pattern blocks; everything left must vanish exactly
        const auto& w = d.weight_of_column;
        const long kappa = t.kappa();
        for (long r = 0; r < kappa; ++r)
            for (long c = 0; c < kappa; ++c) {
                if (w[static_cast<std::size_t>(c)] - w[static_cast<std::size_t>(r)] == 2)
                    cres(r, c) = Complex(0, 0);
                if (w[static_cast<std::size_t>(c)] == w[static_cast<std::size_t>(r)])
                    rres(r, c) = Complex(0, 0);
            }
        CHECK(cres.cwiseAbs().maxCoeff() == 0.0);
        CHECK(rres.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("assembled data is exactly equivariant") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (const MonopoleType& t : {su3, su3k, su4}) {
        const ADHMData d = assemble(random_init(t, 77, 1.0));
        for (int trial = 0; trial < 20; ++trial) {
            const Complex c(g(rng), g(rng));
            CHECK(equivariance_check(d, c).pass(1e-12));
        }
    }
}

TEST_CASE("equivariance fails once the block pattern is broken") {
    ADHMData d = assemble(random_init(su3, 12, 1.0));
    d.alpha2(0, d.alpha2.cols() - 1) += Complex(0.5, 0);
    CHECK_FALSE(equivariance_check(d, Complex(1.3, 0.4)).pass(1e-10));
}

TEST_CASE("monad exactness holds exactly when the equations are solved") {
    std::mt19937_64 rng(404);
    const NahmSolution solved = su2_k1_oracle(1.5);
    REQUIRE(total_residual(solved) < 1e-20);
    const ADHMData ds = assemble(solved);
    for (int trial = 0; trial < 100; ++trial) {
        const ProjPoint x = random_point(rng);
        const MonadCheck chk = monad_check(ds, x);
        CHECK(chk.BA_norm / (chk.A_norm * chk.B_norm) < 1e-10);
    }

    const NahmSolution unsolved = random_init(su3, 6, 1.0);
    REQUIRE(total_residual(unsolved) > 1e-4);
    const ADHMData du = assemble(unsolved);
    bool violated = false;
    for (int trial = 0; trial < 100 && !violated; ++trial) {
        const MonadCheck chk = monad_check(du, random_point(rng));
        violated = chk.BA_norm / (chk.A_norm * chk.B_norm) > 1e-10;
    }
    CHECK(violated);
}

TEST_CASE("fibre has dimension N at generic points of a solved monad") {
    std::mt19937_64 rng(2718);
    const NahmSolution solved = su2_k1_oracle(2.5);
    const ADHMData d = assemble(solved);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix f = fibre(d, random_point(rng));
        CHECK(f.cols() == 2);
        CHECK((f.adjoint() * f - Matrix::Identity(2, 2)).norm() < 1e-10);
    }
    CHECK_THROWS_AS(monad_maps(d, ProjPoint{}), ZeroPoint);
}

TEST_CASE("weight restriction has the documented dimensions") {
    const NahmSolution s = random_init(su3k, 3, 1.0);
    const MonopoleType& t = s.type;
    for (long w2 = t.lo2(); w2 <= t.hi2(); w2 += 2) {
        const SmallMonad sm = weight_restrict(s, Complex(0.4, 0.2), Complex(-1, 0), w2);
        const long framing = t.mass_index_at(w2) != 0 ? 1 : 0;
        CHECK(sm.dim_H == t.chi2(w2));
        CHECK(sm.dim_L == t.chi2(w2 - 2));
        CHECK(sm.dim_K == sm.dim_H + sm.dim_L + framing);
        CHECK(sm.A.rows() == sm.dim_K);
        CHECK(sm.A.cols() == sm.dim_H);
        CHECK(sm.B.rows() == sm.dim_L);
        CHECK(sm.B.cols() == sm.dim_K);
    }
    CHECK_THROWS_AS(weight_restrict(s, Complex(1, 0), Complex(-1, 0), t.lo2() + 1),
                    WeightOutOfRange);
    CHECK_THROWS_AS(weight_restrict(s, Complex(1, 0), Complex(-1, 0), t.hi2() + 2),
                    WeightOutOfRange);
}

TEST_CASE("B A of the weight restriction is z^2 times the complex residual") {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> g(0.0, 1.0);
    for (const MonopoleType& t : {su3, su3k, su4}) {
        const NahmSolution s = random_init(t, 21, 1.0);
        const auto cres = complex_residual(s);
        for (int trial = 0; trial < 5; ++trial) {
            const Complex x(g(rng), g(rng)), z(g(rng), g(rng));
            for (long w2 = t.lo2() + 2; w2 <= t.hi2() - 2; w2 += 2) {
                const SmallMonad sm = weight_restrict(s, x, z, w2);
                const Matrix ba = sm.B * sm.A;
                // gamma contributes -z(x+z beta) + (x+z beta)z gamma = z^2 [...]
                CHECK((ba - z * z * cres.at(w2)).norm() < 1e-12 * (1.0 + ba.norm()));
            }
        }
    }
}

TEST_CASE("small-monad cohomology is 1 at masses and 0 elsewhere for a solved chain") {
    std::mt19937_64 rng(808);
    std::normal_distribution<double> g(0.0, 1.0);
    const NahmSolution s = su2_k1_oracle(2.5);  // masses at +-5/2
    const MonopoleType& t = s.type;
    for (int trial = 0; trial < 20; ++trial) {
        const Complex x(g(rng), g(rng));
        for (long w2 = t.lo2(); w2 <= t.hi2(); w2 += 2) {
            const SmallMonad sm = weight_restrict(s, x, Complex(-1, 0), w2);
            const long expected = t.mass_index_at(w2) != 0 ? 1 : 0;
            CHECK(small_monad_cohomology_dim(sm) == expected);
        }
    }
}
