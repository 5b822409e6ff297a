#pragma once

#include <map>
#include <utility>
#include <vector>

#include "nahm/errors.hpp"

namespace nahm {

/// Monopole type data: mass numbers p_1 < ... < p_{N-1} and positive charge
/// numbers k_1, ..., k_{N-1}.  Masses are stored doubled (2*p_i) so that the
/// half-integer case (allowed only for even N) stays exact.  The derived
/// quantities p_N = -(p_1+...+p_{N-1}), k_N = -(k_1+...+k_{N-1}), the
/// instanton charge kappa and the equivariant second Chern class c_2 are
/// computed and validated at construction; instances are immutable.
class MonopoleType {
public:
    /// Build from doubled masses (2*p_i) and charges; throws on invalid data.
    MonopoleType(std::vector<long> doubled_masses, std::vector<long> charges);

    int n() const { return n_; }
    int intervals() const { return n_ - 1; }

    /// Doubled mass 2*p_j, j = 1..N (j = N is the derived one).
    long mass2(int j) const { return masses2_.at(static_cast<std::size_t>(j - 1)); }
    /// Charge k_j, j = 1..N (k_N is the derived negative one).
    long charge(int j) const { return charges_.at(static_cast<std::size_t>(j - 1)); }
    /// Cumulative charge k_1 + ... + k_j, j = 0..N-1.
    long cumulative_charge(int j) const;

    long kappa() const { return kappa_; }
    long c2() const { return c2_; }

    /// Lowest / highest doubled weights: 2*p_1 and 2*p_N.
    long lo2() const { return masses2_.front(); }
    long hi2() const { return masses2_.back(); }

    /// chi at doubled weight w2 (valid for 2*p_1 <= w2 <= 2*p_N - 2);
    /// returns 0 outside that range.
    long chi2(long w2) const;

    /// True when w2 equals 2*p_j for some j = 1..N; returns j, else 0.
    int mass_index_at(long w2) const;

    bool operator==(const MonopoleType& o) const {
        return masses2_ == o.masses2_ && charges_ == o.charges_;
    }

private:
    int n_ = 0;
    std::vector<long> masses2_;  // size N, doubled, last derived
    std::vector<long> charges_;  // size N, last derived
    long kappa_ = 0;
    long c2_ = 0;
};

/// Validates and converts plain masses (integers or exact half-integers) and
/// charges into a MonopoleType.
MonopoleType derive_type(const std::vector<double>& masses, const std::vector<long>& charges);

/// The chi-profile over the doubled weights 2*p_1, 2*p_1+2, ..., 2*p_N-2.
struct WeightProfile {
    long lo2 = 0;  // 2*p_1
    long hi2 = 0;  // 2*p_N
    std::vector<long> chi;  // chi at weights lo2, lo2+2, ..., hi2-2

    long at(long w2) const;
    long sum() const;
};

WeightProfile weight_profile(const MonopoleType& t);

/// Shapes of every lattice field, keyed by doubled site index.
struct SiteLayout {
    // beta_{i+1/2} at doubled index 2i+1: chi_i x chi_i
    std::map<long, std::pair<long, long>> beta;
    // gamma_i at doubled index 2i: chi_{i-1} x chi_i
    std::map<long, std::pair<long, long>> gamma;
    // a_{p_j}, j = 1..N-1: 1 x chi_{p_j}
    std::map<int, std::pair<long, long>> a;
    // b_{p_j}, j = 2..N: chi_{p_j - 1} x 1
    std::map<int, std::pair<long, long>> b;
};

SiteLayout site_dims(const MonopoleType& t);

} // namespace nahm
