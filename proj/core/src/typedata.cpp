#include "nahm/typedata.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace nahm {

MonopoleType::MonopoleType(std::vector<long> doubled_masses, std::vector<long> charges) {
    if (doubled_masses.empty() || doubled_masses.size() != charges.size())
        throw NonIncreasingMasses("need N-1 >= 1 masses and matching charges");
    n_ = static_cast<int>(doubled_masses.size()) + 1;

    for (std::size_t i = 0; i + 1 < doubled_masses.size(); ++i)
        if (doubled_masses[i] >= doubled_masses[i + 1])
            throw NonIncreasingMasses("masses must be strictly increasing");

    const long parity = ((doubled_masses[0] % 2) + 2) % 2;
    for (long m2 : doubled_masses)
        if (((m2 % 2) + 2) % 2 != parity)
            throw ParityViolation("all masses must share the same parity");
    if (parity == 1 && n_ % 2 != 0)
        throw ParityViolation("half-integer masses require even N");

    for (long k : charges)
        if (k <= 0)
            throw NonPositiveCharge("charges must be positive");

    const long sum2 = std::accumulate(doubled_masses.begin(), doubled_masses.end(), 0L);
    const long pN2 = -sum2;
    if (pN2 <= doubled_masses.back())
        throw EmptyInterval("derived p_N must exceed p_{N-1}");

    masses2_ = std::move(doubled_masses);
    masses2_.push_back(pN2);
    charges_ = std::move(charges);
    charges_.push_back(-std::accumulate(charges_.begin(), charges_.end(), 0L));

    // kappa = sum_i (p_{i+1} - p_i) * (k_1 + ... + k_i); doubled differences
    // are even, so the halves are exact.
    long kap = 0;
    long cum = 0;
    for (int i = 0; i < n_ - 1; ++i) {
        cum += charges_[static_cast<std::size_t>(i)];
        kap += (masses2_[static_cast<std::size_t>(i + 1)] - masses2_[static_cast<std::size_t>(i)]) / 2 * cum;
    }
    kappa_ = kap;

    // c2 = -[ 2 sum_i k_i p_i + sum_{i<j<=N-1} (k_i p_j + k_j p_i) ],
    // evaluated as 2*c2 in doubled-mass units and halved exactly.
    long twice = 0;
    for (int i = 0; i < n_ - 1; ++i)
        twice += 2 * charges_[static_cast<std::size_t>(i)] * masses2_[static_cast<std::size_t>(i)];
    for (int i = 0; i < n_ - 2; ++i)
        for (int j = i + 1; j < n_ - 1; ++j)
            twice += charges_[static_cast<std::size_t>(i)] * masses2_[static_cast<std::size_t>(j)] +
                     charges_[static_cast<std::size_t>(j)] * masses2_[static_cast<std::size_t>(i)];
    twice = -twice;
    if (twice % 2 != 0)
        throw NonPositiveKappa("c2 failed to be an integer");
    c2_ = twice / 2;

    if (kappa_ <= 0)
        throw NonPositiveKappa("kappa must be positive");
}

long MonopoleType::cumulative_charge(int j) const {
    long c = 0;
    for (int i = 1; i <= j; ++i) c += charge(i);
    return c;
}

long MonopoleType::chi2(long w2) const {
    if (w2 < lo2() || w2 > hi2() - 2) return 0;
    // chi = k_1 + ... + k_m where p_m <= w < p_{m+1}
    int m = 0;
    for (int j = 1; j <= n_ - 1; ++j)
        if (mass2(j) <= w2) m = j;
    return cumulative_charge(m);
}

int MonopoleType::mass_index_at(long w2) const {
    for (int j = 1; j <= n_; ++j)
        if (mass2(j) == w2) return j;
    return 0;
}

MonopoleType derive_type(const std::vector<double>& masses, const std::vector<long>& charges) {
    std::vector<long> doubled;
    doubled.reserve(masses.size());
    for (double m : masses) {
        const double d = 2.0 * m;
        const double r = std::round(d);
        if (std::abs(d - r) > 1e-9) {
            std::ostringstream os;
            os << "mass " << m << " is not an integer or half-integer";
            throw ParityViolation(os.str());
        }
        doubled.push_back(static_cast<long>(r));
    }
    return MonopoleType(std::move(doubled), charges);
}

long WeightProfile::at(long w2) const {
    if (w2 < lo2 || w2 > hi2 - 2) return 0;
    return chi[static_cast<std::size_t>((w2 - lo2) / 2)];
}

long WeightProfile::sum() const {
    long s = 0;
    for (long c : chi) s += c;
    return s;
}

WeightProfile weight_profile(const MonopoleType& t) {
    WeightProfile w;
    w.lo2 = t.lo2();
    w.hi2 = t.hi2();
    for (long w2 = w.lo2; w2 <= w.hi2 - 2; w2 += 2)
        w.chi.push_back(t.chi2(w2));
    return w;
}

SiteLayout site_dims(const MonopoleType& t) {
    SiteLayout lay;
    for (long w2 = t.lo2(); w2 <= t.hi2() - 2; w2 += 2) {
        const long chi = t.chi2(w2);
        lay.beta[w2 + 1] = {chi, chi};
    }
    for (long w2 = t.lo2() + 2; w2 <= t.hi2() - 2; w2 += 2)
        lay.gamma[w2] = {t.chi2(w2 - 2), t.chi2(w2)};
    for (int j = 1; j <= t.n() - 1; ++j)
        lay.a[j] = {1, t.chi2(t.mass2(j))};
    for (int j = 2; j <= t.n(); ++j)
        lay.b[j] = {t.chi2(t.mass2(j) - 2), 1};
    return lay;
}

} // namespace nahm
