#pragma once

#include "sperner/chain.hpp"
#include "sperner/measure.hpp"

#include <functional>
#include <span>
#include <vector>

namespace sperner {

/// True iff no member strictly contains another. Throws on mixed universes.
bool is_antichain(std::span<const SubsetMask> family);

/// Distinct subsets of one universe, kept sorted by mask value.
class AntichainFamily {
public:
    /// Validates distinctness and the shared universe; does not check
    /// incomparability.
    AntichainFamily(int n, std::vector<SubsetMask> members);

    /// Additionally requires the antichain property; throws NotAntichain.
    static AntichainFamily checked(int n, std::vector<SubsetMask> members);

    /// Every set at level l.
    static AntichainFamily level(int n, int ell);

    int universe() const noexcept { return n_; }
    std::span<const SubsetMask> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool is_checked() const noexcept { return checked_; }

    /// Runs the antichain test once and caches a positive answer.
    bool verify();

    friend bool operator==(const AntichainFamily& a, const AntichainFamily& b) {
        return a.n_ == b.n_ && a.members_ == b.members_;
    }

private:
    int n_;
    std::vector<SubsetMask> members_;
    bool checked_ = false;
};

struct ChainHitCount {
    int count = 0;
};

/// sum over levels l of Pr[z in F | |z| = l]. Throws NotAntichain on
/// comparable members and TheoremViolation if the sum exceeds 1 + 1e-9.
double lym_sum(const ProductMeasure& measure, const AntichainFamily& family);

struct SpernerReport {
    double measure = 0.0;
    double max_level = 0.0;
    bool satisfied = false;
};

/// Pr[z in F] against max_l Pr[|z| = l].
SpernerReport sperner_check(const ProductMeasure& measure, const AntichainFamily& family);

/// Number of levels l with c_l in F.
ChainHitCount chain_hits(const ChainSample& chain, const AntichainFamily& family);

/// sum of point masses over the family, accumulated in ascending mask order.
double family_weight(const ProductMeasure& measure, const AntichainFamily& family);

struct MaxAntichainResult {
    AntichainFamily family;
    /// family_weight of `family`.
    double weight;
    /// Value of the minimum flow covering every set s at least point_mass(s)
    /// times; equals the maximum antichain weight by weighted Dilworth duality.
    double flow_value;
};

/// Exact maximum-weight antichain of the subset lattice, n <= 14.
MaxAntichainResult max_weight_antichain(const ProductMeasure& measure);

/// Calls `visit` once per antichain of {0,1}^n (n <= 5), empty family
/// included. Members arrive sorted ascending.
void for_each_antichain(int n, const std::function<void(const AntichainFamily&)>& visit);

std::vector<AntichainFamily> enumerate_antichains(int n);

} // namespace sperner
