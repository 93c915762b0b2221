#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace sperner {

/// Seedable 64-bit source used by every sampler. The library never seeds
/// from ambient entropy.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// A subset of {0, ..., n-1} stored as a bit mask; n is at most 64.
class SubsetMask {
public:
    static constexpr int kMaxUniverse = 64;

    SubsetMask() = default;
    SubsetMask(int n, std::uint64_t bits);

    static SubsetMask empty(int n) { return SubsetMask(n, 0); }
    static SubsetMask full(int n);
    static SubsetMask of(int n, std::initializer_list<int> elements);

    int universe() const noexcept { return n_; }
    std::uint64_t bits() const noexcept { return bits_; }
    int size() const noexcept;
    bool contains(int j) const noexcept { return (bits_ >> j) & 1u; }

    SubsetMask with(int j) const;
    SubsetMask without(int j) const;
    SubsetMask complement() const;

    /// Strict inclusion.
    bool is_proper_subset_of(const SubsetMask& other) const noexcept {
        return bits_ != other.bits_ && (bits_ & other.bits_) == bits_;
    }

    friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
    friend auto operator<=>(const SubsetMask& a, const SubsetMask& b) noexcept {
        return a.bits_ <=> b.bits_;
    }

private:
    int n_ = 0;
    std::uint64_t bits_ = 0;
};

std::uint64_t universe_bits(int n);

/// Lower-case hexadecimal with a 0x prefix, e.g. "0x5".
std::string to_hex(const SubsetMask& s);

/// A product distribution on {0,1}^n given by n independent Bernoulli
/// parameters. Values within 1e-12 outside [0,1] are clamped.
class ProductMeasure {
public:
    explicit ProductMeasure(std::vector<double> p, std::string name = {});

    /// The measure on the empty universe; only produced by reduce_trivial.
    static ProductMeasure empty();

    static ProductMeasure uniform(int n);

    int size() const noexcept { return static_cast<int>(p_.size()); }
    std::span<const double> p() const noexcept { return p_; }
    double operator[](int j) const { return p_[static_cast<std::size_t>(j)]; }
    const std::string& name() const noexcept { return name_; }

    /// True iff every p_j lies strictly inside (0, 1).
    bool is_nontrivial() const noexcept;

    /// Throws TrivialMeasure naming the first coordinate in {0, 1}.
    void require_nontrivial() const;

private:
    struct EmptyTag {};
    explicit ProductMeasure(EmptyTag) {}

    std::vector<double> p_;
    std::string name_;
};

/// Distribution of |z| for z ~ P.
struct LevelPMF {
    std::vector<double> probs;
    std::vector<double> log_probs;

    int max_level() const noexcept { return static_cast<int>(probs.size()) - 1; }
    /// max over l of Pr[|z| = l].
    double max_probability() const noexcept;
    /// Smallest l attaining max_probability.
    int argmax() const noexcept;
};

/// Odds q_j = p_j / (1 - p_j) of a non-trivial measure.
class OddsVector {
public:
    explicit OddsVector(const ProductMeasure& measure);

    /// Odds given directly; every value must be finite and positive.
    static OddsVector from_values(std::vector<double> q);

    int size() const noexcept { return static_cast<int>(q_.size()); }
    std::span<const double> q() const noexcept { return q_; }
    std::span<const double> log_q() const noexcept { return log_q_; }

    /// Whether plain double arithmetic is safe for symmetric polynomials of
    /// these odds: n <= 64 and sum |log q_j| <= 600, which keeps every
    /// partial product and subset sum inside the normal double range.
    bool linear_safe() const noexcept { return linear_safe_; }

private:
    OddsVector() = default;
    void finish();

    std::vector<double> q_;
    std::vector<double> log_q_;
    bool linear_safe_ = false;
};

enum class Arithmetic { automatic, linear, log };

double point_mass(const ProductMeasure& measure, const SubsetMask& s);
double log_point_mass(const ProductMeasure& measure, const SubsetMask& s);

/// Poisson-binomial convolution. `automatic` switches to the log path for
/// n > 64.
LevelPMF level_pmf(const ProductMeasure& measure, Arithmetic mode = Arithmetic::automatic);

/// Pr[z = s | |z| = |s|].
double conditional_point(const ProductMeasure& measure, const SubsetMask& s);

OddsVector odds(const ProductMeasure& measure);

SubsetMask sample_point(const ProductMeasure& measure, Rng& rng);

struct TrivialReduction {
    ProductMeasure reduced;
    /// Both masks live in the original universe.
    SubsetMask forced_in;
    SubsetMask forced_out;
};

TrivialReduction reduce_trivial(const ProductMeasure& measure);

/// Every SubsetMask at level `ell` of an n-universe, ascending by bits.
std::vector<SubsetMask> level_sets(int n, int ell);

} // namespace sperner
