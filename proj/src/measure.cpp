#include "sperner/measure.hpp"

#include "sperner/error.hpp"
#include "sperner/logmath.hpp"
#include "sperner/symfunc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace sperner {

namespace {

constexpr double kClampSlack = 1e-12;

std::string describe(const char* what, int coordinate, double value) {
    std::ostringstream os;
    os << what << " at coordinate " << coordinate << " (p = " << value << ")";
    return os.str();
}

void require_same_universe(const ProductMeasure& measure, const SubsetMask& s) {
    if (s.universe() != measure.size()) {
        throw DimensionMismatch("subset universe " + std::to_string(s.universe()) +
                                " does not match measure dimension " +
                                std::to_string(measure.size()));
    }
}

} // namespace

TrivialMeasure::TrivialMeasure(int coordinate, double value)
    : Error(describe("trivial coordinate", coordinate, value)), coordinate_(coordinate) {}

std::uint64_t universe_bits(int n) {
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

SubsetMask::SubsetMask(int n, std::uint64_t bits) : n_(n), bits_(bits) {
    if (n < 0 || n > kMaxUniverse) {
        throw InvalidArgument("subset universe must be in [0, 64], got " + std::to_string(n));
    }
    if ((bits & ~universe_bits(n)) != 0) {
        throw InvalidArgument("subset mask has bits outside a universe of size " +
                              std::to_string(n));
    }
}

SubsetMask SubsetMask::full(int n) { return SubsetMask(n, universe_bits(n)); }

SubsetMask SubsetMask::of(int n, std::initializer_list<int> elements) {
    std::uint64_t bits = 0;
    for (int j : elements) {
        if (j < 0 || j >= n) throw InvalidArgument("element out of range");
        bits |= std::uint64_t{1} << j;
    }
    return SubsetMask(n, bits);
}

int SubsetMask::size() const noexcept { return std::popcount(bits_); }

SubsetMask SubsetMask::with(int j) const {
    if (j < 0 || j >= n_) throw InvalidArgument("coordinate out of range");
    return SubsetMask(n_, bits_ | (std::uint64_t{1} << j));
}

SubsetMask SubsetMask::without(int j) const {
    if (j < 0 || j >= n_) throw InvalidArgument("coordinate out of range");
    return SubsetMask(n_, bits_ & ~(std::uint64_t{1} << j));
}

SubsetMask SubsetMask::complement() const { return SubsetMask(n_, ~bits_ & universe_bits(n_)); }

std::string to_hex(const SubsetMask& s) {
    std::ostringstream os;
    os << "0x" << std::hex << s.bits();
    return os.str();
}

ProductMeasure::ProductMeasure(std::vector<double> p, std::string name)
    : p_(std::move(p)), name_(std::move(name)) {
    if (p_.empty()) throw InvalidArgument("product measure needs at least one coordinate");
    for (std::size_t j = 0; j < p_.size(); ++j) {
        double& v = p_[j];
        if (!std::isfinite(v) || v < -kClampSlack || v > 1.0 + kClampSlack) {
            throw InvalidArgument(describe("probability outside [0,1]", static_cast<int>(j), v));
        }
        v = std::clamp(v, 0.0, 1.0);
    }
}

ProductMeasure ProductMeasure::empty() { return ProductMeasure(EmptyTag{}); }

ProductMeasure ProductMeasure::uniform(int n) {
    return ProductMeasure(std::vector<double>(static_cast<std::size_t>(n), 0.5));
}

bool ProductMeasure::is_nontrivial() const noexcept {
    return std::all_of(p_.begin(), p_.end(), [](double v) { return v > 0.0 && v < 1.0; });
}

void ProductMeasure::require_nontrivial() const {
    for (std::size_t j = 0; j < p_.size(); ++j) {
        if (!(p_[j] > 0.0 && p_[j] < 1.0)) throw TrivialMeasure(static_cast<int>(j), p_[j]);
    }
}

double LevelPMF::max_probability() const noexcept {
    return probs.empty() ? 0.0 : *std::max_element(probs.begin(), probs.end());
}

int LevelPMF::argmax() const noexcept {
    return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

OddsVector::OddsVector(const ProductMeasure& measure) {
    measure.require_nontrivial();
    const auto p = measure.p();
    q_.reserve(p.size());
    log_q_.reserve(p.size());
    for (double pj : p) {
        q_.push_back(pj / (1.0 - pj));
        log_q_.push_back(std::log(pj) - std::log1p(-pj));
    }
    finish();
}

OddsVector OddsVector::from_values(std::vector<double> q) {
    OddsVector out;
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (!std::isfinite(q[j]) || !(q[j] > 0.0)) {
            throw InvalidArgument("odds must be finite and positive (coordinate " +
                                  std::to_string(j) + ")");
        }
        out.log_q_.push_back(std::log(q[j]));
    }
    out.q_ = std::move(q);
    out.finish();
    return out;
}

void OddsVector::finish() {
    double spread = 0.0;
    for (double lq : log_q_) spread += std::abs(lq);
    linear_safe_ = q_.size() <= 64 && spread <= 600.0;
}

double point_mass(const ProductMeasure& measure, const SubsetMask& s) {
    require_same_universe(measure, s);
    double mass = 1.0;
    for (int j = 0; j < measure.size(); ++j) mass *= s.contains(j) ? measure[j] : 1.0 - measure[j];
    return mass;
}

double log_point_mass(const ProductMeasure& measure, const SubsetMask& s) {
    require_same_universe(measure, s);
    double acc = 0.0;
    for (int j = 0; j < measure.size(); ++j) {
        acc += s.contains(j) ? std::log(measure[j]) : std::log1p(-measure[j]);
    }
    return acc;
}

LevelPMF level_pmf(const ProductMeasure& measure, Arithmetic mode) {
    const int n = measure.size();
    const bool use_log =
        mode == Arithmetic::log || (mode == Arithmetic::automatic && n > 64);
    LevelPMF out;
    if (!use_log) {
        std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
        probs[0] = 1.0;
        for (int j = 0; j < n; ++j) {
            const double pj = measure[j];
            for (int ell = j + 1; ell >= 1; --ell) {
                probs[ell] = probs[ell] * (1.0 - pj) + probs[ell - 1] * pj;
            }
            probs[0] *= 1.0 - pj;
        }
        out.log_probs.reserve(probs.size());
        for (double v : probs) out.log_probs.push_back(v > 0.0 ? std::log(v) : kNegInf);
        out.probs = std::move(probs);
        return out;
    }

    std::vector<double> logs(static_cast<std::size_t>(n) + 1, kNegInf);
    logs[0] = 0.0;
    for (int j = 0; j < n; ++j) {
        const double pj = measure[j];
        const double lp = pj > 0.0 ? std::log(pj) : kNegInf;
        const double lq = pj < 1.0 ? std::log1p(-pj) : kNegInf;
        for (int ell = j + 1; ell >= 1; --ell) {
            logs[ell] = log_add_exp(logs[ell] + lq, logs[ell - 1] + lp);
        }
        logs[0] += lq;
        // Renormalize so the running total stays at log 1 despite rounding.
        const double total = log_sum_exp(std::span<const double>(logs.data(), j + 2));
        for (int ell = 0; ell <= j + 1; ++ell) logs[ell] -= total;
    }
    out.probs.reserve(logs.size());
    for (double v : logs) out.probs.push_back(std::exp(v));
    out.log_probs = std::move(logs);
    return out;
}

double conditional_point(const ProductMeasure& measure, const SubsetMask& s) {
    require_same_universe(measure, s);
    const OddsVector q(measure);
    const SymPolyTable g = elem_sym_all(q);
    double log_weight = 0.0;
    for (int j = 0; j < q.size(); ++j) {
        if (s.contains(j)) log_weight += q.log_q()[j];
    }
    return std::exp(log_weight - g.log_g[s.size()]);
}

OddsVector odds(const ProductMeasure& measure) { return OddsVector(measure); }

SubsetMask sample_point(const ProductMeasure& measure, Rng& rng) {
    const int n = measure.size();
    if (n > SubsetMask::kMaxUniverse) throw InvalidArgument("sample_point supports n <= 64");
    std::uint64_t bits = 0;
    for (int j = 0; j < n; ++j) {
        if (uniform01(rng) < measure[j]) bits |= std::uint64_t{1} << j;
    }
    return SubsetMask(n, bits);
}

TrivialReduction reduce_trivial(const ProductMeasure& measure) {
    const int n = measure.size();
    std::vector<double> kept;
    std::uint64_t in = 0;
    std::uint64_t out = 0;
    for (int j = 0; j < n; ++j) {
        const double pj = measure[j];
        if (pj == 1.0) {
            in |= std::uint64_t{1} << j;
        } else if (pj == 0.0) {
            out |= std::uint64_t{1} << j;
        } else {
            kept.push_back(pj);
        }
    }
    const int universe = std::min(n, SubsetMask::kMaxUniverse);
    if (n > SubsetMask::kMaxUniverse && (in | out) != 0) {
        throw InvalidArgument("reduce_trivial reports forced sets only for n <= 64");
    }
    ProductMeasure reduced =
        kept.empty() ? ProductMeasure::empty() : ProductMeasure(std::move(kept), measure.name());
    return TrivialReduction{std::move(reduced), SubsetMask(universe, in), SubsetMask(universe, out)};
}

std::vector<SubsetMask> level_sets(int n, int ell) {
    if (n < 0 || n > SubsetMask::kMaxUniverse || ell < 0 || ell > n) {
        throw InvalidArgument("level out of range");
    }
    std::vector<SubsetMask> out;
    if (ell == 0) {
        out.emplace_back(n, 0);
        return out;
    }
    const std::uint64_t limit = universe_bits(n);
    std::uint64_t v = universe_bits(ell);
    while (true) {
        out.emplace_back(n, v);
        if (v == (limit & ~universe_bits(n - ell))) break;
        // Gosper's hack: next larger integer with the same popcount.
        const std::uint64_t c = v & (~v + 1);
        const std::uint64_t r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    return out;
}

} // namespace sperner
