#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sidonlab/errors.hpp"
#include "sidonlab/group.hpp"
#include "sidonlab/rational.hpp"
#include "sidonlab/sidon_set.hpp"

namespace sidonlab {

/* r_{A-B}: multiplicity of each value a - b over A x B. Entries are kept
   sorted by group index so iteration order is reproducible. */
class RepFunction {
public:
    RepFunction(GroupPtr domain, std::vector<std::pair<std::uint64_t, std::uint64_t>> entries,
                std::uint64_t total)
        : domain_(std::move(domain)), entries_(std::move(entries)), total_(total) {}

    const GroupPtr& domain() const { return domain_; }
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& entries() const {
        return entries_;
    }
    // sum of all multiplicities, equals |A||B|
    std::uint64_t total() const { return total_; }

    std::uint64_t at_index(std::uint64_t index) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                   [](const auto& e, std::uint64_t v) { return e.first < v; });
        return (it != entries_.end() && it->first == index) ? it->second : 0;
    }
    std::uint64_t at(const GroupElement& x) const {
        if (!x.group()->same_structure(*domain_))
            throw GroupMismatchError("representation count queried with foreign element");
        return at_index(x.index());
    }

    std::uint64_t max_nonzero_multiplicity() const {
        std::uint64_t m = 0;
        for (const auto& [idx, cnt] : entries_)
            if (idx != 0 && cnt > m) m = cnt;
        return m;
    }

private:
    GroupPtr domain_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries_;
    std::uint64_t total_;
};

namespace detail {

inline void check_same_group(const ElementSet& a, const ElementSet& b) {
    if (!a.group()->same_structure(*b.group()))
        throw GroupMismatchError("sets live in different ambient groups");
}

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted_entries(
    std::unordered_map<std::uint64_t, std::uint64_t>&& tally) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(tally.begin(), tally.end());
    std::sort(entries.begin(), entries.end());
    return entries;
}

} // namespace detail

inline RepFunction rep_function(const ElementSet& a, const ElementSet& b,
                                std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_group(a, b);
    check_capacity(a.size() * b.size(), ceiling, "representation function");
    const auto& g = *a.group();
    std::unordered_map<std::uint64_t, std::uint64_t> tally;
    tally.reserve(a.size() * b.size());
    std::uint64_t total = 0;
    for (std::uint64_t ia : a.indices())
        for (std::uint64_t ib : b.indices()) {
            ++tally[g.sub_indices(ia, ib)];
            ++total;
        }
    if (total != a.size() * b.size())
        throw Error("representation function mass != |A||B|");
    return RepFunction(a.group(), detail::sorted_entries(std::move(tally)), total);
}

/* Exact verification of the two convolution identities
     sum_x r_{A-B}(x)   = |A||B|
     sum_x r_{A-B}^2(x) = sum_x r_{A-A}(x) r_{B-B}(x).  */
inline bool identity_check(const ElementSet& a, const ElementSet& b,
                           std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_group(a, b);
    const RepFunction rab = rep_function(a, b, ceiling);
    std::uint64_t sum = 0, sum_sq = 0;
    for (const auto& [idx, cnt] : rab.entries()) {
        sum += cnt;
        sum_sq += cnt * cnt;
    }
    if (sum != a.size() * b.size()) return false;

    const RepFunction raa = rep_function(a, a, ceiling);
    const RepFunction rbb = rep_function(b, b, ceiling);
    std::uint64_t cross = 0;
    for (const auto& [idx, cnt] : raa.entries()) cross += cnt * rbb.at_index(idx);
    return sum_sq == cross;
}

enum class PairCountStrategy { Auto, PairScan, RepFunction };

/* S = |{(b, b') in B x B' : b + b' in A}|, exact. Two routes:
   a direct O(|B||B'|) scan, and O(|A||B| + |B'|) through r_{A-B}
   (S = sum_{b' in B'} r_{A-B}(b')). Auto picks the cheaper. */
inline std::uint64_t pair_count(const SidonSet& a, const ElementSet& b,
                                const ElementSet& bp,
                                PairCountStrategy strategy = PairCountStrategy::Auto,
                                std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_group(a.elements(), b);
    detail::check_same_group(b, bp);
    if (b.is_empty() || bp.is_empty()) return 0;
    const std::uint64_t cost_scan = b.size() * bp.size();
    const std::uint64_t cost_rep = a.size() * b.size() + bp.size();
    if (strategy == PairCountStrategy::Auto) {
        strategy = cost_scan <= cost_rep ? PairCountStrategy::PairScan
                                         : PairCountStrategy::RepFunction;
    }
    const auto& g = *b.group();
    std::uint64_t s = 0;
    if (strategy == PairCountStrategy::PairScan) {
        check_capacity(cost_scan, ceiling, "pair count (scan)");
        for (std::uint64_t ib : b.indices())
            for (std::uint64_t ip : bp.indices())
                if (a.elements().contains(g.add_indices(ib, ip))) ++s;
    } else {
        check_capacity(cost_rep, ceiling, "pair count (representation function)");
        const RepFunction rab = rep_function(a.elements(), b, ceiling);
        for (std::uint64_t ip : bp.indices()) s += rab.at_index(ip);
    }
    return s;
}

struct SizeInfo {
    std::uint64_t a = 0;       // |A|
    std::uint64_t b = 0;       // |B|
    std::uint64_t bp = 0;      // |B'|
    std::uint64_t g = 0;       // |G|
    double delta = 0.0;        // sqrt(|G|) - |A|
};

/* Verdict container for one counting experiment: the exact count, the exact
   main term, the normalized error theta and the bound it is tested against.
   theta is the only floating-point quantity, produced by a single final
   division. Producers fix the convention theta = 0 when B or B' is empty. */
struct CountReport {
    std::uint64_t count = 0;
    Rational main_term;
    double theta = 0.0;
    double theta_bound = 0.0;
    bool within_bound = true;
    SizeInfo sizes;
};

/* The main counting statistic: S = |{(b,b') in B x B' : b+b' in A}| against
   main term |A||B||B'|/|G|, with
       theta = (S - main) / (sqrt(|B||B'|) |G|^{1/4})
   tested strictly against 1 + (|B|/|G|) max(0, delta). The bound uses |B|,
   not |B'|; callers choose which set plays which role. */
inline CountReport theta_report(const SidonSet& a, const ElementSet& b,
                                const ElementSet& bp,
                                PairCountStrategy strategy = PairCountStrategy::Auto,
                                std::uint64_t ceiling = kDefaultCeiling) {
    const std::uint64_t order = a.group()->order();
    const double delta = a.delta();
    CountReport rep;
    rep.sizes = {a.size(), b.size(), bp.size(), order, delta};
    rep.theta_bound = 1.0 + static_cast<double>(b.size()) / static_cast<double>(order) *
                                std::max(0.0, delta);
    if (b.is_empty() || bp.is_empty()) {
        rep.count = 0;
        rep.main_term = Rational(0);
        rep.theta = 0.0;
        rep.within_bound = true;
        return rep;
    }
    rep.count = pair_count(a, b, bp, strategy, ceiling);
    rep.main_term = Rational(static_cast<std::int64_t>(a.size() * b.size() * bp.size()),
                             static_cast<std::int64_t>(order));
    const double denom = std::sqrt(static_cast<double>(b.size()) *
                                   static_cast<double>(bp.size())) *
                         std::sqrt(std::sqrt(static_cast<double>(order)));
    rep.theta = (static_cast<double>(rep.count) - rep.main_term.to_double()) / denom;
    rep.within_bound = std::fabs(rep.theta) < rep.theta_bound;
    return rep;
}

// B + B' = {b + b' : b in B, b' in B'}, exact and deduplicated.
inline ElementSet sumset(const ElementSet& b, const ElementSet& bp,
                         std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_group(b, bp);
    check_capacity(b.size() * bp.size(), ceiling, "sumset");
    const auto& g = *b.group();
    std::vector<std::uint64_t> out;
    out.reserve(b.size() * bp.size());
    for (std::uint64_t ib : b.indices())
        for (std::uint64_t ip : bp.indices()) out.push_back(g.add_indices(ib, ip));
    return ElementSet(b.group(), std::move(out));
}

struct IntersectionReport {
    std::uint64_t intersection = 0;  // |A cap B|
    std::uint64_t sumset_size = 0;   // |B + B'|
    double bound = 0.0;
    bool within = true;
    SizeInfo sizes;
};

/* Upper bound for |A cap B| through |B + B'|:
     |A cap B| <= |B+B'||A|/|G| + theta (|B+B'|/|B'|)^{1/2} |G|^{1/4}
   evaluated at the largest allowed theta, 1 + max(0,delta)|B'|/|G|. */
inline IntersectionReport intersection_report(const SidonSet& a, const ElementSet& b,
                                              const ElementSet& bp,
                                              std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_group(a.elements(), b);
    detail::check_same_group(b, bp);
    if (bp.is_empty()) throw EmptySetError("intersection bound needs B' nonempty");
    const std::uint64_t order = a.group()->order();
    const double delta = a.delta();

    IntersectionReport rep;
    rep.sizes = {a.size(), b.size(), bp.size(), order, delta};
    rep.intersection = a.elements().intersect(b).size();
    rep.sumset_size = sumset(b, bp, ceiling).size();

    const double theta_max = 1.0 + std::max(0.0, delta) *
                                       static_cast<double>(bp.size()) /
                                       static_cast<double>(order);
    rep.bound = static_cast<double>(rep.sumset_size) * static_cast<double>(a.size()) /
                    static_cast<double>(order) +
                theta_max *
                    std::sqrt(static_cast<double>(rep.sumset_size) /
                              static_cast<double>(bp.size())) *
                    std::sqrt(std::sqrt(static_cast<double>(order)));
    rep.within = static_cast<double>(rep.intersection) <= rep.bound;
    return rep;
}

struct DiscrepancyReport {
    Rational discrepancy;           // E_A(B) = |A cap B| - |B||A|/|G|
    std::uint64_t intersection = 0; // |A cap B|
};

inline DiscrepancyReport discrepancy(const SidonSet& a, const ElementSet& b) {
    detail::check_same_group(a.elements(), b);
    DiscrepancyReport rep;
    rep.intersection = a.elements().intersect(b).size();
    const Rational density(static_cast<std::int64_t>(b.size() * a.size()),
                           static_cast<std::int64_t>(a.group()->order()));
    rep.discrepancy = Rational(static_cast<std::int64_t>(rep.intersection)) - density;
    return rep;
}

struct TranslationReport {
    bool holds = false;
    std::optional<GroupElement> witness_c;
    Rational lhs;       // |E_A(B)|
    double rhs = 0.0;   // bound at the witness c
};

/* Searches C for a translation c with
     |E_A(B)| <= 2 (q |B| / |C|)^{1/2} + |E_A(B \ (B+c))| + |E_A((B+c) \ B)|
   where q is the field cardinality behind the construction. The comparison
   is exact: the rational residue is squared against 4q|B|/|C|. */
inline TranslationReport translation_lemma_check(const SidonSet& a, const ElementSet& b,
                                                 const ElementSet& c) {
    detail::check_same_group(a.elements(), b);
    detail::check_same_group(b, c);
    if (c.is_empty()) throw EmptySetError("translation lemma needs C nonempty");
    if (!a.base_field())
        throw DomainError("translation lemma applies to the three field constructions");
    const std::uint64_t q = a.base_field()->q();

    TranslationReport rep;
    rep.lhs = discrepancy(a, b).discrepancy.abs();
    for (std::uint64_t ic : c.indices()) {
        const ElementSet shifted = b.translated(ic);
        const Rational e_upper = discrepancy(a, b.difference(shifted)).discrepancy.abs();
        const Rational e_lower = discrepancy(a, shifted.difference(b)).discrepancy.abs();
        const Rational residue = rep.lhs - e_upper - e_lower;
        const bool ok = residue.is_negative() || residue.is_zero() ||
                        residue.square_leq(4 * q * b.size(), c.size());
        if (ok) {
            rep.holds = true;
            rep.witness_c = a.group()->element_at(ic);
            rep.rhs = 2.0 * std::sqrt(static_cast<double>(q) *
                                      static_cast<double>(b.size()) /
                                      static_cast<double>(c.size())) +
                      e_upper.to_double() + e_lower.to_double();
            return rep;
        }
    }
    return rep;
}

// --- field subsets (sum-product raw material) -----------------------------

/* Subset of F_q as sorted unique element codes. */
class FieldSubset {
public:
    FieldSubset(FieldPtr field, std::vector<std::uint64_t> codes)
        : field_(std::move(field)), codes_(std::move(codes)) {
        for (auto& c : codes_) {
            if (c >= field_->q()) throw DomainError("field subset code out of range");
        }
        std::sort(codes_.begin(), codes_.end());
        codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
    }

    static FieldSubset whole_field(const FieldPtr& f) {
        std::vector<std::uint64_t> codes(f->q());
        for (std::uint64_t i = 0; i < codes.size(); ++i) codes[i] = i;
        return FieldSubset(f, std::move(codes));
    }
    static FieldSubset units(const FieldPtr& f) {
        std::vector<std::uint64_t> codes(f->q() - 1);
        for (std::uint64_t i = 0; i < codes.size(); ++i) codes[i] = i + 1;
        return FieldSubset(f, std::move(codes));
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<std::uint64_t>& codes() const { return codes_; }
    std::uint64_t size() const { return codes_.size(); }
    bool is_empty() const { return codes_.empty(); }
    bool contains(std::uint64_t code) const {
        return std::binary_search(codes_.begin(), codes_.end(), code);
    }
    bool contains_zero() const { return !codes_.empty() && codes_.front() == 0; }

    FieldSubset shifted(std::uint64_t delta_code) const {
        std::vector<std::uint64_t> out;
        out.reserve(codes_.size());
        for (auto c : codes_) out.push_back(field_->add(c, delta_code));
        return FieldSubset(field_, std::move(out));
    }

    FieldSubset mapped(const std::function<std::uint64_t(std::uint64_t)>& fn) const {
        std::vector<std::uint64_t> out;
        out.reserve(codes_.size());
        for (auto c : codes_) out.push_back(fn(c));
        return FieldSubset(field_, std::move(out));
    }

private:
    FieldPtr field_;
    std::vector<std::uint64_t> codes_;
};

namespace detail {
inline void check_same_field(const FieldSubset& x, const FieldSubset& y) {
    if (!x.field()->same_structure(*y.field()))
        throw FieldMismatchError("subsets of different fields");
}
} // namespace detail

inline FieldSubset field_sumset(const FieldSubset& x, const FieldSubset& y,
                                std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_field(x, y);
    check_capacity(x.size() * y.size(), ceiling, "field sumset");
    const auto& f = *x.field();
    std::vector<std::uint64_t> out;
    out.reserve(x.size() * y.size());
    for (auto cx : x.codes())
        for (auto cy : y.codes()) out.push_back(f.add(cx, cy));
    return FieldSubset(x.field(), std::move(out));
}

inline FieldSubset field_productset(const FieldSubset& x, const FieldSubset& y,
                                    std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_field(x, y);
    check_capacity(x.size() * y.size(), ceiling, "field productset");
    const auto& f = *x.field();
    std::vector<std::uint64_t> out;
    out.reserve(x.size() * y.size());
    for (auto cx : x.codes())
        for (auto cy : y.codes()) out.push_back(f.mul(cx, cy));
    return FieldSubset(x.field(), std::move(out));
}

} // namespace sidonlab
