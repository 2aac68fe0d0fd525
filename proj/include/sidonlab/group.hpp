#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sidonlab/errors.hpp"
#include "sidonlab/field.hpp"

namespace sidonlab {

class AmbientGroup;
class GroupElement;
using GroupPtr = std::shared_ptr<const AmbientGroup>;

// Z_m under addition.
struct CyclicDescriptor {
    std::uint64_t modulus;
};

// Additive group of F_q; coordinates are field element codes.
struct FieldDescriptor {
    FieldPtr field;
};

using ComponentDescriptor = std::variant<CyclicDescriptor, FieldDescriptor>;

/* Finite abelian product group G = C_1 x ... x C_n. Every element has a
   packed index in [0, |G|): mixed-radix over component coordinates with the
   first component most significant, so index order is the lexicographic
   enumeration order and is stable across runs. */
class AmbientGroup : public std::enable_shared_from_this<AmbientGroup> {
public:
    static GroupPtr create(std::vector<ComponentDescriptor> components) {
        if (components.empty())
            throw DomainError("ambient group needs at least one component");
        std::uint64_t order = 1;
        std::vector<std::uint64_t> orders;
        for (const auto& comp : components) {
            std::uint64_t m = std::visit(
                [](const auto& c) -> std::uint64_t {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, CyclicDescriptor>) {
                        if (c.modulus < 1) throw DomainError("cyclic component modulus must be >= 1");
                        return c.modulus;
                    } else {
                        return c.field->q();
                    }
                },
                comp);
            if (order > (std::uint64_t{1} << 62) / m)
                throw CapacityError("group order exceeds 2^62");
            orders.push_back(m);
            order *= m;
        }
        return GroupPtr(new AmbientGroup(std::move(components), std::move(orders), order));
    }

    std::size_t component_count() const { return components_.size(); }
    const std::vector<ComponentDescriptor>& components() const { return components_; }
    std::uint64_t component_order(std::size_t i) const { return orders_[i]; }
    std::uint64_t order() const { return order_; }

    bool same_structure(const AmbientGroup& o) const {
        if (components_.size() != o.components_.size()) return false;
        for (std::size_t i = 0; i < components_.size(); ++i) {
            const auto* ca = std::get_if<CyclicDescriptor>(&components_[i]);
            const auto* cb = std::get_if<CyclicDescriptor>(&o.components_[i]);
            if ((ca == nullptr) != (cb == nullptr)) return false;
            if (ca != nullptr) {
                if (ca->modulus != cb->modulus) return false;
            } else {
                const auto& fa = std::get<FieldDescriptor>(components_[i]).field;
                const auto& fb = std::get<FieldDescriptor>(o.components_[i]).field;
                if (!fa->same_structure(*fb)) return false;
            }
        }
        return true;
    }

    // --- packed index arithmetic ------------------------------------------

    std::uint64_t index_of(std::span<const std::uint64_t> coords) const {
        if (coords.size() != orders_.size())
            throw DomainError("coordinate count does not match components");
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (coords[i] >= orders_[i]) throw DomainError("coordinate out of range");
            idx = idx * orders_[i] + coords[i];
        }
        return idx;
    }

    std::vector<std::uint64_t> coords_at(std::uint64_t index) const {
        std::vector<std::uint64_t> coords(orders_.size(), 0);
        for (std::size_t i = orders_.size(); i-- > 0;) {
            coords[i] = index % orders_[i];
            index /= orders_[i];
        }
        return coords;
    }

    std::uint64_t add_indices(std::uint64_t a, std::uint64_t b) const {
        return combine(a, b, /*subtract=*/false);
    }
    std::uint64_t sub_indices(std::uint64_t a, std::uint64_t b) const {
        return combine(a, b, /*subtract=*/true);
    }
    std::uint64_t neg_index(std::uint64_t a) const { return combine(0, a, true); }

    GroupElement element(std::vector<std::uint64_t> coords) const;
    GroupElement element_at(std::uint64_t index) const;
    GroupElement identity() const;

    std::vector<GroupElement> enumerate(std::uint64_t ceiling = kDefaultCeiling) const;

private:
    AmbientGroup(std::vector<ComponentDescriptor> components,
                 std::vector<std::uint64_t> orders, std::uint64_t order)
        : components_(std::move(components)), orders_(std::move(orders)), order_(order) {}

    std::uint64_t combine(std::uint64_t a, std::uint64_t b, bool subtract) const {
        std::uint64_t idx = 0;
        // peel coordinates least significant first, rebuild most significant first
        std::uint64_t place = 1;
        for (std::size_t i = orders_.size(); i-- > 0;) {
            const std::uint64_t m = orders_[i];
            std::uint64_t ca = a % m, cb = b % m;
            a /= m; b /= m;
            std::uint64_t c;
            if (const auto* fd = std::get_if<FieldDescriptor>(&components_[i])) {
                c = subtract ? fd->field->sub(ca, cb) : fd->field->add(ca, cb);
            } else {
                c = subtract ? (ca + m - cb) % m : (ca + cb) % m;
            }
            idx += c * place;
            place *= m;
        }
        return idx;
    }

    std::vector<ComponentDescriptor> components_;
    std::vector<std::uint64_t> orders_;
    std::uint64_t order_;
};

class GroupElement {
public:
    GroupElement(GroupPtr owner, std::vector<std::uint64_t> coords)
        : owner_(std::move(owner)), coords_(std::move(coords)) {
        index_ = owner_->index_of(coords_); // validates ranges
    }

    const GroupPtr& group() const { return owner_; }
    const std::vector<std::uint64_t>& coords() const { return coords_; }
    std::uint64_t index() const { return index_; }
    bool is_identity() const { return index_ == 0; }

    GroupElement operator+(const GroupElement& o) const {
        check(o);
        return from_index(owner_, owner_->add_indices(index_, o.index_));
    }
    GroupElement operator-(const GroupElement& o) const {
        check(o);
        return from_index(owner_, owner_->sub_indices(index_, o.index_));
    }
    GroupElement operator-() const {
        return from_index(owner_, owner_->neg_index(index_));
    }

    bool operator==(const GroupElement& o) const {
        return owner_->same_structure(*o.owner_) && index_ == o.index_;
    }
    bool operator!=(const GroupElement& o) const { return !(*this == o); }

    static GroupElement from_index(const GroupPtr& g, std::uint64_t index) {
        return GroupElement(g, g->coords_at(index));
    }

private:
    void check(const GroupElement& o) const {
        if (!owner_->same_structure(*o.owner_))
            throw GroupMismatchError("elements of different ambient groups");
    }

    GroupPtr owner_;
    std::vector<std::uint64_t> coords_;
    std::uint64_t index_;
};

inline GroupElement AmbientGroup::element(std::vector<std::uint64_t> coords) const {
    return GroupElement(shared_from_this(), std::move(coords));
}
inline GroupElement AmbientGroup::element_at(std::uint64_t index) const {
    if (index >= order_) throw DomainError("element index out of range");
    return GroupElement::from_index(shared_from_this(), index);
}
inline GroupElement AmbientGroup::identity() const { return element_at(0); }

inline std::vector<GroupElement> AmbientGroup::enumerate(std::uint64_t ceiling) const {
    check_capacity(order_, ceiling, "group enumeration");
    std::vector<GroupElement> out;
    out.reserve(order_);
    for (std::uint64_t i = 0; i < order_; ++i) out.push_back(element_at(i));
    return out;
}

/* A subset of an ambient group held as sorted unique packed indices. This is
   the working currency of every counting kernel. */
class ElementSet {
public:
    ElementSet(GroupPtr group, std::vector<std::uint64_t> indices)
        : group_(std::move(group)), indices_(std::move(indices)) {
        for (std::uint64_t idx : indices_) {
            if (idx >= group_->order()) throw DomainError("set index out of range");
        }
        std::sort(indices_.begin(), indices_.end());
        indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    }

    static ElementSet from_elements(const GroupPtr& group,
                                    const std::vector<GroupElement>& elems) {
        std::vector<std::uint64_t> idx;
        idx.reserve(elems.size());
        for (const auto& e : elems) {
            if (!e.group()->same_structure(*group))
                throw GroupMismatchError("set element from a different group");
            idx.push_back(e.index());
        }
        return ElementSet(group, std::move(idx));
    }

    static ElementSet whole_group(const GroupPtr& group,
                                  std::uint64_t ceiling = kDefaultCeiling) {
        check_capacity(group->order(), ceiling, "whole-group set");
        std::vector<std::uint64_t> idx(group->order());
        for (std::uint64_t i = 0; i < idx.size(); ++i) idx[i] = i;
        return ElementSet(group, std::move(idx));
    }

    static ElementSet empty(const GroupPtr& group) { return ElementSet(group, {}); }

    const GroupPtr& group() const { return group_; }
    const std::vector<std::uint64_t>& indices() const { return indices_; }
    std::uint64_t size() const { return indices_.size(); }
    bool is_empty() const { return indices_.empty(); }

    bool contains(std::uint64_t index) const {
        return std::binary_search(indices_.begin(), indices_.end(), index);
    }

    ElementSet translated(std::uint64_t t) const {
        std::vector<std::uint64_t> idx;
        idx.reserve(indices_.size());
        for (std::uint64_t i : indices_) idx.push_back(group_->add_indices(i, t));
        return ElementSet(group_, std::move(idx));
    }

    // this \ other
    ElementSet difference(const ElementSet& other) const {
        std::vector<std::uint64_t> idx;
        std::set_difference(indices_.begin(), indices_.end(),
                            other.indices_.begin(), other.indices_.end(),
                            std::back_inserter(idx));
        return ElementSet(group_, std::move(idx));
    }

    ElementSet intersect(const ElementSet& other) const {
        std::vector<std::uint64_t> idx;
        std::set_intersection(indices_.begin(), indices_.end(),
                              other.indices_.begin(), other.indices_.end(),
                              std::back_inserter(idx));
        return ElementSet(group_, std::move(idx));
    }

    std::vector<GroupElement> elements() const {
        std::vector<GroupElement> out;
        out.reserve(indices_.size());
        for (std::uint64_t i : indices_) out.push_back(group_->element_at(i));
        return out;
    }

    bool operator==(const ElementSet& o) const {
        return group_->same_structure(*o.group_) && indices_ == o.indices_;
    }

private:
    GroupPtr group_;
    std::vector<std::uint64_t> indices_;
};

} // namespace sidonlab
