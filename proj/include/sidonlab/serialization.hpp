#pragma once

#include <json.hpp>

#include "sidonlab/counting.hpp"
#include "sidonlab/experiments.hpp"
#include "sidonlab/field.hpp"
#include "sidonlab/group.hpp"
#include "sidonlab/polynomial.hpp"
#include "sidonlab/rational.hpp"
#include "sidonlab/sidon_set.hpp"

/* JSON forms for sets and reports. Counts serialize as exact integers and
   rationals as numerator/denominator pairs; lossless round trips for Sidon
   sets (group descriptor + construction + element list) are covered by
   tests. */
namespace sidonlab {

using nlohmann::json;

inline json to_json(const Rational& r) {
    return json{{"num", r.num()}, {"den", r.den()}};
}
inline Rational rational_from_json(const json& j) {
    return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
}

inline json to_json(const Polynomial& p) {
    return json{{"p", p.characteristic()}, {"coeffs", p.coeffs()}};
}
inline Polynomial polynomial_from_json(const json& j) {
    return Polynomial(j.at("p").get<std::uint64_t>(),
                      j.at("coeffs").get<std::vector<std::uint64_t>>());
}

inline json to_json(const FieldPtr& f) {
    json j{{"p", f->p()}, {"k", f->k()}};
    if (f->modulus().has_value()) j["modulus"] = f->modulus()->coeffs();
    return j;
}
inline FieldPtr field_from_json(const json& j) {
    const auto p = j.at("p").get<std::uint64_t>();
    const auto k = j.at("k").get<unsigned>();
    std::optional<Polynomial> modulus;
    if (j.contains("modulus"))
        modulus = Polynomial(p, j.at("modulus").get<std::vector<std::uint64_t>>());
    return Field::create(p, k, std::move(modulus));
}

inline json to_json(const GroupPtr& g) {
    json comps = json::array();
    for (const auto& c : g->components()) {
        if (const auto* cy = std::get_if<CyclicDescriptor>(&c)) {
            comps.push_back(json{{"type", "cyclic"}, {"modulus", cy->modulus}});
        } else {
            comps.push_back(
                json{{"type", "field"},
                     {"field", to_json(std::get<FieldDescriptor>(c).field)}});
        }
    }
    return json{{"components", comps}};
}
inline GroupPtr group_from_json(const json& j) {
    std::vector<ComponentDescriptor> comps;
    for (const auto& c : j.at("components")) {
        if (c.at("type") == "cyclic") {
            comps.push_back(CyclicDescriptor{c.at("modulus").get<std::uint64_t>()});
        } else {
            comps.push_back(FieldDescriptor{field_from_json(c.at("field"))});
        }
    }
    return AmbientGroup::create(std::move(comps));
}

inline json to_json(const GroupElement& e) { return json(e.coords()); }

inline json to_json(const SidonConstruction& c) {
    json j;
    if (const auto* par = std::get_if<ParabolicConstruction>(&c)) {
        j["kind"] = "parabolic";
        j["p_poly"] = par->p_poly.coeffs();
        j["r_poly"] = par->r_poly.coeffs();
    } else if (const auto* w = std::get_if<WelchConstruction>(&c)) {
        j["kind"] = "welch";
        j["g"] = w->generator_code;
    } else if (const auto* go = std::get_if<GolombConstruction>(&c)) {
        j["kind"] = "golomb";
        j["g1"] = go->g1_code;
        j["g2"] = go->g2_code;
        j["lambda"] = go->lambda_code;
        j["sign"] = go->sign == GolombSign::Plus ? "+" : "-";
    } else {
        j["kind"] = "explicit";
    }
    return j;
}

inline json to_json(const SidonSet& a) {
    json elems = json::array();
    for (const auto& e : a.elements_list()) elems.push_back(e.coords());
    return json{{"group", to_json(a.group())},
                {"construction", to_json(a.construction())},
                {"elements", elems},
                {"cardinality", a.size()},
                {"delta", a.delta()}};
}

inline SidonSet sidon_set_from_json(const json& j) {
    GroupPtr group = group_from_json(j.at("group"));
    std::vector<std::uint64_t> idx;
    for (const auto& coords : j.at("elements")) {
        idx.push_back(group->index_of(coords.get<std::vector<std::uint64_t>>()));
    }
    ElementSet elems(group, std::move(idx));

    const json& c = j.at("construction");
    const std::string kind = c.at("kind").get<std::string>();
    FieldPtr base;
    for (const auto& comp : group->components()) {
        if (const auto* fd = std::get_if<FieldDescriptor>(&comp)) {
            base = fd->field;
            break;
        }
    }
    SidonConstruction construction = ExplicitConstruction{};
    if (kind == "parabolic") {
        const auto p = base->p();
        construction = ParabolicConstruction{
            Polynomial(p, c.at("p_poly").get<std::vector<std::uint64_t>>()),
            Polynomial(p, c.at("r_poly").get<std::vector<std::uint64_t>>())};
    } else if (kind == "welch") {
        construction = WelchConstruction{c.at("g").get<std::uint64_t>()};
    } else if (kind == "golomb") {
        // ambient group is Z_{q-1} x Z_{q-1}; recover the field from q - 1
        const auto m = std::get<CyclicDescriptor>(group->components().front()).modulus;
        base = Field::create(m + 1);
        construction = GolombConstruction{
            c.at("g1").get<std::uint64_t>(), c.at("g2").get<std::uint64_t>(),
            c.at("lambda").get<std::uint64_t>(),
            c.at("sign").get<std::string>() == "+" ? GolombSign::Plus : GolombSign::Minus};
    } else if (kind != "explicit") {
        throw DomainError("unknown construction kind '" + kind + "'");
    }
    return SidonSet(group, std::move(elems), std::move(construction), base);
}

inline json to_json(const SidonVerdict& v) {
    json j{{"is_sidon", v.is_sidon}};
    if (v.witness.has_value()) {
        json w = json::array();
        for (const auto& e : *v.witness) w.push_back(e.coords());
        j["witness"] = w;
    }
    return j;
}

inline json to_json(const SizeInfo& s) {
    return json{{"A", s.a}, {"B", s.b}, {"Bp", s.bp}, {"G", s.g}, {"delta", s.delta}};
}

inline json to_json(const CountReport& r) {
    return json{{"count", r.count},
                {"main_term", to_json(r.main_term)},
                {"theta", r.theta},
                {"theta_bound", r.theta_bound},
                {"within_bound", r.within_bound},
                {"sizes", to_json(r.sizes)}};
}

inline json to_json(const IntersectionReport& r) {
    return json{{"intersection", r.intersection},
                {"sumset_size", r.sumset_size},
                {"bound", r.bound},
                {"within", r.within},
                {"sizes", to_json(r.sizes)}};
}

inline json to_json(const DiscrepancyReport& r) {
    return json{{"discrepancy", to_json(r.discrepancy)},
                {"intersection", r.intersection}};
}

inline json to_json(const TranslationReport& r) {
    json j{{"holds", r.holds}, {"lhs", to_json(r.lhs)}, {"rhs", r.rhs}};
    if (r.witness_c.has_value()) j["witness_c"] = r.witness_c->coords();
    return j;
}

inline json to_json(const IncidenceReport& r) {
    return json{{"incidences", r.incidences},
                {"zero_x_incidences", r.zero_x_incidences},
                {"main_term", to_json(r.main_term)},
                {"normalized_error", r.normalized_error},
                {"error_bound", r.error_bound},
                {"within", r.within},
                {"log_encoding", to_json(r.log_encoding)}};
}

inline json to_json(const DifferenceCoverReport& r) {
    return json{{"prime", r.prime},
                {"generator", r.generator_code},
                {"m_min", r.m_min},
                {"ratio", r.ratio}};
}

inline json to_json(const SumProductReport& r) {
    return json{{"product_size", r.product_size},
                {"sum_size", r.sum_size},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"holds", r.holds}};
}

inline json to_json(const PolynomialSumReport& r) {
    return json{{"p_image_sum_size", r.p_image_sum_size},
                {"r_image_sum_size", r.r_image_sum_size},
                {"lhs", r.lhs},
                {"intersection", r.intersection},
                {"injective_on_a1", r.injective_on_a1},
                {"rhs", r.rhs},
                {"holds", r.holds}};
}

inline json to_json(const EquationReport& r) {
    json j{{"report", to_json(r.report)}};
    if (r.exists.has_value()) j["exists"] = *r.exists;
    if (r.hypothesis_met.has_value()) j["hypothesis_met"] = *r.hypothesis_met;
    return j;
}

inline json to_json(const FermatReport& r) {
    return json{{"q", r.q},
                {"r", r.r},
                {"s", r.s},
                {"Q_size", r.subgroup_q.size()},
                {"Qp_size", r.subgroup_qp.size()},
                {"Q", r.subgroup_q},
                {"Qp", r.subgroup_qp},
                {"count", r.count},
                {"main_term", to_json(r.main_term)},
                {"error_bound", r.error_bound},
                {"within", r.within},
                {"has_nontrivial", r.has_nontrivial},
                {"guaranteed", r.guaranteed}};
}

inline json to_json(const IntervalSpec& s) {
    return json{{"start", s.start}, {"length", s.length}, {"modulus", s.modulus}};
}

inline json to_json(const IntervalReport& r) {
    return json{{"count", r.count},
                {"main_term", to_json(r.main_term)},
                {"r", r.r},
                {"bound", r.bound},
                {"within", r.within}};
}

} // namespace sidonlab
