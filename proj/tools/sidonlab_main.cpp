// Command-line front end: builds the Sidon-set constructions, runs the
// counting experiments, and emits reproducible JSON/CSV report envelopes.
//
// Exit codes: 0 success, 1 a tested bound failed, 2 usage error, 3 capacity
// exceeded. Sweeps return the worst code among their items.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sidonlab/sidonlab.hpp"

using namespace sidonlab;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// option containers and small parsers

struct Options {
    std::uint64_t p = 0;
    unsigned k = 1;
    std::string modulus;   // "c0,c1,..."
    std::string p_range;   // "lo:hi" sweep over primes, k = 1

    std::string construction = "welch";
    std::string g = "auto", g1 = "auto", g2 = "auto";
    std::uint64_t lambda = 1;
    std::string sign = "+";
    std::string p_poly = "0,1";
    std::string r_poly = "0,0,1";

    std::string group_spec;    // "Z6,F7" for explicit sets
    std::string elements;      // "0,1;2,3"

    std::string set_b = "random:20";
    std::string set_bp = "random:20";
    std::string set_c = "all";
    std::string a1 = "random:8", a2 = "random:8", a3 = "random:8";
    std::string x1 = "random:4", x2 = "random:4", x3 = "random:4", x4 = "random:4";
    std::string xf = "random:3", yf = "random:3";
    std::string points = "random:20", lines = "random:20";
    std::string interval_i = "0:10", interval_j = "0:10";
    std::string variant = "garaev";
    std::string eq = "square_sum";
    std::string kind = "square";
    unsigned r = 1, s = 1;

    std::optional<std::uint64_t> seed;
    std::uint64_t samples = 1;
    std::uint64_t ceiling = kDefaultCeiling;
    std::string format = "json";
    std::string out_path;
};

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw CLI::ValidationError(what + ": expected an unsigned integer, got '" + s + "'");
    }
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s, const std::string& what) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_u64(item, what));
    return out;
}

std::vector<std::vector<std::uint64_t>> parse_element_list(const std::string& s) {
    std::vector<std::vector<std::uint64_t>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(parse_u64_list(item, "element"));
    return out;
}

// ---------------------------------------------------------------------------
// set specifications: "all" | "random:N" | "sub:d1,d2,..." | explicit list

struct SetSpec {
    enum class Kind { All, Random, Subgroup, Explicit } kind = Kind::All;
    std::uint64_t size = 0;
    std::vector<std::uint64_t> divisors;
    std::vector<std::vector<std::uint64_t>> elements;
};

SetSpec parse_set_spec(const std::string& s) {
    SetSpec spec;
    if (s == "all") {
        spec.kind = SetSpec::Kind::All;
    } else if (s.rfind("random:", 0) == 0) {
        spec.kind = SetSpec::Kind::Random;
        spec.size = parse_u64(s.substr(7), "random set size");
    } else if (s.rfind("sub:", 0) == 0) {
        spec.kind = SetSpec::Kind::Subgroup;
        spec.divisors = parse_u64_list(s.substr(4), "subgroup divisor");
    } else {
        spec.kind = SetSpec::Kind::Explicit;
        spec.elements = parse_element_list(s);
    }
    return spec;
}

ElementSet subgroup_set(const GroupPtr& g, const std::vector<std::uint64_t>& divisors,
                        std::uint64_t ceiling) {
    if (divisors.size() != g->component_count())
        throw DomainError("subgroup spec needs one divisor per component");
    // divisor d: multiples of d in a cyclic component (d | m); for a field
    // component only 0 (trivial subgroup) or 1 (everything) are meaningful
    std::vector<std::vector<std::uint64_t>> choices;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < divisors.size(); ++i) {
        const std::uint64_t m = g->component_order(i);
        const std::uint64_t d = divisors[i];
        std::vector<std::uint64_t> vals;
        if (d == 0) {
            vals.push_back(0);
        } else if (std::holds_alternative<CyclicDescriptor>(g->components()[i])) {
            if (m % d != 0) throw DomainError("subgroup divisor must divide component order");
            for (std::uint64_t v = 0; v < m; v += d) vals.push_back(v);
        } else if (d == 1) {
            for (std::uint64_t v = 0; v < m; ++v) vals.push_back(v);
        } else {
            throw DomainError("field components admit only divisors 0 and 1");
        }
        total *= vals.size();
        choices.push_back(std::move(vals));
    }
    check_capacity(total, ceiling, "subgroup materialization");
    std::vector<std::uint64_t> idx;
    idx.reserve(total);
    for (std::uint64_t n = 0; n < total; ++n) {
        std::vector<std::uint64_t> coords;
        coords.reserve(choices.size());
        std::uint64_t rem = n;
        for (std::size_t i = choices.size(); i-- > 0;) {
            coords.insert(coords.begin(), choices[i][rem % choices[i].size()]);
            rem /= choices[i].size();
        }
        idx.push_back(g->index_of(coords));
    }
    return ElementSet(g, std::move(idx));
}

ElementSet materialize_group_set(const SetSpec& spec, const GroupPtr& g, Rng* rng,
                                 std::uint64_t ceiling) {
    switch (spec.kind) {
        case SetSpec::Kind::All:
            return ElementSet::whole_group(g, ceiling);
        case SetSpec::Kind::Random: {
            if (rng == nullptr)
                throw CLI::ValidationError("--seed is required for random sets");
            return ElementSet(g, rng->sample_distinct(g->order(), spec.size));
        }
        case SetSpec::Kind::Subgroup:
            return subgroup_set(g, spec.divisors, ceiling);
        case SetSpec::Kind::Explicit:
        default: {
            std::vector<std::uint64_t> idx;
            for (const auto& coords : spec.elements) idx.push_back(g->index_of(coords));
            return ElementSet(g, std::move(idx));
        }
    }
}

// field subsets: the admissible domain (whole field or unit group) is chosen
// by the operation the subset feeds
FieldSubset materialize_field_set(const SetSpec& spec, const FieldPtr& f, bool units,
                                  Rng* rng) {
    switch (spec.kind) {
        case SetSpec::Kind::All:
            return units ? FieldSubset::units(f) : FieldSubset::whole_field(f);
        case SetSpec::Kind::Random: {
            if (rng == nullptr)
                throw CLI::ValidationError("--seed is required for random sets");
            std::vector<std::uint64_t> codes;
            if (units) {
                for (auto c : rng->sample_distinct(f->q() - 1, spec.size))
                    codes.push_back(c + 1);
            } else {
                codes = rng->sample_distinct(f->q(), spec.size);
            }
            return FieldSubset(f, std::move(codes));
        }
        case SetSpec::Kind::Explicit: {
            std::vector<std::uint64_t> codes;
            for (const auto& coords : spec.elements) {
                if (coords.size() != 1)
                    throw DomainError("field subsets take single-coordinate elements");
                codes.push_back(coords[0]);
            }
            return FieldSubset(f, std::move(codes));
        }
        case SetSpec::Kind::Subgroup:
        default:
            throw DomainError("subgroup specs apply to group sets only");
    }
}

IntervalSpec parse_interval(const std::string& s, std::uint64_t modulus, Rng* rng) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("interval spec must be start:length or random:length");
    const std::string head = s.substr(0, colon);
    const std::uint64_t len = parse_u64(s.substr(colon + 1), "interval length");
    if (head == "random") {
        if (rng == nullptr)
            throw CLI::ValidationError("--seed is required for random intervals");
        return IntervalSpec(rng->below(modulus), len, modulus);
    }
    return IntervalSpec(parse_u64(head, "interval start"), len, modulus);
}

GroupPtr parse_group_spec(const std::string& s) {
    std::vector<ComponentDescriptor> comps;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item[0] == 'Z' || item[0] == 'z') {
            comps.push_back(CyclicDescriptor{parse_u64(item.substr(1), "cyclic modulus")});
        } else if (item[0] == 'F' || item[0] == 'f') {
            const auto caret = item.find('^');
            std::uint64_t p = 0;
            unsigned k = 1;
            if (caret == std::string::npos) {
                p = parse_u64(item.substr(1), "field characteristic");
            } else {
                p = parse_u64(item.substr(1, caret - 1), "field characteristic");
                k = static_cast<unsigned>(parse_u64(item.substr(caret + 1), "field degree"));
            }
            comps.push_back(FieldDescriptor{Field::create(p, k)});
        } else {
            throw CLI::ValidationError("group component must look like Z6 or F7 or F2^3");
        }
    }
    return AmbientGroup::create(std::move(comps));
}

// ---------------------------------------------------------------------------
// execution environment per (command, prime) item

struct RunEnv {
    FieldPtr field;
    std::optional<Rng> rng;
    json config; // resolved echo
    const Options* opt = nullptr;

    Rng* rng_ptr() { return rng.has_value() ? &*rng : nullptr; }
};

FieldPtr make_field(const Options& opt, std::uint64_t p) {
    std::optional<Polynomial> modulus;
    if (!opt.modulus.empty())
        modulus = Polynomial(p, parse_u64_list(opt.modulus, "modulus coefficient"));
    return Field::create(p, opt.k, std::move(modulus));
}

FieldElement resolve_generator(const FieldPtr& f, const std::string& s) {
    if (s == "auto") return f->generator();
    const auto g = f->element(parse_u64(s, "generator"));
    if (!f->is_generator_code(g.code()))
        throw NotGeneratorError("element " + s + " does not generate F_" +
                                std::to_string(f->q()) + "^*");
    return g;
}

// For the counting commands the bounds presuppose an actual Sidon set; the
// Welch and Golomb constructions always are, a parabolic candidate is checked.
SidonSet build_construction(const Options& opt, RunEnv& env, bool require_sidon = false) {
    const FieldPtr& f = env.field;
    if (opt.construction == "parabolic") {
        const Polynomial pp(f->p(), parse_u64_list(opt.p_poly, "p-poly coefficient"));
        const Polynomial rp(f->p(), parse_u64_list(opt.r_poly, "r-poly coefficient"));
        env.config["p_poly"] = pp.coeffs();
        env.config["r_poly"] = rp.coeffs();
        SidonSet set = construct_parabolic(f, pp, rp);
        if (require_sidon && !verify_sidon(set, opt.ceiling).is_sidon)
            throw DomainError("the polynomial pair does not produce a Sidon set over F_" +
                              std::to_string(f->q()));
        return set;
    }
    if (opt.construction == "welch") {
        const auto g = resolve_generator(f, opt.g);
        env.config["g"] = g.code();
        return construct_welch(f, g);
    }
    if (opt.construction == "golomb") {
        const auto g1 = resolve_generator(f, opt.g1);
        const auto g2 = resolve_generator(f, opt.g2);
        env.config["g1"] = g1.code();
        env.config["g2"] = g2.code();
        env.config["lambda"] = opt.lambda;
        env.config["sign"] = opt.sign;
        return construct_golomb(f, g1, g2, f->element(opt.lambda),
                                opt.sign == "-" ? GolombSign::Minus : GolombSign::Plus);
    }
    throw CLI::ValidationError("unknown construction '" + opt.construction + "'");
}

// result payload plus whether a tested bound failed
struct Outcome {
    json payload;
    bool violated = false;
};

// ---------------------------------------------------------------------------
// command runners

Outcome run_field_info(const Options& /*opt*/, RunEnv& env) {
    const FieldPtr& f = env.field;
    json j = to_json(f);
    j["q"] = f->q();
    j["generator"] = f->generator_code();
    j["unit_order_factors"] = f->unit_order_factors();
    return {j, false};
}

Outcome run_sidon_build(const Options& opt, RunEnv& env) {
    const SidonSet set = build_construction(opt, env);
    json j = to_json(set);
    j["delta_sign"] = set.delta_sign();
    return {j, false};
}

Outcome run_sidon_verify(const Options& opt, RunEnv& env) {
    SidonSet set = [&] {
        if (!opt.group_spec.empty()) {
            auto g = parse_group_spec(opt.group_spec);
            std::vector<GroupElement> elems;
            for (const auto& coords : parse_element_list(opt.elements))
                elems.push_back(g->element(coords));
            env.config["group"] = opt.group_spec;
            env.config["elements"] = opt.elements;
            return SidonSet::explicit_set(g, elems);
        }
        return build_construction(opt, env);
    }();
    const SidonVerdict verdict = verify_sidon(set, opt.ceiling);
    json j = to_json(verdict);
    j["cardinality"] = set.size();
    j["delta"] = set.delta();
    j["group_order"] = set.group()->order();
    return {j, !verdict.is_sidon};
}

Outcome run_count_theta(const Options& opt, RunEnv& env) {
    const SidonSet set = build_construction(opt, env, /*require_sidon=*/true);
    const auto b = materialize_group_set(parse_set_spec(opt.set_b), set.group(),
                                         env.rng_ptr(), opt.ceiling);
    const auto bp = materialize_group_set(parse_set_spec(opt.set_bp), set.group(),
                                          env.rng_ptr(), opt.ceiling);
    env.config["B_size"] = b.size();
    env.config["Bp_size"] = bp.size();
    const CountReport rep = theta_report(set, b, bp, PairCountStrategy::Auto, opt.ceiling);
    return {to_json(rep), !rep.within_bound};
}

Outcome run_count_intersection(const Options& opt, RunEnv& env) {
    const SidonSet set = build_construction(opt, env, /*require_sidon=*/true);
    const auto b = materialize_group_set(parse_set_spec(opt.set_b), set.group(),
                                         env.rng_ptr(), opt.ceiling);
    const auto bp = materialize_group_set(parse_set_spec(opt.set_bp), set.group(),
                                          env.rng_ptr(), opt.ceiling);
    env.config["B_size"] = b.size();
    env.config["Bp_size"] = bp.size();
    const IntersectionReport rep = intersection_report(set, b, bp, opt.ceiling);
    return {to_json(rep), !rep.within};
}

Outcome run_count_discrepancy(const Options& opt, RunEnv& env) {
    const SidonSet set = build_construction(opt, env, /*require_sidon=*/true);
    const auto b = materialize_group_set(parse_set_spec(opt.set_b), set.group(),
                                         env.rng_ptr(), opt.ceiling);
    env.config["B_size"] = b.size();
    return {to_json(discrepancy(set, b)), false};
}

Outcome run_count_translation(const Options& opt, RunEnv& env) {
    const SidonSet set = build_construction(opt, env, /*require_sidon=*/true);
    const auto b = materialize_group_set(parse_set_spec(opt.set_b), set.group(),
                                         env.rng_ptr(), opt.ceiling);
    const auto c = opt.set_c == "B"
                       ? b
                       : materialize_group_set(parse_set_spec(opt.set_c), set.group(),
                                               env.rng_ptr(), opt.ceiling);
    env.config["B_size"] = b.size();
    env.config["C_size"] = c.size();
    const TranslationReport rep = translation_lemma_check(set, b, c);
    return {to_json(rep), !rep.holds};
}

Outcome run_exp_incidence(const Options& opt, RunEnv& env) {
    const FieldPtr& f = env.field;
    const std::uint64_t q = f->q();
    auto parse_pairs = [&](const std::string& s, bool lines) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
        const SetSpec spec = parse_set_spec(s);
        if (spec.kind == SetSpec::Kind::Random) {
            Rng* rng = env.rng_ptr();
            if (rng == nullptr)
                throw CLI::ValidationError("--seed is required for random instances");
            for (std::uint64_t i = 0; i < spec.size; ++i) {
                if (lines) {
                    out.push_back({rng->below(q - 1) + 1, rng->below(q)});
                } else {
                    out.push_back({rng->below(q), rng->below(q)});
                }
            }
        } else if (spec.kind == SetSpec::Kind::Explicit) {
            for (const auto& coords : spec.elements) {
                if (coords.size() != 2)
                    throw DomainError("points and lines take two coordinates");
                out.push_back({coords[0], coords[1]});
            }
        } else {
            throw CLI::ValidationError("points/lines accept random:N or explicit lists");
        }
        return out;
    };
    const auto points = parse_pairs(opt.points, false);
    const auto lines = parse_pairs(opt.lines, true);
    env.config["points"] = points.size();
    env.config["lines"] = lines.size();
    const IncidenceReport rep =
        incidence_experiment(IncidenceInstance(f, points, lines), opt.ceiling);
    return {to_json(rep), !(rep.within && rep.log_encoding.within_bound)};
}

Outcome run_exp_diffcover(const Options& opt, RunEnv& env) {
    const auto g = resolve_generator(env.field, opt.g);
    env.config["g"] = g.code();
    const DifferenceCoverReport rep = difference_cover_min(env.field, g);
    json j = to_json(rep);
    const bool violated = rep.ratio > std::sqrt(2.0);
    j["below_sqrt2"] = !violated;
    return {j, violated};
}

Outcome run_exp_sumproduct(const Options& opt, RunEnv& env) {
    const FieldPtr& f = env.field;
    Rng* rng = env.rng_ptr();
    if (opt.variant == "garaev") {
        const auto a1 = materialize_field_set(parse_set_spec(opt.a1), f, true, rng);
        const auto a2 = materialize_field_set(parse_set_spec(opt.a2), f, true, rng);
        const auto a3 = materialize_field_set(parse_set_spec(opt.a3), f, false, rng);
        env.config["A1_size"] = a1.size();
        env.config["A2_size"] = a2.size();
        env.config["A3_size"] = a3.size();
        const SumProductReport rep = sum_product_check(a1, a2, a3, opt.ceiling);
        return {to_json(rep), !rep.holds};
    }
    if (opt.variant == "shifted") {
        auto a1 = materialize_field_set(parse_set_spec(opt.a1), f, true, rng);
        if (parse_set_spec(opt.a1).kind != SetSpec::Kind::Explicit) {
            // the shifted variant needs -1 out of A1; drop it from sampled sets
            std::vector<std::uint64_t> codes;
            for (auto c : a1.codes())
                if (c != f->neg(1)) codes.push_back(c);
            a1 = FieldSubset(f, std::move(codes));
        }
        const auto a2 = materialize_field_set(parse_set_spec(opt.a2), f, true, rng);
        const auto a3 = materialize_field_set(parse_set_spec(opt.a3), f, true, rng);
        env.config["A1_size"] = a1.size();
        env.config["A2_size"] = a2.size();
        env.config["A3_size"] = a3.size();
        const SumProductReport rep = shifted_product_check(a1, a2, a3, opt.ceiling);
        return {to_json(rep), !rep.holds};
    }
    if (opt.variant == "polynomial") {
        const Polynomial pp(f->p(), parse_u64_list(opt.p_poly, "p-poly coefficient"));
        const Polynomial rp(f->p(), parse_u64_list(opt.r_poly, "r-poly coefficient"));
        const auto a1 = materialize_field_set(parse_set_spec(opt.a1), f, false, rng);
        const auto a2 = materialize_field_set(parse_set_spec(opt.a2), f, false, rng);
        const auto a3 = materialize_field_set(parse_set_spec(opt.a3), f, false, rng);
        env.config["p_poly"] = pp.coeffs();
        env.config["r_poly"] = rp.coeffs();
        env.config["A1_size"] = a1.size();
        env.config["A2_size"] = a2.size();
        env.config["A3_size"] = a3.size();
        const PolynomialSumReport rep =
            polynomial_sum_check(f, pp, rp, a1, a2, a3, opt.ceiling);
        return {to_json(rep), !rep.holds};
    }
    throw CLI::ValidationError("unknown sum-product variant '" + opt.variant + "'");
}

Outcome run_exp_equation(const Options& opt, RunEnv& env) {
    const FieldPtr& f = env.field;
    Rng* rng = env.rng_ptr();
    if (opt.eq == "hyperbola" || opt.eq == "product_fibers" || opt.eq == "square_fibers") {
        const FiberedKind kind = opt.eq == "hyperbola"       ? FiberedKind::Hyperbola
                                 : opt.eq == "product_fibers" ? FiberedKind::Product
                                                              : FiberedKind::SquareOfSum;
        const bool unit_keys = kind != FiberedKind::SquareOfSum;
        const bool unit_values = kind == FiberedKind::Hyperbola;
        auto build_family = [&](const std::string& s) {
            const SetSpec spec = parse_set_spec(s);
            std::map<std::uint64_t, std::vector<std::uint64_t>> fibers;
            const std::uint64_t lo = unit_keys ? 1 : 0;
            if (spec.kind == SetSpec::Kind::Random) {
                if (rng == nullptr)
                    throw CLI::ValidationError("--seed is required for random fibers");
                for (std::uint64_t key = lo; key < f->q(); ++key) {
                    const std::uint64_t n = rng->below(spec.size + 1);
                    std::vector<std::uint64_t> values;
                    for (auto v : rng->sample_distinct(f->q() - (unit_values ? 1 : 0), n))
                        values.push_back(v + (unit_values ? 1 : 0));
                    fibers[key] = std::move(values);
                }
            } else if (spec.kind == SetSpec::Kind::All) {
                for (std::uint64_t key = lo; key < f->q(); ++key) {
                    std::vector<std::uint64_t> values;
                    for (std::uint64_t v = unit_values ? 1 : 0; v < f->q(); ++v)
                        values.push_back(v);
                    fibers[key] = std::move(values);
                }
            } else {
                throw CLI::ValidationError("fibers accept random:N or all");
            }
            return FiberedFamily(f, std::move(fibers));
        };
        const auto xfam = build_family(opt.xf);
        const auto yfam = build_family(opt.yf);
        env.config["X_mass"] = xfam.mass();
        env.config["Y_mass"] = yfam.mass();
        const CountReport rep = fibered_solution_count(kind, xfam, yfam, opt.ceiling);
        return {to_json(rep), !rep.within_bound};
    }

    NamedEquation eq;
    if (opt.eq == "square_sum") eq = NamedEquation::SquareSum;
    else if (opt.eq == "product_sum") eq = NamedEquation::ProductSum;
    else if (opt.eq == "bilinear") eq = NamedEquation::Bilinear;
    else if (opt.eq == "shkredov") eq = NamedEquation::Shkredov;
    else throw CLI::ValidationError("unknown equation '" + opt.eq + "'");

    const bool units12 = eq == NamedEquation::ProductSum || eq == NamedEquation::Bilinear;
    const bool uses_x34 = eq != NamedEquation::Shkredov;
    const auto s1 = materialize_field_set(parse_set_spec(opt.x1), f, units12, rng);
    const auto s2 = materialize_field_set(parse_set_spec(opt.x2), f, units12, rng);
    const auto s3 = uses_x34 ? materialize_field_set(parse_set_spec(opt.x3), f, false, rng)
                             : FieldSubset(f, {});
    const auto s4 = uses_x34 ? materialize_field_set(parse_set_spec(opt.x4), f, false, rng)
                             : FieldSubset(f, {});
    env.config["X1_size"] = s1.size();
    env.config["X2_size"] = s2.size();
    if (uses_x34) {
        env.config["X3_size"] = s3.size();
        env.config["X4_size"] = s4.size();
    }
    const EquationReport rep = named_equation_count(eq, s1, s2, s3, s4, opt.ceiling);
    bool violated = !rep.report.within_bound;
    if (rep.hypothesis_met.has_value() && *rep.hypothesis_met && !*rep.exists)
        violated = true;
    return {to_json(rep), violated};
}

Outcome run_exp_fermat(const Options& opt, RunEnv& env) {
    const FermatReport rep = fermat_subgroup(env.field, opt.r, opt.s);
    const bool violated = !rep.within || (rep.guaranteed && !rep.has_nontrivial);
    return {to_json(rep), violated};
}

Outcome run_exp_interval(const Options& opt, RunEnv& env) {
    const FieldPtr& f = env.field;
    const auto g = resolve_generator(f, opt.g);
    env.config["g"] = g.code();
    const IntervalSpec i_spec = parse_interval(opt.interval_i, f->q() - 1, env.rng_ptr());
    const IntervalSpec j_spec = parse_interval(opt.interval_j, f->q() - 1, env.rng_ptr());
    env.config["I"] = to_json(i_spec);
    env.config["J"] = to_json(j_spec);
    const IntervalReport rep =
        interval_distribution(f, g, i_spec, j_spec, f->element(opt.lambda), opt.r);
    return {to_json(rep), !rep.within};
}

Outcome run_exp_image(const Options& opt, RunEnv& env) {
    const FieldPtr& f = env.field;
    const ImageKind kind = opt.kind == "exp" ? ImageKind::Exp : ImageKind::Square;
    const std::uint64_t i_mod = kind == ImageKind::Exp ? f->q() - 1 : f->q();
    const IntervalSpec i_spec = parse_interval(opt.interval_i, i_mod, env.rng_ptr());
    const IntervalSpec j_spec = parse_interval(opt.interval_j, f->q(), env.rng_ptr());
    env.config["I"] = to_json(i_spec);
    env.config["J"] = to_json(j_spec);
    return {to_json(interval_image_count(f, kind, i_spec, j_spec)), false};
}

// ---------------------------------------------------------------------------
// envelopes, sweeps, output

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void flatten(const json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (j.is_array()) {
        return; // arrays are omitted from CSV summaries
    } else {
        out.push_back({prefix, j.is_string() ? j.get<std::string>() : j.dump()});
    }
}

using Runner = Outcome (*)(const Options&, RunEnv&);

int execute(const Options& opt, const std::string& command, Runner runner) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!opt.out_path.empty()) {
        file.open(opt.out_path);
        if (!file) {
            std::cerr << "cannot open output file " << opt.out_path << "\n";
            return 2;
        }
        os = &file;
    }

    std::vector<std::uint64_t> primes;
    if (!opt.p_range.empty()) {
        const auto colon = opt.p_range.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--p-range expects lo:hi");
        const std::uint64_t lo = parse_u64(opt.p_range.substr(0, colon), "sweep start");
        const std::uint64_t hi = parse_u64(opt.p_range.substr(colon + 1), "sweep end");
        for (std::uint64_t p = lo; p <= hi; ++p)
            if (Field::is_prime(p)) primes.push_back(p);
        if (primes.empty()) throw CLI::ValidationError("no primes in --p-range");
    } else {
        if (opt.p == 0 && opt.group_spec.empty())
            throw CLI::ValidationError("--p is required");
        primes.push_back(opt.p);
    }
    const bool sweep = !opt.p_range.empty();

    if (opt.samples < 1) throw CLI::ValidationError("--samples must be >= 1");
    const bool multi = sweep || opt.samples > 1;

    int exit_code = 0;
    bool csv_header_written = false;
    for (const std::uint64_t p : primes) {
        for (std::uint64_t sample = 0; sample < opt.samples; ++sample) {
            RunEnv env;
            env.opt = &opt;
            env.config = json{{"command", command}, {"p", p}, {"k", opt.k}};
            if (!opt.group_spec.empty()) env.config["p"] = nullptr;
            env.config["ceiling"] = opt.ceiling;
            if (opt.seed.has_value()) {
                const std::uint64_t item_seed =
                    multi ? Rng::derive(*opt.seed, (p << 20) + sample) : *opt.seed;
                env.config["seed"] = *opt.seed;
                env.config["item_seed"] = item_seed;
                env.rng.emplace(item_seed);
            }
            if (opt.samples > 1) env.config["sample"] = sample;
            if (p != 0) env.field = make_field(opt, p);

            Outcome outcome;
            try {
                outcome = runner(opt, env);
            } catch (const CapacityError& e) {
                std::cerr << "capacity error: " << e.what() << "\n";
                return 3;
            }
            if (outcome.violated) exit_code = 1;

            json envelope{{"tool", "sidonlab"},
                          {"version", kVersion},
                          {"timestamp", iso_timestamp()},
                          {"config", env.config},
                          {"result", outcome.payload}};
            envelope["violated"] = outcome.violated;

            if (opt.format == "csv") {
                std::vector<std::pair<std::string, std::string>> cells;
                flatten(env.config, "config", cells);
                flatten(outcome.payload, "result", cells);
                cells.push_back({"violated", outcome.violated ? "true" : "false"});
                if (!csv_header_written) {
                    for (std::size_t i = 0; i < cells.size(); ++i)
                        (*os) << (i ? "," : "") << cells[i].first;
                    (*os) << "\n";
                    csv_header_written = true;
                }
                for (std::size_t i = 0; i < cells.size(); ++i)
                    (*os) << (i ? "," : "") << cells[i].second;
                (*os) << "\n";
            } else if (multi) {
                (*os) << envelope.dump() << "\n"; // one object per line
            } else {
                (*os) << envelope.dump(2) << "\n";
            }
        }
    }
    return exit_code;
}

void add_common_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--p", opt.p, "prime characteristic");
    cmd->add_option("--k", opt.k, "extension degree (default 1)");
    cmd->add_option("--modulus", opt.modulus,
                    "modulus polynomial coefficients, low degree first");
    cmd->add_option("--p-range", opt.p_range, "sweep over primes lo:hi (k = 1)");
    cmd->add_option("--samples", opt.samples, "independent draws per sweep item");
    cmd->add_option("--seed", opt.seed, "seed for any random sampling");
    cmd->add_option("--ceiling", opt.ceiling, "brute-force work ceiling");
    cmd->add_option("--format", opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", opt.out_path, "output file (default stdout)");
}

void add_construction_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--construction", opt.construction,
                    "parabolic | welch | golomb (default welch)");
    cmd->add_option("--g", opt.g, "generator code or 'auto'");
    cmd->add_option("--g1", opt.g1, "first Golomb generator or 'auto'");
    cmd->add_option("--g2", opt.g2, "second Golomb generator or 'auto'");
    cmd->add_option("--lambda", opt.lambda, "Golomb/interval target, nonzero");
    cmd->add_option("--sign", opt.sign, "Golomb sign + or -")
        ->check(CLI::IsMember({"+", "-"}));
    cmd->add_option("--p-poly", opt.p_poly, "parabolic p(x) coefficients, low first");
    cmd->add_option("--r-poly", opt.r_poly, "parabolic r(x) coefficients, low first");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sidonlab: dense Sidon sets in finite groups and the exact "
                 "counting experiments they certify"};
    app.require_subcommand(1);
    Options opt;

    struct Entry {
        std::string name;
        Runner runner;
    };
    std::vector<std::pair<CLI::App*, Entry>> dispatch;

    auto* field = app.add_subcommand("field", "field inspection");
    auto* field_info = field->add_subcommand("info", "describe F_q and its generator");
    add_common_options(field_info, opt);
    dispatch.push_back({field_info, {"field info", run_field_info}});

    auto* sidon = app.add_subcommand("sidon", "construct and verify Sidon sets");
    auto* sidon_build = sidon->add_subcommand("build", "construct a Sidon set");
    add_common_options(sidon_build, opt);
    add_construction_options(sidon_build, opt);
    dispatch.push_back({sidon_build, {"sidon build", run_sidon_build}});

    auto* sidon_verify = sidon->add_subcommand("verify", "exhaustive Sidon check");
    add_common_options(sidon_verify, opt);
    add_construction_options(sidon_verify, opt);
    sidon_verify->add_option("--group", opt.group_spec,
                             "explicit ambient group, e.g. Z6,F7 or F2^3");
    sidon_verify->add_option("--elements", opt.elements,
                             "explicit elements: coords comma-separated, elements by ';'");
    dispatch.push_back({sidon_verify, {"sidon verify", run_sidon_verify}});

    auto* count = app.add_subcommand("count", "counting statistics and bounds");
    auto* count_theta = count->add_subcommand("theta", "pair count against the theta bound");
    auto* count_inter = count->add_subcommand("intersection", "intersection upper bound");
    auto* count_disc = count->add_subcommand("discrepancy", "exact discrepancy E_A(B)");
    auto* count_trans = count->add_subcommand("translation", "translation lemma witness search");
    for (auto* cmd : {count_theta, count_inter, count_disc, count_trans}) {
        add_common_options(cmd, opt);
        add_construction_options(cmd, opt);
        cmd->add_option("--B", opt.set_b, "set B: all | random:N | sub:d1,d2 | explicit");
    }
    count_theta->add_option("--Bp", opt.set_bp, "set B'");
    count_inter->add_option("--Bp", opt.set_bp, "set B'");
    count_trans->add_option("--C", opt.set_c, "set C (or 'B' to reuse B)");
    dispatch.push_back({count_theta, {"count theta", run_count_theta}});
    dispatch.push_back({count_inter, {"count intersection", run_count_intersection}});
    dispatch.push_back({count_disc, {"count discrepancy", run_count_discrepancy}});
    dispatch.push_back({count_trans, {"count translation", run_count_translation}});

    auto* exp = app.add_subcommand("exp", "per-theorem experiments");
    auto* exp_inc = exp->add_subcommand("incidence", "point-line incidence count");
    add_common_options(exp_inc, opt);
    exp_inc->add_option("--points", opt.points, "random:N or explicit x,y;x,y");
    exp_inc->add_option("--lines", opt.lines, "random:N or explicit slope,intercept;...");
    dispatch.push_back({exp_inc, {"exp incidence", run_exp_incidence}});

    auto* exp_cover = exp->add_subcommand("diffcover", "minimal M with {g^x-g^y} = F_p");
    add_common_options(exp_cover, opt);
    exp_cover->add_option("--g", opt.g, "generator code or 'auto'");
    dispatch.push_back({exp_cover, {"exp diffcover", run_exp_diffcover}});

    auto* exp_sp = exp->add_subcommand("sumproduct", "sum-product witness inequalities");
    add_common_options(exp_sp, opt);
    exp_sp->add_option("--variant", opt.variant, "garaev | shifted | polynomial");
    exp_sp->add_option("--A1", opt.a1, "set A1: all | random:N | explicit");
    exp_sp->add_option("--A2", opt.a2, "set A2");
    exp_sp->add_option("--A3", opt.a3, "set A3");
    exp_sp->add_option("--p-poly", opt.p_poly, "polynomial variant p(x)");
    exp_sp->add_option("--r-poly", opt.r_poly, "polynomial variant r(x)");
    dispatch.push_back({exp_sp, {"exp sumproduct", run_exp_sumproduct}});

    auto* exp_eq = exp->add_subcommand("equation", "fibered and named equation solution counts");
    add_common_options(exp_eq, opt);
    exp_eq->add_option("--eq", opt.eq,
                       "square_sum | product_sum | bilinear | shkredov | hyperbola | "
                       "product_fibers | square_fibers");
    exp_eq->add_option("--X1", opt.x1, "set X1");
    exp_eq->add_option("--X2", opt.x2, "set X2");
    exp_eq->add_option("--X3", opt.x3, "set X3");
    exp_eq->add_option("--X4", opt.x4, "set X4");
    exp_eq->add_option("--XF", opt.xf, "fibered X family: random:N or all");
    exp_eq->add_option("--YF", opt.yf, "fibered Y family: random:N or all");
    dispatch.push_back({exp_eq, {"exp equation", run_exp_equation}});

    auto* exp_fermat = exp->add_subcommand("fermat", "x^r + y^s = 1 on power subgroups");
    add_common_options(exp_fermat, opt);
    exp_fermat->add_option("--r", opt.r, "first exponent");
    exp_fermat->add_option("--s", opt.s, "second exponent");
    dispatch.push_back({exp_fermat, {"exp fermat", run_exp_fermat}});

    auto* exp_interval = exp->add_subcommand("interval", "g^x - g^y = lambda on intervals");
    add_common_options(exp_interval, opt);
    exp_interval->add_option("--g", opt.g, "generator code or 'auto'");
    exp_interval->add_option("--I", opt.interval_i, "interval start:length or random:length");
    exp_interval->add_option("--J", opt.interval_j, "interval start:length or random:length");
    exp_interval->add_option("--lambda", opt.lambda, "target value, nonzero");
    exp_interval->add_option("--r", opt.r, "bound sharpening exponent r >= 1");
    dispatch.push_back({exp_interval, {"exp interval", run_exp_interval}});

    auto* exp_image = exp->add_subcommand("image", "interval image counts x^2 / g^x");
    add_common_options(exp_image, opt);
    exp_image->add_option("--kind", opt.kind, "square | exp")
        ->check(CLI::IsMember({"square", "exp"}));
    exp_image->add_option("--I", opt.interval_i, "source interval start:length");
    exp_image->add_option("--J", opt.interval_j, "target interval start:length");
    dispatch.push_back({exp_image, {"exp image", run_exp_image}});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        for (const auto& [cmd, entry] : dispatch) {
            if (cmd->parsed()) return execute(opt, entry.name, entry.runner);
        }
        std::cerr << "no command selected\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
