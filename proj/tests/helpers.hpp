#pragma once

#include <random>

#include "qsa/measure.hpp"

// Shared builders for the unit tests. Everything is deterministic; the
// random helpers take the engine by reference so each test seeds its own.

namespace qsa::testing {

inline SpacePtr abc() { return make_space({"a", "b", "c"}); }

inline MeasureFamily family_of(SpacePtr space,
                               std::vector<std::pair<std::string, Measure>> members) {
    return MeasureFamily(std::move(space), std::move(members));
}

/// {delta_a, delta_b} on {a,b,c}: atom c is polar.
inline MeasureFamily diracs_ab(const SpacePtr& space) {
    return family_of(space, {{"da", dirac(space, "a")}, {"db", dirac(space, "b")}});
}

/// {uniform(a,b), uniform(b,c)} on {a,b,c}: no polar atoms, overlap at b.
inline MeasureFamily uniform_pair(const SpacePtr& space) {
    return family_of(space, {{"u_ab", uniform_on(space, {"a", "b"})},
                             {"u_bc", uniform_on(space, {"b", "c"})}});
}

inline QsRandomVariable rv(const SpacePtr& space, std::vector<long> numerators, long den = 1) {
    std::vector<Rat> values;
    values.reserve(numerators.size());
    for (long n : numerators) values.emplace_back(n, den);
    return QsRandomVariable(space, std::move(values));
}

inline long pick(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

inline SpacePtr random_space(std::mt19937_64& rng, long max_atoms = 6) {
    const long n = pick(rng, 2, max_atoms);
    std::vector<std::string> atoms;
    for (long i = 0; i < n; ++i) atoms.push_back(std::string(1, static_cast<char>('a' + i)));
    return make_space(std::move(atoms));
}

inline Measure random_probability(const SpacePtr& space, std::mt19937_64& rng) {
    const long q = pick(rng, 1, 16);
    std::vector<long> units(space->size(), 0);
    for (long i = 0; i < q; ++i) units[pick(rng, 0, space->size() - 1)] += 1;
    std::vector<Rat> weights(space->size());
    for (int i = 0; i < space->size(); ++i) weights[i] = Rat(units[i], q);
    return Measure(space, std::move(weights));
}

inline MeasureFamily random_family(const SpacePtr& space, std::mt19937_64& rng,
                                   long max_members = 4) {
    const long m = pick(rng, 1, max_members);
    std::vector<std::pair<std::string, Measure>> members;
    for (long k = 0; k < m; ++k)
        members.emplace_back("m" + std::to_string(k + 1), random_probability(space, rng));
    return MeasureFamily(space, std::move(members));
}

inline QsRandomVariable random_rv(const SpacePtr& space, std::mt19937_64& rng,
                                  bool nonnegative = false) {
    std::vector<Rat> values(space->size());
    for (int i = 0; i < space->size(); ++i) {
        const long num = nonnegative ? pick(rng, 0, 24) : pick(rng, -12, 12);
        values[i] = Rat(num, pick(rng, 1, 8));
    }
    return QsRandomVariable(space, std::move(values));
}

} // namespace qsa::testing
