#pragma once

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>
#include <xsimp/csg.hpp>

namespace testsupport {

inline std::uint64_t seed() {
    if (const char* s = std::getenv("XSIMP_SEED")) return std::stoull(s);
    return 20240611ULL;
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(seed());
    return g;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline std::vector<xsimp::Family> families(int max_param = 3) {
    using xsimp::Family;
    using xsimp::Kind;
    std::vector<Family> out{Family(Kind::trivial), Family(Kind::reflexive), Family(Kind::cyclic), Family(Kind::dihedral)};
    for (int p = 1; p <= max_param; ++p) {
        out.emplace_back(Kind::ncyclic, p);
        out.emplace_back(Kind::ndihedral, p);
        out.emplace_back(Kind::quaternionic, p);
    }
    return out;
}

} // namespace testsupport

#include <xsimp/chain.hpp>

template <>
struct Catch::StringMaker<xsimp::AbelianGroup> {
    static std::string convert(const xsimp::AbelianGroup& g) { return g.str(); }
};
