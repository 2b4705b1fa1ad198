#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "feedwalk/types.hpp"

namespace feedwalk {

// ---- single-site configuration operations ----------------------------------

SiteConfig make_config(Mode mode, std::uint32_t charges, const Params& params);

bool config_valid(SiteConfig c, const Params& params);

// Deterministic charge-update automaton: the configuration a site is left in
// after the walk jumps from it in the given direction.
SiteConfig update_config(SiteConfig c, Jump jump, const Params& params);

// Probability that the next jump from a site in configuration c goes right.
double jump_prob_right(SiteConfig c, const Params& params);

// Rank in the domination order: (q,0) lowest, then q-configs ascending in
// charges, then p-configs descending in charges, (p,0) highest.
std::uint32_t config_rank(SiteConfig c, const Params& params);

std::strong_ordering config_compare(SiteConfig a, SiteConfig b, const Params& params);

// ---- environments -----------------------------------------------------------

// Eventually-periodic half-line pattern. A constant tail is a length-1 pattern.
struct ConfigPattern {
    std::vector<SiteConfig> cells;

    static ConfigPattern constant(SiteConfig c) { return ConfigPattern{{c}}; }
    static ConfigPattern periodic(std::vector<SiteConfig> cs);

    bool is_constant() const { return cells.size() == 1; }
    std::size_t period() const { return cells.size(); }
};

// Piecewise description of an initial environment over all of Z: periodic
// tails on both sides plus a finite block of per-site overrides between them.
// Tail patterns are anchored at their start and repeat moving outward.
struct EnvironmentSpec {
    ConfigPattern left_tail = ConfigPattern::constant({Mode::Q, 0});
    ConfigPattern right_tail = ConfigPattern::constant({Mode::Q, 0});
    std::map<std::int64_t, SiteConfig> overrides;
    std::int64_t left_tail_start = 0;
    std::int64_t right_tail_start = 0;

    static EnvironmentSpec uniform(SiteConfig c);
    static EnvironmentSpec with_tails(ConfigPattern left, ConfigPattern right);
    // Tail starts derived from the override block, which must be contiguous.
    static EnvironmentSpec with_overrides(ConfigPattern left, ConfigPattern right,
                                          std::map<std::int64_t, SiteConfig> ovr);

    void validate(const Params& params) const;
    SiteConfig lookup(std::int64_t x) const;
};

inline SiteConfig env_lookup(const EnvironmentSpec& spec, std::int64_t x) {
    return spec.lookup(x);
}

// Exact fraction used for pattern densities.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
    Rational operator+(const Rational& o) const;
};

// Right-tail densities d_0..d_L: exact frequency of each (p,i) class in the
// right tail pattern, with d_L the frequency of q-mode sites.
std::vector<Rational> densities(const EnvironmentSpec& spec, const Params& params);

std::vector<double> densities_real(const EnvironmentSpec& spec, const Params& params);

}  // namespace feedwalk
