#include "feedwalk/environment.hpp"

#include <numeric>
#include <string>

namespace feedwalk {

std::string config_token(SiteConfig c) {
    return (c.mode == Mode::P ? "p" : "q") + std::to_string(c.charges);
}

SiteConfig parse_config_token(const std::string& tok) {
    if (tok.size() < 2 || (tok[0] != 'p' && tok[0] != 'q'))
        throw SpecError("bad config token '" + tok + "' (expected p<i> or q<i>)");
    std::size_t pos = 0;
    unsigned long charges = 0;
    try {
        charges = std::stoul(tok.substr(1), &pos);
    } catch (const std::exception&) {
        throw SpecError("bad config token '" + tok + "'");
    }
    if (pos + 1 != tok.size()) throw SpecError("bad config token '" + tok + "'");
    return SiteConfig{tok[0] == 'p' ? Mode::P : Mode::Q,
                      static_cast<std::uint32_t>(charges)};
}

bool config_valid(SiteConfig c, const Params& params) {
    const std::uint32_t limit = (c.mode == Mode::P) ? params.L : params.R;
    return c.charges < limit;
}

SiteConfig make_config(Mode mode, std::uint32_t charges, const Params& params) {
    params.validate();
    SiteConfig c{mode, charges};
    if (!config_valid(c, params))
        throw ChargeOutOfRange("config " + config_token(c) + " invalid for R=" +
                               std::to_string(params.R) + " L=" + std::to_string(params.L));
    return c;
}

SiteConfig update_config(SiteConfig c, Jump jump, const Params& params) {
    if (jump == Jump::Right) {
        // Right jump: q-configs accumulate a charge until the R-th consecutive
        // right jump flips the site to (p,0); p-configs reset to (p,0).
        if (c.mode == Mode::Q && c.charges + 1 < params.R) return {Mode::Q, c.charges + 1};
        return {Mode::P, 0};
    }
    // Left jump: mirror image with roles of the modes swapped.
    if (c.mode == Mode::P && c.charges + 1 < params.L) return {Mode::P, c.charges + 1};
    return {Mode::Q, 0};
}

double jump_prob_right(SiteConfig c, const Params& params) {
    return c.mode == Mode::P ? params.p : params.q;
}

std::uint32_t config_rank(SiteConfig c, const Params& params) {
    if (c.mode == Mode::Q) return c.charges;
    return params.R + (params.L - 1 - c.charges);
}

std::strong_ordering config_compare(SiteConfig a, SiteConfig b, const Params& params) {
    return config_rank(a, params) <=> config_rank(b, params);
}

// ---- patterns and specs -----------------------------------------------------

ConfigPattern ConfigPattern::periodic(std::vector<SiteConfig> cs) {
    if (cs.empty()) throw SpecError("periodic pattern must be nonempty");
    return ConfigPattern{std::move(cs)};
}

EnvironmentSpec EnvironmentSpec::uniform(SiteConfig c) {
    return with_tails(ConfigPattern::constant(c), ConfigPattern::constant(c));
}

EnvironmentSpec EnvironmentSpec::with_tails(ConfigPattern left, ConfigPattern right) {
    EnvironmentSpec spec;
    spec.left_tail = std::move(left);
    spec.right_tail = std::move(right);
    spec.left_tail_start = 0;
    spec.right_tail_start = 0;
    return spec;
}

EnvironmentSpec EnvironmentSpec::with_overrides(ConfigPattern left, ConfigPattern right,
                                                std::map<std::int64_t, SiteConfig> ovr) {
    if (ovr.empty()) return with_tails(std::move(left), std::move(right));
    EnvironmentSpec spec;
    spec.left_tail = std::move(left);
    spec.right_tail = std::move(right);
    spec.left_tail_start = ovr.begin()->first - 1;
    spec.right_tail_start = ovr.rbegin()->first + 1;
    spec.overrides = std::move(ovr);
    return spec;
}

void EnvironmentSpec::validate(const Params& params) const {
    if (left_tail.cells.empty() || right_tail.cells.empty())
        throw SpecError("tail patterns must be nonempty");
    for (SiteConfig c : left_tail.cells)
        if (!config_valid(c, params)) throw SpecError("invalid config in left tail");
    for (SiteConfig c : right_tail.cells)
        if (!config_valid(c, params)) throw SpecError("invalid config in right tail");
    if (left_tail_start > right_tail_start)
        throw SpecError("left_tail_start must not exceed right_tail_start");
    // Overrides must exactly fill the gap between the tails so lookup is
    // total over Z.
    std::int64_t expected = left_tail_start + 1;
    for (const auto& [x, c] : overrides) {
        if (x != expected) throw SpecError("override sites must be contiguous between tails");
        if (x >= right_tail_start) throw SpecError("override site beyond right tail start");
        if (!config_valid(c, params)) throw SpecError("invalid override config");
        ++expected;
    }
    if (expected != std::max(left_tail_start + 1, right_tail_start))
        throw SpecError("override block must end at right tail start");
}

SiteConfig EnvironmentSpec::lookup(std::int64_t x) const {
    if (auto it = overrides.find(x); it != overrides.end()) return it->second;
    if (x >= right_tail_start) {
        const auto n = static_cast<std::int64_t>(right_tail.cells.size());
        return right_tail.cells[static_cast<std::size_t>((x - right_tail_start) % n)];
    }
    const auto n = static_cast<std::int64_t>(left_tail.cells.size());
    return left_tail.cells[static_cast<std::size_t>((left_tail_start - x) % n)];
}

// ---- densities --------------------------------------------------------------

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}

std::vector<Rational> densities(const EnvironmentSpec& spec, const Params& params) {
    spec.validate(params);
    const auto& cells = spec.right_tail.cells;
    const auto len = static_cast<std::int64_t>(cells.size());
    std::vector<std::int64_t> counts(params.L + 1, 0);
    for (SiteConfig c : cells) {
        if (c.mode == Mode::P)
            counts[c.charges] += 1;
        else
            counts[params.L] += 1;  // all q-mode sites pool into d_L
    }
    std::vector<Rational> d;
    d.reserve(counts.size());
    for (std::int64_t cnt : counts) d.emplace_back(cnt, len);
    return d;
}

std::vector<double> densities_real(const EnvironmentSpec& spec, const Params& params) {
    std::vector<double> out;
    for (const Rational& r : densities(spec, params)) out.push_back(r.value());
    return out;
}

}  // namespace feedwalk
