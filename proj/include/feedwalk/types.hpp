#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace feedwalk {

// Error hierarchy. Every named failure mode raised by the library derives
// from Error so callers can catch broadly or by specific condition.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidParams : Error { using Error::Error; };
struct ChargeOutOfRange : Error { using Error::Error; };
struct SpecError : Error { using Error::Error; };
struct BudgetZero : Error { using Error::Error; };
struct NoCriticalPoint : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct WithinCriticalTolerance : Error { using Error::Error; };
struct RootNotBracketed : Error { using Error::Error; };
struct MissingConstantTail : Error { using Error::Error; };
struct AmbiguousTailClass : Error { using Error::Error; };

// The quadruple (p, q, R, L) governing the walk: jump-right probabilities of
// the two site modes and the consecutive-jump counts needed to flip a mode.
struct Params {
    double p = 0.5;
    double q = 0.5;
    std::uint32_t R = 1;
    std::uint32_t L = 1;

    void validate() const {
        if (!(p > 0.0 && p < 1.0)) throw InvalidParams("p must lie in (0,1)");
        if (!(q > 0.0 && q < 1.0)) throw InvalidParams("q must lie in (0,1)");
        if (R < 1) throw InvalidParams("R must be >= 1");
        if (L < 1) throw InvalidParams("L must be >= 1");
    }
};

enum class Mode : std::uint8_t { P, Q };

// One site's state: its current bias mode plus the count of charges
// accumulated toward switching to the opposite mode.
struct SiteConfig {
    Mode mode = Mode::Q;
    std::uint32_t charges = 0;

    friend bool operator==(const SiteConfig&, const SiteConfig&) = default;
};

enum class Jump : std::int8_t { Left = -1, Right = +1 };

inline int jump_delta(Jump j) { return static_cast<int>(j); }

std::string config_token(SiteConfig c);                 // "p0", "q2", ...
SiteConfig parse_config_token(const std::string& tok);  // inverse of config_token

}  // namespace feedwalk
