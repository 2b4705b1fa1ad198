#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "feedwalk/types.hpp"

namespace feedwalk {

// Stationary fraction of right jumps at a single site. The walk is right
// transient when alpha > 1/2 and left transient when alpha < 1/2.
double alpha(const Params& params);

// |alpha - 1/2| at or below this is treated as critical.
inline constexpr double kCriticalTol = 1e-9;

enum class Verdict { TransientRight, TransientLeft, Recurrent, MixedTransient, Unknown };

std::string verdict_name(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Unknown;
    std::string rule;  // e.g. "Thm1", "Thm8.iii", "Thm9.i.d", "Cor1"
    std::map<std::string, double> certificates;
    std::string note;  // reason text, mainly for Unknown verdicts
};

Classification classify_noncritical(const Params& params, double tol = kCriticalTol);

struct CriticalPoint {
    double value = 0.0;
    bool maybe_nonunique = false;
};

// Critical p for fixed (q, R, L): closed form when L = 1, otherwise a
// bracketed solve of alpha(p) = 1/2. For q > 1/2 and L >= 2 the root nearest
// 1-q is returned with the non-uniqueness flag set.
CriticalPoint critical_p0(double q, std::uint32_t R, std::uint32_t L);

// Critical q for fixed p when R = 1 (closed form).
double critical_q0(double p, std::uint32_t L);

enum class SpeedMethod { L1Polynomial, R1LinearSystem, R1L1Closed };

struct SpeedResult {
    double speed = 0.0;
    SpeedMethod method = SpeedMethod::L1Polynomial;
    double t_star = 0.0;          // L1Polynomial
    double gamma = 0.0;           // L1Polynomial: expected visits per tail site
    std::vector<double> a;        // R1LinearSystem: expected site-to-site times
};

// Polynomial whose unique root in (1-q, 1) determines the L = 1 speed.
double speed_poly_L1(double t, const Params& params);

// Speed for L = 1, alpha > 1/2, with an all-(q,0) right tail.
SpeedResult speed_L1(const Params& params);

// Speed for R = 1, alpha > 1/2, given right-tail densities d_0..d_L.
SpeedResult speed_R1(const Params& params, const std::vector<double>& d);

// R = L = 1 closed form, d = limiting right density of (p,0) sites.
double speed_RL1_closed(const Params& params, double d);

// Session mean E(S_i) (any parameters) and its critical L = 1 simplification.
double mean_S(const Params& params, std::uint32_t i);
double mean_S_critical_L1(double q, std::uint32_t R, std::uint32_t i);

// Second moment E(S_0^2) (any parameters) and its critical L = 1 form.
double second_moment_S0(const Params& params);
double second_moment_S0_critical_L1(double q, std::uint32_t R);

// Critical-case classification polynomials for L = 1.
double poly_P_Ri(double q, std::uint32_t R, std::uint32_t i);
double poly_P_RR(double q, std::uint32_t R);
double poly_P_RR_tilde(double q, std::uint32_t R);  // P_{R,R} = q(1-q)^2 * tilde

// Unique root of poly_P_RR_tilde in (0, 1/2).
double q_star(std::uint32_t R);

// Large-R classification polynomial and the root a_k of its second factor.
double poly_Q_k(double q, std::uint32_t k);
double a_k_root(std::uint32_t k);

// Drift-to-variance ratio for the critical L = 1 case; the verdict flips at 1.
double theta_L1(double q, std::uint32_t R, std::uint32_t i);

struct ThetaRL2 {
    double p0 = 0.0, p1 = 0.0, q0 = 0.0, q1 = 0.0;
};

// The four limiting ratios for the critical R = L = 2 case (p = 1-q).
ThetaRL2 theta_RL2(double q);

double q1_star();  // root of q^2 + 3q - 1 in (0,1): theta^{(p,0)} = 1
double q2_star();  // root of q^3 + q - 1 in (0,1): theta^{(q,0)} = 1

// Classifier for L = 1, R >= 2 at criticality. Tails are given as the
// constant configuration, or nullopt for a not-eventually-constant tail.
Classification classify_critical_L1(const Params& params,
                                    std::optional<SiteConfig> right_tail,
                                    std::optional<SiteConfig> left_tail);

// Same situation mirrored to R = 1, L >= 2 via the parameter/environment
// reflection; tails swap sides and modes swap.
Classification classify_critical_R1(const Params& params,
                                    std::optional<SiteConfig> right_tail,
                                    std::optional<SiteConfig> left_tail);

// Tail descriptors for the critical R = L = 2 case table.
enum class TailClass { IsP0, IsQ0, NeverP0, NeverQ0, ConstantOther };

std::string tail_class_name(TailClass t);

Classification classify_RL2(double q, TailClass right, TailClass left);

// R = L = 1 at criticality (p = 1-q): always recurrent; for q > 1/2 the
// statement needs constant tails, flagged in the certificates.
Classification classify_critical_RL1(double q);

}  // namespace feedwalk
