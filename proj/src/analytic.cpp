#include "feedwalk/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "feedwalk/environment.hpp"

namespace feedwalk {

namespace {

double ipow(double x, std::uint32_t n) {
    double r = 1.0;
    while (n) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

double horner(const std::vector<double>& coeffs_desc, double x) {
    double acc = 0.0;
    for (double c : coeffs_desc) acc = acc * x + c;
    return acc;
}

// Bracketed root solve: bisection down to a coarse bracket, then Newton steps
// with a numeric derivative, falling back to bisection whenever a step leaves
// the bracket. Resolves to machine precision.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw RootNotBracketed("root not bracketed");
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0) == (flo > 0)) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo <= 4e-16 * std::max(1.0, std::abs(x))) break;
        const double h = 1e-7 * std::max(1.0, std::abs(x));
        const double d = (f(x + h) - f(x - h)) / (2 * h);
        double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double alpha(const Params& params) {
    params.validate();
    const double p = params.p, q = params.q;
    const double qR = ipow(q, params.R);
    const double cL = ipow(1 - p, params.L);
    const double a = (1 - q) * qR * (1 - cL);
    const double b = p * cL * (1 - qR);
    return (p * a + q * b) / (a + b);
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::TransientRight: return "TransientRight";
        case Verdict::TransientLeft: return "TransientLeft";
        case Verdict::Recurrent: return "Recurrent";
        case Verdict::MixedTransient: return "MixedTransient";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

Classification classify_noncritical(const Params& params, double tol) {
    const double a = alpha(params);
    if (std::abs(a - 0.5) <= tol)
        throw WithinCriticalTolerance("alpha within critical tolerance; use a critical classifier");
    Classification c;
    c.verdict = a > 0.5 ? Verdict::TransientRight : Verdict::TransientLeft;
    c.rule = "Thm1";
    c.certificates["alpha"] = a;
    return c;
}

CriticalPoint critical_p0(double q, std::uint32_t R, std::uint32_t L) {
    if (!(q > 0 && q < 1) || R < 1 || L < 1)
        throw InvalidParams("critical_p0 needs q in (0,1), R,L >= 1");
    if (L == 1) {
        const double numer = 1 - 2 * q + ipow(q, R + 1);
        if (numer <= 0)
            throw NoCriticalPoint("alpha(p) > 1/2 for all p: 1-2q+q^{R+1} <= 0");
        return {numer / (1 - 2 * q + ipow(q, R)), false};
    }
    if (q == 0.5) return {0.5, false};
    if (L == R) return {1 - q, q > 0.5};
    auto alpha_centered = [&](double p) {
        return alpha(Params{p, q, R, L}) - 0.5;
    };
    if (q < 0.5) {
        // alpha(1/2) < 1/2 and alpha increases to 1 on [1/2, 1): unique root.
        return {bracketed_root(alpha_centered, 0.5, 1 - 1e-12), false};
    }
    // q > 1/2: scan for sign changes and keep the root nearest 1-q.
    const int grid = 4096;
    std::vector<double> roots;
    double prev_p = 1e-9, prev_v = alpha_centered(prev_p);
    for (int k = 1; k <= grid; ++k) {
        const double p = 1e-9 + (1 - 2e-9) * static_cast<double>(k) / grid;
        const double v = alpha_centered(p);
        if (v == 0.0) {
            roots.push_back(p);
        } else if ((v > 0) != (prev_v > 0)) {
            roots.push_back(bracketed_root(alpha_centered, prev_p, p));
        }
        prev_p = p;
        prev_v = v;
    }
    if (roots.empty()) throw NoCriticalPoint("no sign change of alpha - 1/2 found");
    double best = roots.front();
    for (double r : roots)
        if (std::abs(r - (1 - q)) < std::abs(best - (1 - q))) best = r;
    return {best, roots.size() > 1};
}

double critical_q0(double p, std::uint32_t L) {
    if (!(p > 0 && p < 1) || L < 1) throw InvalidParams("critical_q0 needs p in (0,1), L >= 1");
    const double guard = 2 * p - 1 + ipow(1 - p, L);
    if (guard <= 0) throw NoCriticalPoint("alpha < 1/2 for all q: 2p-1+(1-p)^L <= 0");
    return p * ipow(1 - p, L) / guard;
}

double speed_poly_L1(double t, const Params& params) {
    const double p = params.p, q = params.q;
    const double qR = ipow(q, params.R);
    return (1 - q) + (p * q - p - 1) * t + (p + q) * t * t - p * q * t * t * t -
           (p - q) * qR * (ipow(t, params.R) - ipow(t, params.R + 1));
}

SpeedResult speed_L1(const Params& params) {
    params.validate();
    if (params.L != 1) throw PreconditionViolated("speed_L1 needs L = 1");
    if (!(alpha(params) > 0.5 + kCriticalTol))
        throw PreconditionViolated("speed_L1 needs alpha > 1/2");
    const double p = params.p, q = params.q;
    const double qR = ipow(q, params.R);
    // The degree-(R+2) polynomial factors as (1-t) * reduced(t); the reduced
    // factor changes sign exactly once on (1-q, 1), which conditions the
    // bracket much better than working next to the root at t = 1.
    auto reduced = [&](double t) {
        return (1 - q) + (p * q - p - q) * t + p * q * t * t -
               (p - q) * qR * ipow(t, params.R);
    };
    if (!(reduced(1 - q) > 0) || !(reduced(1.0) < 0))
        throw RootNotBracketed("speed polynomial not bracketed on (1-q, 1)");
    const double t = bracketed_root(reduced, 1 - q, 1.0);
    SpeedResult r;
    r.method = SpeedMethod::L1Polynomial;
    r.t_star = t;
    r.speed = (1 - t) / (1 + t);
    r.gamma = (1 + t) / (1 - t);
    return r;
}

SpeedResult speed_R1(const Params& params, const std::vector<double>& d) {
    params.validate();
    if (params.R != 1) throw PreconditionViolated("speed_R1 needs R = 1");
    if (!(alpha(params) > 0.5 + kCriticalTol))
        throw PreconditionViolated("speed_R1 needs alpha > 1/2");
    if (d.size() != params.L + 1)
        throw PreconditionViolated("speed_R1 needs L+1 densities d_0..d_L");
    double total = 0.0;
    for (double di : d) {
        if (di < 0) throw PreconditionViolated("densities must be nonnegative");
        total += di;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw PreconditionViolated("densities must sum to 1");
    const double p = params.p, q = params.q;
    const std::uint32_t L = params.L;
    const double ratio = p / q - 1;
    const double cL = ipow(1 - p, L);
    SpeedResult r;
    r.method = SpeedMethod::R1LinearSystem;
    r.a.resize(L + 1);
    r.a[0] = (1 + ratio * cL) / ((2 * p - 1) - ratio * cL);
    for (std::uint32_t i = 1; i <= L; ++i) {
        const double ci = ipow(1 - p, L - i);
        r.a[i] = (1 + ratio * ci) / p + ((1 - p) + ratio * ci) / p * r.a[0];
    }
    double expected_step_time = 0.0;
    for (std::uint32_t i = 0; i <= L; ++i) expected_step_time += r.a[i] * d[i];
    r.speed = 1.0 / expected_step_time;
    return r;
}

double speed_RL1_closed(const Params& params, double d) {
    params.validate();
    if (params.R != 1 || params.L != 1)
        throw PreconditionViolated("closed form needs R = L = 1");
    if (!(params.p + params.q > 1))
        throw PreconditionViolated("closed form needs alpha > 1/2 (p + q > 1)");
    if (!(d >= 0 && d <= 1)) throw PreconditionViolated("density d must lie in [0,1]");
    return (params.p + params.q - 1) / (1 + (1 - 2 * d) * (params.p - params.q));
}

double mean_S(const Params& params, std::uint32_t i) {
    params.validate();
    if (i > params.R) throw PreconditionViolated("mean_S needs i <= R");
    const double p = params.p, q = params.q;
    const double m = static_cast<double>(params.R - i);
    const double qm = ipow(q, params.R - i);
    const double pm = ipow(p, params.R - i);
    const double t1 = (-(1 - q) * qm * m + (1 - qm) * q) / (1 - q);
    const double t2 = (qm / pm) * ((1 - p) * pm * m + pm * p) / (1 - p);
    return t1 + t2;
}

double mean_S_critical_L1(double q, std::uint32_t R, std::uint32_t i) {
    if (!(q > 0 && q < 1) || i > R)
        throw PreconditionViolated("mean_S_critical_L1 needs q in (0,1), i <= R");
    return (1 - 2 * q + ipow(q, i + 1)) / (ipow(q, i) * (1 - q));
}

double second_moment_S0(const Params& params) {
    params.validate();
    const double p = params.p, q = params.q;
    const double R = static_cast<double>(params.R);
    const double qR = ipow(q, params.R);
    const double poly_q = R * R - (2 * R * R - 2 * R - 1) * q + (R - 1) * (R - 1) * q * q;
    const double poly_p = R * R - (2 * R * R - 2 * R - 1) * p + (R - 1) * (R - 1) * p * p;
    return (q + q * q - qR * poly_q) / ((1 - q) * (1 - q)) +
           qR * poly_p / ((1 - p) * (1 - p));
}

double second_moment_S0_critical_L1(double q, std::uint32_t R) {
    if (!(q > 0 && q < 1)) throw PreconditionViolated("q must lie in (0,1)");
    const double Rd = static_cast<double>(R);
    const double qR = ipow(q, R);
    return (2 - 8 * q + 8 * q * q + (2 * Rd + 1) * qR + (2 - 6 * Rd) * qR * q +
            (4 * Rd - 5) * qR * q * q) /
           (qR * (1 - q) * (1 - q));
}

double poly_P_Ri(double q, std::uint32_t R, std::uint32_t i) {
    if (R < 2 || i < 1 || i > R) throw PreconditionViolated("poly_P_Ri needs R >= 2, 1 <= i <= R");
    // Coefficients by descending degree R+2 .. 0; overlapping terms accumulate.
    std::vector<double> c(R + 3, 0.0);
    auto deg = [&](std::uint32_t d) -> double& { return c[R + 2 - d]; };
    const double Rd = static_cast<double>(R);
    deg(R + 2) += 2 * Rd - 1;
    deg(R + 1) += -(3 * Rd + 1);
    deg(R) += Rd + 1;
    deg(R + 2 - i) += -2;
    deg(R + 1 - i) += 3;
    deg(R - i) += -1;
    deg(2) += 4;
    deg(1) += -4;
    deg(0) += 1;
    return horner(c, q);
}

double poly_P_RR(double q, std::uint32_t R) {
    if (R < 2) throw PreconditionViolated("poly_P_RR needs R >= 2");
    std::vector<double> c(R + 3, 0.0);
    auto deg = [&](std::uint32_t d) -> double& { return c[R + 2 - d]; };
    const double Rd = static_cast<double>(R);
    deg(R + 2) += 2 * Rd - 1;
    deg(R + 1) += -(3 * Rd + 1);
    deg(R) += Rd + 1;
    deg(2) += 2;
    deg(1) += -1;
    return horner(c, q);
}

double poly_P_RR_tilde(double q, std::uint32_t R) {
    if (R < 2) throw PreconditionViolated("poly_P_RR_tilde needs R >= 2");
    std::vector<double> c(R, 0.0);  // degrees R-1 .. 0
    auto deg = [&](std::uint32_t d) -> double& { return c[R - 1 - d]; };
    deg(0) = -1;
    for (std::uint32_t j = 1; j + 2 <= R - 1; ++j) deg(j + 1) = static_cast<double>(j);
    deg(R - 1) += 2.0 * R - 1;
    return horner(c, q);
}

double q_star(std::uint32_t R) {
    if (R < 2) throw PreconditionViolated("q_star needs R >= 2");
    return bracketed_root([R](double q) { return poly_P_RR_tilde(q, R); }, 1e-12, 0.5);
}

double poly_Q_k(double q, std::uint32_t k) {
    if (k < 1) throw PreconditionViolated("poly_Q_k needs k >= 1");
    const double qk = ipow(q, k);
    return (1 - 2 * q) * (1 - 2 * q) - qk + 3 * qk * q - 2 * qk * q * q;
}

double a_k_root(std::uint32_t k) {
    if (k < 1) throw PreconditionViolated("a_k_root needs k >= 1");
    return bracketed_root(
        [k](double q) { return 2 * q - 1 + ipow(q, k) - ipow(q, k + 1); }, 1e-12, 0.5);
}

double theta_L1(double q, std::uint32_t R, std::uint32_t i) {
    if (!(q > 0 && q < 1) || R < 2 || i > R)
        throw PreconditionViolated("theta_L1 needs q in (0,1), R >= 2, 0 <= i <= R");
    const double Rd = static_cast<double>(R);
    const double qR = ipow(q, R);
    const double qi = ipow(q, i);
    const double num = ipow(q, R - i) * (1 - q) * (1 - 2 * q - qi + 2 * qi * q);
    const double den = 1 - 4 * q + 4 * q * q + Rd * qR + (2 - 3 * Rd) * qR * q +
                       (2 * Rd - 3) * qR * q * q;
    return num / den;
}

ThetaRL2 theta_RL2(double q) {
    if (!(q > 0 && q < 1)) throw PreconditionViolated("q must lie in (0,1)");
    const double den = (1 - q) * (1 - q + q * q);
    ThetaRL2 t;
    t.p0 = (1 - 2 * q) * (1 + q + q * q) / den;
    t.p1 = (1 - 2 * q) / den;
    t.q0 = (2 * q - 1) * q / den;
    t.q1 = q * q * (1 - 2 * q) / den;
    return t;
}

double q1_star() {
    return bracketed_root([](double q) { return 1 - 3 * q - q * q; }, 1e-12, 1 - 1e-12);
}

double q2_star() {
    return bracketed_root([](double q) { return q * q * q + q - 1; }, 1e-12, 1 - 1e-12);
}

namespace {

Classification critical_L1_constant_tail(const Params& params, SiteConfig tail) {
    const double q = params.q;
    const std::uint32_t R = params.R;
    Classification c;
    c.certificates["alpha"] = alpha(params);
    if (tail.mode == Mode::Q && tail.charges == 0) {
        c.verdict = Verdict::Recurrent;
        c.rule = "Thm8.i";
        c.certificates["theta"] = theta_L1(q, R, 0);
        return c;
    }
    const std::uint32_t i = (tail.mode == Mode::P) ? R : tail.charges;
    const double value = (i == R) ? poly_P_RR(q, R) : poly_P_Ri(q, R, i);
    c.rule = (i == R) ? "Thm8.iii" : "Thm8.ii";
    c.certificates["P_Ri"] = value;
    c.certificates["theta"] = theta_L1(q, R, i);
    if (i == R) c.certificates["q_star"] = q_star(R);
    if (std::abs(value) <= 1e-12) {
        // Floating zero: treated as the >= 0 branch, flagged.
        c.verdict = Verdict::Recurrent;
        c.certificates["P_boundary_zero"] = 1.0;
        return c;
    }
    c.verdict = value >= 0 ? Verdict::Recurrent : Verdict::TransientRight;
    return c;
}

SiteConfig mirror_config(SiteConfig c) {
    return SiteConfig{c.mode == Mode::P ? Mode::Q : Mode::P, c.charges};
}

}  // namespace

Classification classify_critical_L1(const Params& params,
                                    std::optional<SiteConfig> right_tail,
                                    std::optional<SiteConfig> left_tail) {
    params.validate();
    if (params.L != 1 || params.R < 2)
        throw PreconditionViolated("classify_critical_L1 needs L = 1 and R >= 2");
    if (std::abs(alpha(params) - 0.5) > kCriticalTol)
        throw PreconditionViolated("classify_critical_L1 needs critical parameters");
    const bool negative_feedback = params.p < params.q;
    if (negative_feedback && !left_tail.has_value())
        throw MissingConstantTail("negative feedback needs a constant tail at -inf");
    if (right_tail.has_value()) {
        if (!config_valid(*right_tail, params))
            throw ChargeOutOfRange("right tail config invalid under params");
        return critical_L1_constant_tail(params, *right_tail);
    }
    Classification c;
    c.certificates["alpha"] = alpha(params);
    if (negative_feedback) {
        c.verdict = Verdict::Unknown;
        c.note = "nonconstant right tail not covered in negative feedback";
        return c;
    }
    // Positive feedback: (p,0) dominates every tail, so a recurrent verdict
    // there settles any right tail.
    Classification best = critical_L1_constant_tail(params, SiteConfig{Mode::P, 0});
    if (best.verdict == Verdict::Recurrent) {
        best.rule = "Thm8.rem1";
        best.note = "dominating (p,0) tail is recurrent";
        return best;
    }
    c.verdict = Verdict::Unknown;
    c.note = "dominating (p,0) tail is transient; nonconstant tail undecided";
    c.certificates["P_RR"] = poly_P_RR(params.q, params.R);
    return c;
}

Classification classify_critical_R1(const Params& params,
                                    std::optional<SiteConfig> right_tail,
                                    std::optional<SiteConfig> left_tail) {
    params.validate();
    if (params.R != 1 || params.L < 2)
        throw PreconditionViolated("classify_critical_R1 needs R = 1 and L >= 2");
    Params mirrored{1 - params.q, 1 - params.p, params.L, params.R};
    std::optional<SiteConfig> mirrored_right, mirrored_left;
    if (left_tail) mirrored_right = mirror_config(*left_tail);
    if (right_tail) mirrored_left = mirror_config(*right_tail);
    Classification inner = classify_critical_L1(mirrored, mirrored_right, mirrored_left);
    if (inner.verdict == Verdict::TransientRight) inner.verdict = Verdict::TransientLeft;
    else if (inner.verdict == Verdict::TransientLeft) inner.verdict = Verdict::TransientRight;
    if (!inner.rule.empty()) inner.rule += "(sym)";
    return inner;
}

std::string tail_class_name(TailClass t) {
    switch (t) {
        case TailClass::IsP0: return "IsP0";
        case TailClass::IsQ0: return "IsQ0";
        case TailClass::NeverP0: return "NeverP0";
        case TailClass::NeverQ0: return "NeverQ0";
        case TailClass::ConstantOther: return "ConstantOther";
    }
    return "?";
}

Classification classify_RL2(double q, TailClass right, TailClass left) {
    if (!(q > 0 && q < 1)) throw PreconditionViolated("q must lie in (0,1)");
    const double lo = q1_star(), hi = q2_star();
    Classification c;
    const ThetaRL2 th = theta_RL2(q);
    c.certificates["q1_star"] = lo;
    c.certificates["q2_star"] = hi;
    c.certificates["theta_p0"] = th.p0;
    c.certificates["theta_q0"] = th.q0;

    auto constant = [](TailClass t) {
        return t == TailClass::IsP0 || t == TailClass::IsQ0 || t == TailClass::ConstantOther;
    };
    if (q > 0.5 && (!constant(right) || !constant(left)))
        throw MissingConstantTail("negative feedback needs constant tails at +-inf");

    auto avoids_p0 = [](TailClass t) {
        return t == TailClass::IsQ0 || t == TailClass::NeverP0 || t == TailClass::ConstantOther;
    };
    auto avoids_q0 = [](TailClass t) {
        return t == TailClass::IsP0 || t == TailClass::NeverQ0 || t == TailClass::ConstantOther;
    };

    if (q >= lo && q <= hi) {
        c.verdict = Verdict::Recurrent;
        c.rule = "Thm9.iii";
        return c;
    }
    const bool low = q < lo;  // otherwise q > hi: roles of (p,0) and (q,0) reverse
    const TailClass fav = low ? TailClass::IsP0 : TailClass::IsQ0;   // favors +inf
    const TailClass unfav = low ? TailClass::IsQ0 : TailClass::IsP0; // favors -inf
    auto avoids_fav = [&](TailClass t) { return low ? avoids_p0(t) : avoids_q0(t); };
    auto avoids_unfav = [&](TailClass t) { return low ? avoids_q0(t) : avoids_p0(t); };
    const std::string part = low ? "Thm9.i" : "Thm9.ii";

    if (right == fav && left == unfav) {
        c.verdict = Verdict::MixedTransient;
        c.rule = part + ".d";
    } else if (right == fav && avoids_unfav(left)) {
        c.verdict = Verdict::TransientRight;
        c.rule = part + ".a";
    } else if (left == unfav && avoids_fav(right)) {
        c.verdict = Verdict::TransientLeft;
        c.rule = part + ".b";
    } else if (avoids_fav(right) && avoids_unfav(left)) {
        c.verdict = Verdict::Recurrent;
        c.rule = part + ".c";
    } else {
        throw AmbiguousTailClass("tail classes (" + tail_class_name(right) + ", " +
                                 tail_class_name(left) + ") match no case at q=" +
                                 std::to_string(q));
    }
    return c;
}

Classification classify_critical_RL1(double q) {
    if (!(q > 0 && q < 1)) throw PreconditionViolated("q must lie in (0,1)");
    Classification c;
    c.verdict = Verdict::Recurrent;
    c.rule = "Cor1";
    c.certificates["q"] = q;
    c.certificates["needs_constant_tails"] = q > 0.5 ? 1.0 : 0.0;
    return c;
}

}  // namespace feedwalk
