#include <doctest.h>

#include <cmath>

#include "feedwalk/analytic.hpp"
#include "feedwalk/rng.hpp"

using namespace feedwalk;

namespace {

double uniform_in(Xoshiro256StarStar& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.uniform01();
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("alpha: pinned values") {
    CHECK(alpha(Params{0.5, 0.5, 3, 7}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(alpha(Params{0.7, 0.3, 4, 4}) - 0.5) <= 1e-14);
    const double near_one = alpha(Params{0.999, 0.3, 2, 2});
    CHECK(near_one > 0.9);
    CHECK(near_one == doctest::Approx(0.9989899135654608).epsilon(1e-12));
    CHECK(alpha(Params{0.9, 0.6, 1, 1}) == doctest::Approx(6.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("alpha: symmetry and monotonicity") {
    Xoshiro256StarStar rng(11);
    for (int k = 0; k < 200; ++k) {
        const Params a{uniform_in(rng, 0.02, 0.98), uniform_in(rng, 0.02, 0.98),
                       1 + static_cast<std::uint32_t>(rng.next() % 8),
                       1 + static_cast<std::uint32_t>(rng.next() % 8)};
        const Params b{1 - a.q, 1 - a.p, a.L, a.R};
        CHECK(std::abs(alpha(a) + alpha(b) - 1.0) <= 1e-14);
    }
    // Strictly increasing in p once p >= max(q, 1/2).
    for (int k = 0; k < 20; ++k) {
        const double q = uniform_in(rng, 0.05, 0.95);
        const std::uint32_t R = 1 + static_cast<std::uint32_t>(rng.next() % 5);
        const std::uint32_t L = 1 + static_cast<std::uint32_t>(rng.next() % 5);
        double prev = -1.0;
        for (double p = std::max(q, 0.5) + 0.001; p < 0.999; p += 0.02) {
            const double a = alpha(Params{p, q, R, L});
            CHECK(a > prev);
            prev = a;
        }
    }
}

TEST_CASE("classify_noncritical") {
    const Classification right = classify_noncritical(Params{0.9, 0.6, 1, 1});
    CHECK(right.verdict == Verdict::TransientRight);
    CHECK(right.rule == "Thm1");
    CHECK(right.certificates.at("alpha") > 0.5);

    const Classification left = classify_noncritical(Params{0.4, 0.1, 2, 3});
    CHECK(left.verdict == Verdict::TransientLeft);

    CHECK_THROWS_AS(classify_noncritical(Params{0.7, 0.3, 4, 4}), WithinCriticalTolerance);
}

TEST_CASE("critical_p0: closed form, bisection, guards") {
    CHECK(critical_p0(0.2, 3, 3).value == doctest::Approx(0.8).epsilon(1e-12));
    const CriticalPoint p0 = critical_p0(0.3, 2, 1);
    CHECK(p0.value == doctest::Approx(61.0 / 70.0).epsilon(1e-13));
    CHECK(std::abs(alpha(Params{p0.value, 0.3, 2, 1}) - 0.5) <= 1e-12);

    CHECK_NOTHROW(critical_p0(0.57, 2, 1));                     // 1-2q+q^3 = 0.045 > 0
    CHECK_THROWS_AS(critical_p0(0.65, 2, 1), NoCriticalPoint);  // 1-2q+q^3 <= 0

    Xoshiro256StarStar rng(13);
    for (int k = 0; k < 50; ++k) {
        const double q = uniform_in(rng, 0.05, 0.45);
        const std::uint32_t R = 1 + static_cast<std::uint32_t>(rng.next() % 5);
        const std::uint32_t L = 1 + static_cast<std::uint32_t>(rng.next() % 5);
        const CriticalPoint cp = critical_p0(q, R, L);
        CHECK(std::abs(alpha(Params{cp.value, q, R, L}) - 0.5) <= 1e-10);
        CHECK(cp.value > 0.5);
    }
    // q > 1/2 with L = R: 1-q is critical but flagged as possibly non-unique.
    const CriticalPoint flagged = critical_p0(0.75, 10, 10);
    CHECK(flagged.value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(flagged.maybe_nonunique);
}

TEST_CASE("critical_p0 structure for q < 1/2") {
    // q + p0 < 1 when R < L, q + p0 > 1 when R > L; p0 decreases in q.
    Xoshiro256StarStar rng(29);
    for (int k = 0; k < 30; ++k) {
        const double q = uniform_in(rng, 0.05, 0.45);
        std::uint32_t R = 1 + static_cast<std::uint32_t>(rng.next() % 5);
        std::uint32_t L = 1 + static_cast<std::uint32_t>(rng.next() % 5);
        if (R == L) ++L;
        const double p0 = critical_p0(q, R, L).value;
        if (R < L) CHECK(q + p0 < 1.0);
        if (R > L) CHECK(q + p0 > 1.0);
    }
    for (std::uint32_t R : {2u, 4u}) {
        for (std::uint32_t L : {1u, 3u}) {
            double prev = 1.0;
            for (double q = 0.05; q < 0.49; q += 0.05) {
                const double p0 = critical_p0(q, R, L).value;
                CHECK(p0 < prev);
                prev = p0;
            }
        }
    }
    // At q = 1/2 the crossing sits exactly at p = 1/2.
    CHECK(std::abs(alpha(Params{0.5, 0.5, 4, 2}) - 0.5) <= 1e-14);
    CHECK(alpha(Params{0.45, 0.5, 4, 2}) < 0.5);
    CHECK(alpha(Params{0.55, 0.5, 4, 2}) > 0.5);
}

TEST_CASE("critical_q0: closed form and guard") {
    CHECK(critical_q0(0.7, 1) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(std::abs(alpha(Params{0.7, critical_q0(0.7, 1), 1, 1}) - 0.5) <= 1e-13);
    CHECK(critical_q0(0.3, 1) == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(std::abs(alpha(Params{0.3, critical_q0(0.3, 1), 1, 1}) - 0.5) <= 1e-13);
    CHECK(critical_q0(0.7, 2) == doctest::Approx(9.0 / 70.0).epsilon(1e-13));
    CHECK_THROWS_AS(critical_q0(0.3, 4), NoCriticalPoint);
}

TEST_CASE("speed_L1: root, speed, gamma") {
    const SpeedResult r = speed_L1(Params{0.9, 0.6, 1, 1});
    CHECK(r.t_star == doctest::Approx(4.0 / 9.0).epsilon(1e-13));
    CHECK(r.speed == doctest::Approx(5.0 / 13.0).epsilon(1e-13));
    CHECK(r.gamma == doctest::Approx(13.0 / 5.0).epsilon(1e-13));

    const SpeedResult r2 = speed_L1(Params{0.92, 0.3, 2, 1});
    CHECK(r2.t_star == doctest::Approx(0.9536784741144414).epsilon(1e-12));
    CHECK(r2.speed == doctest::Approx(0.0237099023709902).epsilon(1e-10));

    CHECK_THROWS_AS(speed_L1(Params{0.9, 0.6, 1, 2}), PreconditionViolated);
    CHECK_THROWS_AS(speed_L1(Params{0.3, 0.3, 1, 1}), PreconditionViolated);

    Xoshiro256StarStar rng(17);
    for (int k = 0; k < 50; ++k) {
        double p = uniform_in(rng, 0.2, 0.98);
        double q = uniform_in(rng, 0.2, 0.98);
        const std::uint32_t R = 1 + static_cast<std::uint32_t>(rng.next() % 6);
        Params params{p, q, R, 1};
        if (!(alpha(params) > 0.5 + 1e-3)) {
            --k;
            continue;
        }
        const SpeedResult sr = speed_L1(params);
        CHECK(sr.t_star > 1 - params.q);
        CHECK(sr.t_star < 1.0);
        CHECK(std::abs(speed_poly_L1(sr.t_star, params)) <= 1e-12);
        CHECK(std::abs(speed_poly_L1(1.0, params)) <= 1e-12);  // t = 1 is always a root
        CHECK(std::abs(sr.speed * sr.gamma - 1.0) <= 1e-12);

        // Exactly one sign change on (1-q, 1).
        int changes = 0;
        double prev = speed_poly_L1(1 - params.q + 1e-9, params);
        for (int grid = 1; grid <= 1000; ++grid) {
            const double t = (1 - params.q + 1e-9) +
                             (1 - 1e-6 - (1 - params.q + 1e-9)) * grid / 1000.0;
            const double v = speed_poly_L1(t, params);
            if ((v > 0) != (prev > 0)) ++changes;
            prev = v;
        }
        CHECK(changes == 1);
    }
}

TEST_CASE("speed_R1: values, residual, interchange") {
    const SpeedResult r = speed_R1(Params{0.9, 0.6, 1, 1}, {1.0, 0.0});
    CHECK(r.a[0] == doctest::Approx(1.4).epsilon(1e-13));
    CHECK(r.speed == doctest::Approx(5.0 / 7.0).epsilon(1e-13));

    const SpeedResult r2 = speed_R1(Params{0.8, 0.5, 1, 2}, {0.0, 0.0, 1.0});
    CHECK(r2.speed == doctest::Approx(9.0 / 34.0).epsilon(1e-12));
    CHECK(r2.a[0] == doctest::Approx(16.0 / 9.0).epsilon(1e-12));
    CHECK(r2.a[2] == doctest::Approx(34.0 / 9.0).epsilon(1e-12));

    const double s1 = speed_R1(Params{0.9, 0.6, 1, 1}, {0.3, 0.7}).speed;
    const double s2 = speed_R1(Params{0.6, 0.9, 1, 1}, {0.7, 0.3}).speed;
    CHECK(std::abs(s1 - s2) <= 1e-12);

    CHECK_THROWS_AS(speed_R1(Params{0.9, 0.6, 2, 1}, {1.0, 0.0}), PreconditionViolated);
    CHECK_THROWS_AS(speed_R1(Params{0.9, 0.6, 1, 1}, {0.4, 0.4}), PreconditionViolated);
}

TEST_CASE("session means and second moments") {
    const Params geometric{0.9, 0.6, 4, 1};
    CHECK(mean_S(geometric, 4) == doctest::Approx(9.0).epsilon(1e-12));  // p/(1-p)

    const double q = 0.3;
    const std::uint32_t R = 4;
    const double p0 = critical_p0(q, R, 1).value;
    const Params crit{p0, q, R, 1};
    CHECK(mean_S(crit, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean_S_critical_L1(q, R, 0) == doctest::Approx(1.0).epsilon(1e-14));

    for (double qq : {0.2, 0.35, 0.45}) {
        const double p = critical_p0(qq, 5, 1).value;
        for (std::uint32_t i : {1u, 3u, 5u}) {
            CHECK(mean_S(Params{p, qq, 5, 1}, i) ==
                  doctest::Approx(mean_S_critical_L1(qq, 5, i)).epsilon(1e-12));
        }
    }

    CHECK(second_moment_S0(crit) ==
          doctest::Approx(second_moment_S0_critical_L1(q, R)).epsilon(1e-12));
    CHECK(second_moment_S0_critical_L1(q, R) ==
          doctest::Approx(7091.0 / 81.0).epsilon(1e-12));
}

TEST_CASE("classification polynomials") {
    // Factorization against the reduced polynomial on a grid.
    for (std::uint32_t R = 2; R <= 8; ++R) {
        for (int k = 1; k <= 99; ++k) {
            const double q = k / 100.0;
            CHECK(std::abs(poly_P_RR(q, R) -
                           q * (1 - q) * (1 - q) * poly_P_RR_tilde(q, R)) <= 1e-12);
            CHECK(std::abs(poly_P_RR(q, R) - poly_P_Ri(q, R, R)) <= 1e-12);
        }
    }
    // Double root at q = 1.
    CHECK(std::abs(poly_P_Ri(1.0, 5, 2)) <= 1e-13);
    const double h = 1e-6;
    CHECK(std::abs((poly_P_Ri(1 + h, 5, 2) - poly_P_Ri(1 - h, 5, 2)) / (2 * h)) <= 1e-9);

    // Negativity windows of P_{5,4} and P_{6,5}.
    CHECK(poly_P_Ri(0.40, 5, 4) > 0);
    CHECK(poly_P_Ri(0.44, 5, 4) < 0);
    CHECK(poly_P_Ri(0.48, 5, 4) > 0);
    CHECK(poly_P_Ri(0.38, 6, 5) > 0);
    CHECK(poly_P_Ri(0.44, 6, 5) < 0);
    CHECK(poly_P_Ri(0.495, 6, 5) > 0);
    // Small R or small i: nonnegative on the whole interval.
    for (std::uint32_t R : {2u, 3u, 4u}) {
        for (std::uint32_t i = 1; i < R; ++i) {
            for (int g = 1; g <= 99; ++g)
                CHECK(poly_P_Ri(g / 100.0, R, i) >= -1e-12);
        }
    }
}

TEST_CASE("q_star values and monotonicity") {
    CHECK(q_star(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(q_star(3) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-13));
    double prev = 0.0;
    for (std::uint32_t R = 2; R <= 12; ++R) {
        const double qs = q_star(R);
        CHECK(qs > prev);
        CHECK(qs < 0.5);
        prev = qs;
    }
    CHECK(q_star(12) > 0.47);
    CHECK(q_star(12) == doctest::Approx(0.4999388381308538).epsilon(1e-10));
}

TEST_CASE("Q_k factorization and the a_k roots") {
    for (std::uint32_t k = 1; k <= 6; ++k) {
        for (int g = 1; g <= 99; ++g) {
            const double q = g / 100.0;
            const double factored =
                (2 * q - 1) * (2 * q - 1 + std::pow(q, static_cast<double>(k)) -
                               std::pow(q, static_cast<double>(k) + 1));
            CHECK(std::abs(poly_Q_k(q, k) - factored) <= 1e-12);
        }
    }
    CHECK(poly_Q_k(0.7, 3) > 0);

    // Sign structure: positive below a_k and above 1/2, negative between.
    for (std::uint32_t k : {1u, 3u, 6u}) {
        const double ak = a_k_root(k);
        for (int g = 1; g <= 999; ++g) {
            const double q = g / 1000.0;
            if (q > 0.5 + 1e-6) CHECK(poly_Q_k(q, k) > 0);
            else if (q < ak - 1e-6) CHECK(poly_Q_k(q, k) > 0);
            else if (q > ak + 1e-6 && q < 0.5 - 1e-6) CHECK(poly_Q_k(q, k) < 0);
        }
    }

    const double golden_edge = (3 - std::sqrt(5.0)) / 2;  // a_1 lands exactly here
    CHECK(a_k_root(1) == doctest::Approx(golden_edge).epsilon(1e-9));
    double prev = 0.0;
    for (std::uint32_t k = 1; k <= 8; ++k) {
        const double ak = a_k_root(k);
        CHECK(ak > prev);
        CHECK(ak < 0.5);
        CHECK(ak >= golden_edge - 1e-9);
        prev = ak;
    }
    CHECK(a_k_root(2) == doctest::Approx(0.4450418679126288).epsilon(1e-10));
}

TEST_CASE("theta_L1: zero case, pinned value, moment route") {
    CHECK(theta_L1(0.3, 4, 0) == 0.0);
    CHECK(theta_L1(0.35, 4, 2) == doctest::Approx(0.1964608340551912).epsilon(1e-12));

    // Same ratio from the session moments at the critical point.
    const double q = 0.35;
    const std::uint32_t R = 4, i = 2;
    const Params crit{critical_p0(q, R, 1).value, q, R, 1};
    const double drift = mean_S(crit, i) - 1.0;
    const double variance_rate = second_moment_S0(crit) - 1.0;
    CHECK(theta_L1(q, R, i) == doctest::Approx(2 * drift / variance_rate).epsilon(1e-10));

    // Verdict flip matches the polynomial sign on a sample grid.
    for (std::uint32_t Rg = 2; Rg <= 6; ++Rg) {
        for (int g = 2; g <= 48; g += 2) {
            const double qg = g / 100.0;
            for (std::uint32_t ig = 1; ig <= Rg; ++ig) {
                const double value = poly_P_Ri(qg, Rg, ig);
                if (std::abs(value) < 1e-9) continue;
                CHECK((theta_L1(qg, Rg, ig) > 1.0) == (value < 0.0));
            }
        }
    }
}

TEST_CASE("theta_RL2: pinned values and thresholds") {
    const ThetaRL2 t = theta_RL2(0.25);
    CHECK(t.p0 == doctest::Approx(14.0 / 13.0).epsilon(1e-13));
    CHECK(t.p1 == doctest::Approx(32.0 / 39.0).epsilon(1e-13));
    CHECK(t.q0 == doctest::Approx(-8.0 / 39.0).epsilon(1e-13));
    CHECK(t.q1 == doctest::Approx(2.0 / 39.0).epsilon(1e-13));

    CHECK(q1_star() == doctest::Approx((std::sqrt(13.0) - 3) / 2).epsilon(1e-13));
    const double q2 = q2_star();
    CHECK(std::abs(q2 * q2 * q2 + q2 - 1) <= 1e-13);
    CHECK(q2 == doctest::Approx(0.6823278038280193).epsilon(1e-13));
    CHECK(std::abs(theta_RL2(q1_star()).p0 - 1.0) <= 1e-10);
    CHECK(std::abs(theta_RL2(q2_star()).q0 - 1.0) <= 1e-10);

    for (int g = 1; g <= 999; ++g) {
        const double q = g / 1000.0;
        const ThetaRL2 th = theta_RL2(q);
        CHECK(th.p1 <= 1 + 1e-12);
        CHECK(th.q1 <= 1 + 1e-12);
        const double cubic = q * q * q + q - 1;
        if (std::abs(cubic) > 1e-9) CHECK((th.q0 > 1.0) == (cubic > 0.0));
    }
}

TEST_CASE("classify_critical_L1") {
    {
        const Params params{critical_p0(0.3, 2, 1).value, 0.3, 2, 1};
        const Classification c =
            classify_critical_L1(params, SiteConfig{Mode::P, 0}, SiteConfig{Mode::Q, 0});
        CHECK(c.verdict == Verdict::TransientRight);  // q < q_*(2) = 1/3
        CHECK(c.rule == "Thm8.iii");
    }
    {
        const Params params{critical_p0(0.4, 2, 1).value, 0.4, 2, 1};
        const Classification c =
            classify_critical_L1(params, SiteConfig{Mode::P, 0}, SiteConfig{Mode::Q, 0});
        CHECK(c.verdict == Verdict::Recurrent);  // q > 1/3
    }
    {
        const Params params{critical_p0(0.3, 5, 1).value, 0.3, 5, 1};
        const Classification c =
            classify_critical_L1(params, SiteConfig{Mode::Q, 0}, SiteConfig{Mode::Q, 0});
        CHECK(c.verdict == Verdict::Recurrent);  // (q,0) tail is always recurrent
        CHECK(c.rule == "Thm8.i");
    }
    {
        // Negative feedback (q > 1/2 gives p0 < q) needs a constant left tail.
        const Params params{critical_p0(0.6, 2, 1).value, 0.6, 2, 1};
        CHECK(params.p < params.q);
        CHECK_THROWS_AS(
            classify_critical_L1(params, SiteConfig{Mode::Q, 1}, std::nullopt),
            MissingConstantTail);
        CHECK_NOTHROW(
            classify_critical_L1(params, SiteConfig{Mode::Q, 1}, SiteConfig{Mode::Q, 0}));
    }
    {
        // Positive feedback, nonconstant right tail: domination settles the
        // recurrent case and leaves the transient case undecided.
        const Params recurrent{critical_p0(0.4, 2, 1).value, 0.4, 2, 1};
        const Classification c =
            classify_critical_L1(recurrent, std::nullopt, SiteConfig{Mode::Q, 0});
        CHECK(c.verdict == Verdict::Recurrent);
        CHECK(c.rule == "Thm8.rem1");

        const Params transient{critical_p0(0.3, 2, 1).value, 0.3, 2, 1};
        const Classification u =
            classify_critical_L1(transient, std::nullopt, SiteConfig{Mode::Q, 0});
        CHECK(u.verdict == Verdict::Unknown);
    }
    CHECK_THROWS_AS(
        classify_critical_L1(Params{0.9, 0.6, 2, 1}, SiteConfig{Mode::Q, 0}, std::nullopt),
        PreconditionViolated);  // not critical
    CHECK_THROWS_AS(classify_critical_L1(Params{0.7, 0.3, 1, 1}, SiteConfig{Mode::Q, 0},
                                         std::nullopt),
                    PreconditionViolated);  // wrong shape
}

TEST_CASE("classify_critical_R1 mirrors the L1 classifier") {
    // R = 1, L = 2 critical point; mirrored parameters are (61/70, 0.3, 2, 1).
    const double q0 = critical_q0(0.7, 2);
    const Params params{0.7, q0, 1, 2};
    const Classification c =
        classify_critical_R1(params, SiteConfig{Mode::P, 0}, SiteConfig{Mode::Q, 0});
    // Mirrored right tail is (p,0) with q' = 0.3 < q_*(2): transient right
    // there, so transient LEFT here.
    CHECK(c.verdict == Verdict::TransientLeft);
    CHECK(c.rule == "Thm8.iii(sym)");

    const Classification rec =
        classify_critical_R1(params, SiteConfig{Mode::P, 0}, SiteConfig{Mode::P, 0});
    // Mirrored right tail (q,0): recurrent.
    CHECK(rec.verdict == Verdict::Recurrent);
}

TEST_CASE("classify_RL2 case table") {
    {
        const Classification c = classify_RL2(0.25, TailClass::IsP0, TailClass::IsQ0);
        CHECK(c.verdict == Verdict::MixedTransient);
        CHECK(c.rule == "Thm9.i.d");
    }
    {
        const Classification c = classify_RL2(0.5, TailClass::IsQ0, TailClass::IsP0);
        CHECK(c.verdict == Verdict::Recurrent);
        CHECK(c.rule == "Thm9.iii");
    }
    {
        // q > q2*: roles reversed, (q,0) right tail drives right transience.
        const Classification c =
            classify_RL2(0.75, TailClass::IsQ0, TailClass::ConstantOther);
        CHECK(c.verdict == Verdict::TransientRight);
        CHECK(c.rule == "Thm9.ii.a");
        const Classification c2 = classify_RL2(0.75, TailClass::IsQ0, TailClass::IsQ0);
        CHECK(c2.verdict == Verdict::TransientRight);
    }
    {
        const Classification c = classify_RL2(0.25, TailClass::IsP0, TailClass::NeverQ0);
        CHECK(c.verdict == Verdict::TransientRight);
        CHECK(c.rule == "Thm9.i.a");
        const Classification b = classify_RL2(0.25, TailClass::NeverP0, TailClass::IsQ0);
        CHECK(b.verdict == Verdict::TransientLeft);
        const Classification r =
            classify_RL2(0.25, TailClass::ConstantOther, TailClass::ConstantOther);
        CHECK(r.verdict == Verdict::Recurrent);
        CHECK(r.rule == "Thm9.i.c");
    }
    // Nonconstant tails are not covered in negative feedback.
    CHECK_THROWS_AS(classify_RL2(0.75, TailClass::NeverP0, TailClass::IsQ0),
                    MissingConstantTail);
    // NeverP0 says nothing about (q,0) on the left, so case (c) cannot fire.
    CHECK_THROWS_AS(classify_RL2(0.25, TailClass::NeverP0, TailClass::NeverP0),
                    AmbiguousTailClass);
}

TEST_CASE("classify_critical_RL1") {
    CHECK(classify_critical_RL1(0.3).verdict == Verdict::Recurrent);
    CHECK(classify_critical_RL1(0.3).rule == "Cor1");
    CHECK(classify_critical_RL1(0.3).certificates.at("needs_constant_tails") == 0.0);
    CHECK(classify_critical_RL1(0.7).verdict == Verdict::Recurrent);
    CHECK(classify_critical_RL1(0.7).certificates.at("needs_constant_tails") == 1.0);
    CHECK(classify_critical_RL1(0.5).verdict == Verdict::Recurrent);
}

TEST_CASE("recurrent environments exist at criticality") {
    // Positive feedback: (q,0) toward +inf and (p,0) toward -inf is recurrent.
    for (double q : {0.25, 0.35, 0.45}) {
        for (std::uint32_t R : {2u, 3u, 4u}) {
            const Params params{critical_p0(q, R, 1).value, q, R, 1};
            CHECK(params.q < params.p);
            const Classification c =
                classify_critical_L1(params, SiteConfig{Mode::Q, 0}, SiteConfig{Mode::P, 0});
            CHECK(c.verdict == Verdict::Recurrent);
        }
    }
}

}  // TEST_SUITE
