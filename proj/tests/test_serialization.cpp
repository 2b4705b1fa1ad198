#include <doctest.h>

#include "feedwalk/checks.hpp"
#include "feedwalk/rng.hpp"
#include "feedwalk/serialization.hpp"

using namespace feedwalk;

TEST_SUITE("serialization") {

TEST_CASE("config tokens") {
    CHECK(config_token({Mode::P, 0}) == "p0");
    CHECK(config_token({Mode::Q, 12}) == "q12");
    CHECK(parse_config_token("p3") == SiteConfig{Mode::P, 3});
    CHECK(parse_config_token("q0") == SiteConfig{Mode::Q, 0});
    CHECK_THROWS_AS(parse_config_token("x1"), SpecError);
    CHECK_THROWS_AS(parse_config_token("p"), SpecError);
    CHECK_THROWS_AS(parse_config_token("p1x"), SpecError);
}

TEST_CASE("environment document round trip") {
    const Json doc = Json::parse(R"({
        "left_tail": {"constant": "p0"},
        "right_tail": {"periodic": ["p0", "q0", "q1"]},
        "overrides": {"0": "p1", "1": "q1"}
    })");
    const EnvironmentSpec spec = environment_from_json(doc);
    const Params params{0.7, 0.3, 2, 2};
    spec.validate(params);
    CHECK(spec.lookup(0) == SiteConfig{Mode::P, 1});
    CHECK(spec.lookup(1) == SiteConfig{Mode::Q, 1});
    CHECK(spec.lookup(2) == SiteConfig{Mode::P, 0});  // right tail anchored at 2
    CHECK(spec.lookup(4) == SiteConfig{Mode::Q, 1});
    CHECK(spec.lookup(-1) == SiteConfig{Mode::P, 0});

    const Json emitted = environment_to_json(spec);
    const EnvironmentSpec back = environment_from_json(emitted);
    for (std::int64_t x = -30; x <= 30; ++x) CHECK(back.lookup(x) == spec.lookup(x));
}

TEST_CASE("random environment specs survive the document round trip") {
    Xoshiro256StarStar rng(271828);
    for (int trial = 0; trial < 50; ++trial) {
        const Params params{0.6, 0.4, 1 + static_cast<std::uint32_t>(rng.next() % 4),
                            1 + static_cast<std::uint32_t>(rng.next() % 4)};
        auto random_cell = [&]() -> SiteConfig {
            if (rng.next() % 2)
                return {Mode::P, static_cast<std::uint32_t>(rng.next() % params.L)};
            return {Mode::Q, static_cast<std::uint32_t>(rng.next() % params.R)};
        };
        auto random_pattern = [&]() {
            std::vector<SiteConfig> cells;
            const int len = 1 + static_cast<int>(rng.next() % 5);
            for (int i = 0; i < len; ++i) cells.push_back(random_cell());
            return cells.size() == 1 ? ConfigPattern::constant(cells[0])
                                     : ConfigPattern::periodic(cells);
        };
        std::map<std::int64_t, SiteConfig> overrides;
        const int n_override = static_cast<int>(rng.next() % 4);
        const std::int64_t first = static_cast<std::int64_t>(rng.next() % 7) - 3;
        for (int i = 0; i < n_override; ++i) overrides[first + i] = random_cell();
        const EnvironmentSpec spec = EnvironmentSpec::with_overrides(
            random_pattern(), random_pattern(), std::move(overrides));
        spec.validate(params);
        const EnvironmentSpec back = environment_from_json(environment_to_json(spec));
        for (std::int64_t x = -40; x <= 40; ++x) CHECK(back.lookup(x) == spec.lookup(x));
    }
}

TEST_CASE("classification and estimate documents") {
    Classification c;
    c.verdict = Verdict::TransientRight;
    c.rule = "Thm1";
    c.certificates["alpha"] = 0.75;
    const Json doc = classification_to_json(c);
    CHECK(doc.at("verdict") == "TransientRight");
    CHECK(doc.at("rule") == "Thm1");
    CHECK(doc.at("certificates").at("alpha") == 0.75);

    Estimate e;
    e.mean = 0.5;
    e.std_error = 0.001;
    e.n_samples = 100;
    e.seed = 42;
    e.config_digest = "abc";
    const Json ej = estimate_to_json(e);
    CHECK(ej.at("mean") == 0.5);
    CHECK(ej.at("stderr") == 0.001);
    CHECK(ej.at("seed") == 42);
}

TEST_CASE("matrix and distribution CSV layout") {
    TransitionMatrix m;
    m.labels = {"p0", "q0"};
    m.rows = {{0.7, 0.3}, {0.3, 0.7}};
    const std::string csv = matrix_to_csv(m);
    CHECK(csv.substr(0, csv.find('\n')) == "state,p0,q0");
    CHECK(csv.find("p0,0.7,0.3\n") != std::string::npos);

    const std::string dist = distribution_to_csv({"p0", "q0"}, {0.25, 0.75});
    CHECK(dist == "state,probability\np0,0.25\nq0,0.75\n");

    CHECK(trajectory_to_csv({0, 1, 0}) == "n,position\n0,0\n1,1\n2,0\n");
    CHECK(counters_to_csv({SiteCounters{-1, 3, 2, 1}}) == "x,N,R,L\n-1,3,2,1\n");
}

TEST_CASE("alpha scan CSV shape") {
    const auto scan = alpha_scan(0.5, 1, 1, 0.1, 0.9, 5);
    const std::string csv = alpha_scan_csv(scan);
    CHECK(csv.rfind("p,alpha\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(sign_changes_about_half(scan) == 1);
}

TEST_CASE("alpha scan crossing location for R = L") {
    // R = L = 4, q = 0.3: the single crossing sits at p = 1 - q.
    const auto scan = alpha_scan(0.3, 4, 4, 0.001, 0.999, 1000);
    CHECK(sign_changes_about_half(scan) == 1);
    for (std::size_t k = 1; k < scan.size(); ++k) {
        if ((scan[k - 1].second > 0.5) != (scan[k].second > 0.5)) {
            CHECK(scan[k - 1].first < 0.7);
            CHECK(scan[k].first > 0.7);
        }
    }
}

TEST_CASE("estimator digests separate distinct settings") {
    const EnvironmentSpec env = EnvironmentSpec::uniform({Mode::Q, 0});
    const Params params{0.9, 0.6, 1, 1};
    const std::string a = estimator_digest("speed", env, params, {{"n", 100.0}});
    const std::string b = estimator_digest("speed", env, params, {{"n", 200.0}});
    const std::string c = estimator_digest("speed", env, params, {{"n", 100.0}});
    CHECK(a != b);
    CHECK(a == c);
}

}  // TEST_SUITE
