#include "duality/suites.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <numeric>

using namespace duality;
using namespace duality::mc;

namespace {

ProcessSpec spec(Family f, std::size_t sites = 2) {
    ProcessSpec p;
    p.family = f;
    p.sites = sites;
    p.k.assign(sites, Rational(1));
    p.j.assign(sites, 2);
    return p;
}

template <class V>
double total(const V& v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

TEST_CASE("holding times are exponential with the total rate") {
    auto p = spec(Family::SIP);
    p.k = {Rational(1, 2), Rational(3, 2)};
    const std::vector<long> n{2, 1};
    // rates: 2(1 + 3) + 1(2 + 1) = 11
    CHECK(total_rate(p, n) == Catch::Approx(11.0));
    Rng rng = trajectory_rng(5, 0);
    Moments m;
    for (int i = 0; i < 10000; ++i) m.add(holding_time(p, n, rng));
    CHECK(std::abs(m.mean - 1.0 / 11) < 3 * m.se());
    // an empty configuration never moves
    CHECK(std::isinf(holding_time(p, {0, 0}, rng)));
}

TEST_CASE("Moments merge matches sequential accumulation") {
    Rng rng(3);
    std::normal_distribution<double> z(1.5, 2.0);
    Moments all, a, b;
    for (int i = 0; i < 1000; ++i) {
        const double v = z(rng);
        all.add(v);
        (i < 300 ? a : b).add(v);
    }
    a.merge(b);
    CHECK(a.count == all.count);
    CHECK(a.mean == Catch::Approx(all.mean).epsilon(1e-12));
    CHECK(a.stddev() == Catch::Approx(all.stddev()).epsilon(1e-12));
}

TEST_CASE("particle number is conserved along paths") {
    for (auto f : {Family::IRW, Family::SIP, Family::SEP}) {
        auto p = spec(f, 3);
        p.j = {3, 2, 4};
        const std::vector<long> init{2, 1, 1};
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto tr = ctmc_path(p, init, 2.0, seed);
            REQUIRE(tr.states.size() == tr.times.size());
            for (std::size_t s = 0; s < tr.states.size(); ++s) {
                CHECK(total(tr.states[s]) == 4.0);
                if (f == Family::SEP)
                    for (std::size_t i = 0; i < 3; ++i) CHECK(tr.states[s][i] <= double(p.j[i]));
                if (s > 0) CHECK(tr.times[s] > tr.times[s - 1]);
            }
        }
    }
    for (auto f : {Family::DIF, Family::BEP}) {
        auto p = spec(f, 3);
        const auto tr = sde_path(p, {1.0, 0.5, 2.0}, 1.0, 1e-3, 9);
        for (const auto& x : tr.states) {
            CHECK(std::abs(total(x) - 3.5) < 1e-9);
            if (f == Family::BEP)
                for (double v : x) CHECK(v > 0);
        }
    }
}

TEST_CASE("first inclusion jump from (1,0) lands on (0,1)") {
    const auto p = spec(Family::SIP);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto tr = ctmc_path(p, {1, 0}, 10.0, seed);
        REQUIRE(tr.states.size() >= 2);
        CHECK(tr.states[1] == std::vector<double>{0, 1});
    }
}

TEST_CASE("invalid simulation inputs") {
    auto sep = spec(Family::SEP);
    CHECK_THROWS_AS(ctmc_path(sep, {3, 0}, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(ctmc_path(spec(Family::IRW), {1, -1}, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sde_path(spec(Family::BEP), {1.0, 0.0}, 1.0, 1e-3, 1), std::invalid_argument);
    CHECK_THROWS_AS(sde_path(spec(Family::DIF), {1.0, 0.0}, 1.0, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sde_path(spec(Family::SIP), {1.0, 0.0}, 1.0, 1e-3, 1), std::invalid_argument);
    McConfig cfg;
    cfg.id = dual::CaseId::DifExp;
    CHECK_THROWS_AS(mc_duality(cfg), std::invalid_argument);
    cfg.id = dual::CaseId::IrwCharlier;
    cfg.trials = 1;
    CHECK_THROWS_AS(mc_duality(cfg), std::invalid_argument);
}

TEST_CASE("pair difference of DIF is Ornstein-Uhlenbeck") {
    // u = x1 − x2 solves du = −2u dt + sqrt(8c) dW; var u(t) = 2c(1 − e^{−4t})
    auto p = spec(Family::DIF);
    p.c = Rational(1);
    const double t = 2.0, expected = 2.0 * (1 - std::exp(-4 * t));
    Moments mean, sq;
    for (std::size_t i = 0; i < 20000; ++i) {
        Rng rng = trajectory_rng(17, i);
        const auto x = simulate_sde(p, {0.0, 0.0}, t, 5e-3, rng);
        const double u = x[0] - x[1];
        mean.add(u);
        sq.add(u * u);
    }
    CHECK(std::abs(mean.mean) < 3 * mean.se());
    CHECK(std::abs(sq.mean - expected) < 3 * sq.se() + 0.01);  // 0.01 covers the Euler bias at this step
}

TEST_CASE("zero time gives identical sides") {
    McConfig cfg;
    cfg.t = 0;
    cfg.trials = 2048;
    const auto r = mc_duality(cfg);
    CHECK(r.left.se == 0.0);
    CHECK(r.right.se == 0.0);
    CHECK(r.left.mean == r.right.mean);
    CHECK(r.report.pass);
}

TEST_CASE("estimates do not depend on the thread count") {
    McConfig cfg;
    cfg.id = dual::CaseId::SipMeixner;
    cfg.trials = 5000;
    ::setenv("DUALITY_LAB_THREADS", "1", 1);
    const auto a = mc_duality(cfg);
    ::setenv("DUALITY_LAB_THREADS", "3", 1);
    const auto b = mc_duality(cfg);
    ::unsetenv("DUALITY_LAB_THREADS");
    CHECK(a.left.mean == b.left.mean);
    CHECK(a.right.mean == b.right.mean);
    CHECK(a.left.se == b.left.se);
    CHECK(suite::determinism_check(cfg).max_abs_residual == 0.0);
    cfg.seed = 43;
    CHECK(mc_duality(cfg).left.mean != a.left.mean);
}

TEST_CASE("expectation-level duality for jump processes") {
    for (auto id : {dual::CaseId::IrwCharlier, dual::CaseId::SipMeixner, dual::CaseId::SepKrawtchouk}) {
        McConfig cfg;
        cfg.id = id;
        cfg.trials = 20000;
        if (id == dual::CaseId::SepKrawtchouk) cfg.right_init = {2, 1};
        const auto r = mc_duality(cfg);
        INFO(r.report.name << " z " << r.z << " left " << r.left.mean << " right " << r.right.mean);
        CHECK(r.report.pass);
        CHECK_FALSE(r.heavy_tail);
        CHECK(r.left.se > 0);
    }
}

TEST_CASE("a mismatched kernel is detected") {
    // Hermite kernel with the wrong c: IRW and DIF expectations separate
    McConfig cfg;
    cfg.id = dual::CaseId::IrwDifHermite;
    cfg.trials = 20000;
    cfg.t = 1.0;
    cfg.dt = 1e-2;
    cfg.right_init = {1.0, -0.5};
    CHECK(mc_duality(cfg).report.pass);
    cfg.params.kernel_c = std::vector<Rational>{Rational(1, 4), Rational(1, 4)};
    const auto bad = mc_duality(cfg);
    INFO("z " << bad.z);
    CHECK_FALSE(bad.report.pass);
}

TEST_CASE("heavy tail rule") {
    Moments head, all;
    for (int i = 0; i < 200; ++i) head.add(i % 2);
    all = head;
    for (int i = 0; i < 1800; ++i) all.add(i % 2);
    CHECK_FALSE(mc::detail::heavy_tail(head, all));
    all.add(1e4);
    CHECK(mc::detail::heavy_tail(head, all));
}
