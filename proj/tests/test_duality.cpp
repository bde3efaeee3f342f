#include "duality/suites.hpp"

#include <catch_amalgamated.hpp>

using namespace duality;
using namespace duality::dual;

TEST_CASE("every catalogued duality holds with its defaults") {
    const CaseParams p;
    for (const auto& ci : catalog()) {
        const auto r = duality_residual(ci.id, p);
        INFO(r.name << " abs " << r.max_abs_residual << " rel " << r.max_rel_residual);
        CHECK(r.pass);
        CHECK(r.points > 0);
        if (ci.plan != Plan::FloatAnalytic) CHECK(r.max_abs_residual == 0.0);
    }
}

TEST_CASE("perturbed kernels break every duality") {
    const CaseParams p;
    for (const auto& ci : catalog()) {
        const auto r = negative_control(ci.id, p);
        INFO(r.name << " rel " << r.max_rel_residual);
        CHECK(r.pass);
        CHECK(r.max_rel_residual > 1e-3);
    }
}

TEST_CASE("Hermite kernel must use the generator's c") {
    CaseParams p;
    p.c = Rational(3, 4);
    CHECK(duality_residual(CaseId::IrwDifHermite, p).max_abs_residual == 0.0);
    p.kernel_c = std::vector<Rational>{Rational(1, 2), Rational(1, 2)};
    CHECK(duality_residual(CaseId::IrwDifHermite, p).max_abs_residual > 0.0);
}

TEST_CASE("Charlier and Meixner self-dualities do not see c") {
    // IRW and SIP rates are free of c, so any common kernel parameter works
    CaseParams p;
    p.kernel_c = std::vector<Rational>{Rational(1, 5), Rational(1, 5)};
    CHECK(duality_residual(CaseId::IrwCharlier, p).max_abs_residual == 0.0);
    CHECK(duality_residual(CaseId::SipMeixner, p).max_abs_residual == 0.0);
    // but the sites must agree
    p.kernel_c = std::vector<Rational>{Rational(1, 5), Rational(2, 5)};
    CHECK(duality_residual(CaseId::IrwCharlier, p).max_abs_residual > 0.0);
}

TEST_CASE("three and four sites") {
    CaseParams p;
    p.sites = 3;
    p.k = {Rational(1, 2), Rational(1), Rational(3, 2)};
    p.j = {2, 3, 2};
    p.trunc = 6;
    p.grid = 7;
    for (auto id : {CaseId::IrwCharlier, CaseId::SipMeixner, CaseId::SepKrawtchouk, CaseId::IrwDifHermite,
                    CaseId::SipBepLaguerre, CaseId::BepBessel}) {
        const auto r = duality_residual(id, p);
        INFO(r.name << " " << r.residual());
        CHECK(r.pass);
    }
    p.sites = 4;
    p.k.assign(4, Rational(1));
    p.j.assign(4, 2);
    p.trunc = 4;
    CHECK(duality_residual(CaseId::IrwCharlier, p).max_abs_residual == 0.0);
    CHECK(duality_residual(CaseId::SepKrawtchouk, p).max_abs_residual == 0.0);
}

TEST_CASE("unequal site parameters") {
    CaseParams p;
    p.k = {Rational(1, 2), Rational(5, 2)};
    for (auto id : {CaseId::SipMeixner, CaseId::SipBepLaguerre, CaseId::BepBessel, CaseId::SipHypMp}) {
        const auto r = duality_residual(id, p);
        INFO(r.name << " " << r.residual());
        CHECK(r.pass);
    }
}

TEST_CASE("suite with and without controls") {
    const CaseParams p;
    CHECK(suite::duality_suite(p, CaseId::SepKrawtchouk).size() == 2);
    CHECK(suite::duality_suite(p, CaseId::SepKrawtchouk, false).size() == 1);
}

TEST_CASE("case catalog lookups") {
    CHECK(case_by_name("bep-bessel") == CaseId::BepBessel);
    CHECK(std::string(info(CaseId::SipHypMp).name) == "sip-hyp-mp");
    CHECK_THROWS_AS(case_by_name("nope"), std::invalid_argument);
    CHECK(catalog().size() == 8);
    CHECK(rational_sqrt(Rational(9, 16)) == Rational(3, 4));
    CHECK_FALSE(rational_sqrt(Rational(3, 4)).has_value());
    CHECK_FALSE(rational_sqrt(Rational(-1)).has_value());
}

TEST_CASE("intertwining relations") {
    const IntertwineParams p;
    for (const auto& ic : intertwining_catalog()) {
        for (const auto& r : intertwining_residual(ic.id, p)) {
            INFO(r.name << " " << r.residual());
            CHECK(r.pass);
        }
        auto q = p;
        q.printed = true;
        for (const auto& r : intertwining_residual(ic.id, q)) {
            INFO(r.name << " " << r.residual());
            CHECK(r.expectation == Expectation::Exceeds);
            CHECK(r.pass);
        }
    }
    CHECK(kernel_case_by_name("laguerre") == KernelCase::Laguerre);
    CHECK_THROWS_AS(kernel_case_by_name("jacobi"), std::invalid_argument);
}

TEST_CASE("kernel Gram checks") {
    const Rational c(1, 2), k(3, 4);
    for (auto f : {kernels::Family::Charlier, kernels::Family::Meixner, kernels::Family::Hermite, kernels::Family::Laguerre,
                   kernels::Family::MeixnerPollaczek}) {
        const auto r = gram_residual(f, c, k, 6, std::numbers::pi / 3);
        INFO(r.name << " " << r.residual());
        CHECK(r.pass);
    }
    CHECK(gram_residual(kernels::Family::Krawtchouk, Rational(-1, 3), k, 6, 1.0).pass);
    CHECK_THROWS_AS(gram_residual(kernels::Family::Bessel, c, k, 6, 1.0), std::invalid_argument);
}
