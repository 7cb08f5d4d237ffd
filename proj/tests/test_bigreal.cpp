#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tachyon/big_real.hpp"
#include "tachyon/precision.hpp"

using tachyon::BigReal;
using tachyon::PrecisionPolicy;

TEST_CASE("precision semantics") {
    SECTION("digits floor at 15") {
        BigReal a = BigReal::from_int(1, 3);
        CHECK(a.digits() == 15);
    }
    SECTION("arithmetic carries the max of operand precisions") {
        BigReal a = BigReal::from_int(1, 20);
        BigReal b = BigReal::from_int(2, 80);
        CHECK((a + b).digits() == 80);
        CHECK((a - b).digits() == 80);
        CHECK((a * b).digits() == 80);
        CHECK((a / b).digits() == 80);
    }
    SECTION("high-precision cancellation actually resolves") {
        BigReal big = BigReal::pow10(30, 40);
        BigReal r = (big + 1) - big;
        CHECK(r == 1);
        BigReal low = BigReal::pow10(30, 20);
        CHECK(((low + 1) - low).is_zero());
    }
}

TEST_CASE("serialization") {
    SECTION("round-trip preserves digits-2 significant digits") {
        std::mt19937 rng(20240811);
        std::uniform_real_distribution<double> mant(-9.9999, 9.9999);
        std::uniform_int_distribution<int> expo(-20, 20);
        std::uniform_int_distribution<int> digs(15, 120);
        for (int i = 0; i < 50; ++i) {
            int d = digs(rng);
            BigReal x = BigReal::from_double(mant(rng), d) * BigReal::pow10(expo(rng), d);
            BigReal back = BigReal::from_string(x.to_string(), d);
            BigReal err = abs(back - x);
            BigReal bound = abs(x) * BigReal::pow10(-(d - 2));
            CHECK(err <= bound);
        }
    }
    SECTION("serialized parse at the same precision reprints identically") {
        BigReal x = sqrt(BigReal::from_int(2, 60));
        std::string s = x.to_string();
        CHECK(BigReal::from_string(s, 60).to_string() == s);
    }
    SECTION("annotated form carries the digit count") {
        BigReal x = BigReal::from_string("4.25e-3", 33);
        std::string ann = x.to_annotated();
        CHECK(ann.find("@33") != std::string::npos);
        BigReal y = BigReal::parse_annotated(ann);
        CHECK(y.digits() == 33);
        CHECK(y == x);
    }
    SECTION("determinism: identical inputs give identical strings") {
        auto make = [] { return (sin(BigReal::from_int(7, 90)) * BigReal::pi(90)).to_annotated(); };
        CHECK(make() == make());
    }
}

TEST_CASE("escalate ladder") {
    SECTION("precision-independent function converges at the first rung") {
        PrecisionPolicy p;
        auto r = tachyon::escalate([](int d) { return BigReal::from_int(3, d); }, p);
        CHECK(r.converged);
        CHECK(r.digits_used == p.start_digits);
        CHECK(r.value == 3);
    }
    SECTION("cancellation forces the ladder past 31 digits") {
        PrecisionPolicy p;
        p.start_digits = 20;
        auto eval = [](int d) {
            BigReal big = BigReal::pow10(30, d);
            return (big + 1) - big;
        };
        auto r = tachyon::escalate(eval, p);
        CHECK(r.converged);
        CHECK(r.value == 1);
        CHECK(r.digits_used == 40);  // first rung whose successor agrees
    }
    SECTION("no agreement by max_digits reports non-convergence") {
        PrecisionPolicy p;
        p.start_digits = 15;
        p.max_digits = 60;
        // value depends on the precision at every rung
        auto eval = [](int d) { return BigReal::from_int(d, d); };
        auto r = tachyon::escalate(eval, p);
        CHECK_FALSE(r.converged);
        CHECK(r.digits_used == 60);
    }
    SECTION("domain error at every rung propagates") {
        PrecisionPolicy p;
        p.start_digits = 15;
        p.max_digits = 30;
        auto eval = [](int) -> BigReal { throw std::domain_error("nope"); };
        CHECK_THROWS_AS(tachyon::escalate(eval, p), std::domain_error);
    }
    SECTION("failed rung breaks the agreement chain but later rungs can recover") {
        PrecisionPolicy p;
        p.start_digits = 15;
        p.max_digits = 200;
        auto eval = [](int d) -> BigReal {
            if (d < 50) throw std::domain_error("too coarse");
            return BigReal::from_int(7, d);
        };
        auto r = tachyon::escalate(eval, p);
        CHECK(r.converged);
        CHECK(r.value == 7);
        CHECK(r.digits_used >= 50);
    }
    SECTION("monotone refinement: re-running from digits_used reproduces the value") {
        PrecisionPolicy p;
        p.start_digits = 20;
        auto eval = [](int d) {
            BigReal big = BigReal::pow10(30, d);
            return ((big + 1) - big) + sin(BigReal::from_int(1, d));
        };
        auto r1 = tachyon::escalate(eval, p);
        REQUIRE(r1.converged);
        PrecisionPolicy p2 = p;
        p2.start_digits = r1.digits_used;
        auto r2 = tachyon::escalate(eval, p2);
        REQUIRE(r2.converged);
        CHECK(tachyon::values_agree(r1.value, r2.value, p.agreement_tol));
    }
    SECTION("policy validation") {
        PrecisionPolicy p;
        p.start_digits = 10;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = PrecisionPolicy{};
        p.growth_factor = 1.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = PrecisionPolicy{};
        p.agreement_tol = 1.5;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = PrecisionPolicy{};
        p.max_digits = 20;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
}
