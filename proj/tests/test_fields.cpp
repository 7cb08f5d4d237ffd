#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tachyon/fields.hpp"
#include "tachyon/nullcone.hpp"

using tachyon::BigReal;
using tachyon::Branch;
using tachyon::Kinematics;
using tachyon::Vec3;

namespace {
Vec3 vec(double x, double y, double z, int d = 40) {
    return {BigReal::from_double(x, d), BigReal::from_double(y, d), BigReal::from_double(z, d)};
}
BigReal rel_diff(const Vec3& a, const Vec3& b) {
    return norm(a - b) / max(norm(a), BigReal::pow10(-300));
}
}  // namespace

TEST_CASE("kinematics_at") {
    BigReal beta = BigReal::from_int(2, 40);
    Kinematics k0 = tachyon::kinematics_at(beta, BigReal::from_int(0, 40));
    CHECK(norm(k0.position - vec(1, 0, 0)) < BigReal::pow10(-35));
    CHECK(norm(k0.beta_vec - vec(0, 2, 0)) < BigReal::pow10(-35));
    CHECK(norm(k0.beta_dot - vec(-4, 0, 0)) < BigReal::pow10(-35));

    Kinematics k1 = tachyon::kinematics_at(beta, BigReal::pi(40) / 2);
    CHECK(norm(k1.position - vec(0, 1, 0)) < BigReal::pow10(-35));
    CHECK(norm(k1.beta_vec - vec(-2, 0, 0)) < BigReal::pow10(-35));

    // orthogonality and magnitudes at random phases
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ph(-10.0, 10.0);
    std::uniform_real_distribution<double> bd(1.1, 20.0);
    for (int i = 0; i < 20; ++i) {
        BigReal b = BigReal::from_double(bd(rng), 40);
        Kinematics k = tachyon::kinematics_at(b, BigReal::from_double(ph(rng), 40));
        CHECK(abs(dot(k.beta_vec, k.position)) < BigReal::pow10(-35));
        CHECK(abs(norm(k.position) - 1) < BigReal::pow10(-35));
        CHECK(abs(norm(k.beta_vec) - b) < BigReal::pow10(-34));
        CHECK(abs(norm(k.beta_dot) - b * b) < BigReal::pow10(-33));
        // beta_dot is centripetal
        CHECK(rel_diff(k.beta_dot, -(b * b) * k.position) < BigReal::pow10(-34));
    }
    CHECK_THROWS_AS(tachyon::kinematics_at(BigReal::from_int(0, 20), BigReal::from_int(0, 20)),
                    std::domain_error);
}

TEST_CASE("k_factor") {
    Vec3 n = vec(1, 0, 0);
    CHECK(tachyon::k_factor(n, vec(0, 2, 0), Branch::retarded) == 1);   // perpendicular
    CHECK(tachyon::k_factor(n, vec(2, 0, 0), Branch::retarded) == -1);  // parallel, beta 2
    CHECK(tachyon::k_factor(n, vec(2, 0, 0), Branch::advanced) == 3);
}

TEST_CASE("lw_fields basics") {
    SECTION("static source reduces to the Coulomb field") {
        Kinematics src;
        src.position = vec(-1, 0, 0);
        src.beta_vec = vec(0, 0, 0);
        src.beta_dot = vec(0, 0, 0);
        src.phase = BigReal::from_int(0, 40);
        auto f = tachyon::lw_fields(src, vec(1, 0, 0), Branch::retarded, 40);
        CHECK(rel_diff(f.e_field, vec(0.25, 0, 0)) < BigReal::pow10(-35));
        CHECK(norm(f.b_field) < BigReal::pow10(-35));
        CHECK(f.range == 2);
    }
    SECTION("B is perpendicular to n_hat, both branches") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            BigReal beta = BigReal::from_double(1.5 + 3 * std::abs(u(rng)), 40);
            Kinematics src = tachyon::kinematics_at(beta, BigReal::from_double(3 * u(rng), 40));
            Vec3 test = vec(1 + 0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng));
            for (Branch br : {Branch::retarded, Branch::advanced}) {
                auto f = tachyon::lw_fields(src, test, br, 40);
                CHECK(abs(dot(f.b_field, f.n_hat)) <
                      norm(f.b_field) * BigReal::pow10(-34) + BigReal::pow10(-34));
            }
        }
    }
    SECTION("coincident test point is rejected") {
        Kinematics src = tachyon::kinematics_at(BigReal::from_int(2, 30), BigReal::from_int(0, 30));
        CHECK_THROWS_AS(tachyon::lw_fields(src, vec(1, 0, 0, 30), Branch::retarded, 30),
                        std::domain_error);
    }
    SECTION("Cerenkov floor raises with a magnitude estimate") {
        Kinematics src;
        src.position = vec(0, 0, 0);
        src.beta_vec = vec(2, 0, 0);
        src.beta_dot = vec(0, 0, 0);
        src.phase = BigReal::from_int(0, 40);
        // test point at 60 degrees from beta: n.beta = 2 cos(60) = 1, K_ret = 0
        Vec3 test{BigReal::from_string("0.5", 40), sqrt(BigReal::from_string("0.75", 40)),
                  BigReal::from_int(0, 40)};
        CHECK_THROWS_AS(tachyon::lw_fields(src, test, Branch::retarded, 40),
                        tachyon::CerenkovSingularity);
    }
    SECTION("restoring physical units: fields scale as 1/r^2 at fixed beta") {
        // scale positions by r; beta is fixed so the sweep rate scales as 1/r
        BigReal beta = BigReal::from_string("2.7", 40);
        BigReal phi = BigReal::from_string("1.1", 40);
        Kinematics unit = tachyon::kinematics_at(beta, phi);
        for (long r : {3, 10}) {
            Kinematics scaled;
            scaled.position = BigReal::from_int(r) * unit.position;
            scaled.beta_vec = unit.beta_vec;
            scaled.beta_dot = unit.beta_dot / BigReal::from_int(r);
            scaled.phase = unit.phase;
            auto f1 = tachyon::lw_fields(unit, vec(1, 0, 0), Branch::retarded, 40);
            auto fr = tachyon::lw_fields(scaled, vec(r, 0, 0), Branch::retarded, 40);
            CHECK(rel_diff(BigReal::from_int(r * r) * fr.e_field, f1.e_field) < BigReal::pow10(-34));
        }
    }
}

TEST_CASE("pair symmetry of K on the orbit") {
    // mirror source phases -phi / +phi seen from the test point at phase 0
    for (double beta : {2.0, 3.7, 6.2}) {
        BigReal b = BigReal::from_double(beta, 45);
        for (const auto& root : tachyon::find_roots(b, 45)) {
            Kinematics ret = tachyon::kinematics_at(b, -root.phi);
            Kinematics adv = tachyon::kinematics_at(b, root.phi);
            auto fr = tachyon::lw_fields(ret, vec(1, 0, 0, 45), Branch::retarded, 45);
            auto fa = tachyon::lw_fields(adv, vec(1, 0, 0, 45), Branch::advanced, 45);
            CHECK(abs(fr.k_factor - fa.k_factor) < BigReal::pow10(-40));
            CHECK(abs(fr.k_factor - root.k_factor) < BigReal::pow10(-38));
            // ranges also match, and equal tau on the null cone
            CHECK(abs(fr.range - fa.range) < BigReal::pow10(-40));
            CHECK(abs(fr.range - root.tau) < BigReal::pow10(-38));
        }
    }
}

TEST_CASE("lorentz_force") {
    CHECK(norm(tachyon::lorentz_force(vec(1, 0, 0), vec(0, 0, 0), vec(0, 5, 0)) - vec(1, 0, 0)) <
          BigReal::pow10(-35));
    CHECK(norm(tachyon::lorentz_force(vec(0, 0, 0), vec(0, 3, 0), vec(0, 2, 0))) <
          BigReal::pow10(-35));
    CHECK(norm(tachyon::lorentz_force(vec(0, 0, 0), vec(0, 0, 1), vec(0, 2, 0)) - vec(2, 0, 0)) <
          BigReal::pow10(-35));
}

TEST_CASE("potential oracle agrees with the closed form at order h^2") {
    BigReal b = BigReal::from_int(2, 50);
    auto roots = tachyon::find_roots(b, 50);
    REQUIRE(roots.size() == 1);
    Vec3 test = vec(1, 0, 0, 50);

    for (Branch br : {Branch::retarded, Branch::advanced}) {
        BigReal seed = (br == Branch::retarded ? -roots[0].tau : roots[0].tau);
        Kinematics src =
            tachyon::kinematics_at(b, (br == Branch::retarded ? -roots[0].phi : roots[0].phi));
        auto exact = tachyon::lw_fields(src, test, br, 50);

        BigReal h1 = BigReal::from_string("1e-8", 50);
        auto o1 = tachyon::potential_fields_oracle(b, test, br, h1, seed, 50);
        auto o2 = tachyon::potential_fields_oracle(b, test, br, h1 / 2, seed, 50);
        BigReal e1 = rel_diff(o1.e_field, exact.e_field);
        BigReal e2 = rel_diff(o2.e_field, exact.e_field);
        CHECK(e1 < BigReal::pow10(-14));  // ~ C h^2
        // halving h divides the error by ~4 (order 2)
        double order = std::log2(e1.to_double() / e2.to_double());
        CHECK(order > 1.7);
        CHECK(order < 2.3);
        // B from curl A agrees too
        CHECK(rel_diff(o1.b_field, exact.b_field) < BigReal::pow10(-13));
    }
}

TEST_CASE("potential oracle rejects a stencil that jumps roots") {
    // a huge differencing step spans other retardation roots
    BigReal b = BigReal::from_int(5, 40);
    auto roots = tachyon::find_roots(b, 40);
    REQUIRE(roots.size() == 3);
    Vec3 test = vec(1, 0, 0, 40);
    BigReal h = BigReal::from_string("0.8", 40);
    CHECK_THROWS_AS(
        tachyon::potential_fields_oracle(b, test, Branch::retarded, h, -roots[1].tau, 40),
        tachyon::EvaluationError);
}
