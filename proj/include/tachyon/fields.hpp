// Point-charge fields of the circular superluminal orbit, retarded and
// advanced branches. Internal normalization: orbit radius, light speed,
// charge and rest mass are all 1, so the orbit angular rate equals beta and
// the source phase after a delay tau is beta*tau. The superluminal (1-beta^2)
// factor is kept signed exactly as it appears in the field expression.
#ifndef TACHYON_FIELDS_HPP
#define TACHYON_FIELDS_HPP

#include <stdexcept>

#include "tachyon/big_real.hpp"
#include "tachyon/nullcone.hpp"
#include "tachyon/precision.hpp"
#include "tachyon/vec3.hpp"

namespace tachyon {

// |K| fell below the meaningful-evaluation floor for the working precision:
// the test point is on (or numerically on) the Cerenkov cone of the source.
class CerenkovSingularity : public EvaluationError {
public:
    explicit CerenkovSingularity(const std::string& what) : EvaluationError(what) {}
};

// The finite-difference stencil jumped to a different retardation root.
class OracleInvalid : public EvaluationError {
public:
    explicit OracleInvalid(const std::string& what) : EvaluationError(what) {}
};

struct Kinematics {
    Vec3 position;
    Vec3 beta_vec;
    Vec3 beta_dot;
    BigReal phase;
};

struct FieldPair {
    Vec3 e_field;
    Vec3 b_field;
    BigReal k_factor;
    BigReal range;   // R, source point to test point
    Vec3 n_hat;
};

// Orbit state at a given phase angle: position on the unit circle, velocity
// of magnitude beta tangent to it, centripetal beta_dot of magnitude beta^2.
inline Kinematics kinematics_at(const BigReal& beta, const BigReal& phase) {
    if (!(beta > 0)) throw std::domain_error("kinematics_at: requires beta > 0");
    BigReal c = cos(phase);
    BigReal s = sin(phase);
    Kinematics k;
    k.position = {c, s, BigReal::from_int(0)};
    k.beta_vec = {-(beta * s), beta * c, BigReal::from_int(0)};
    BigReal b2 = beta * beta;
    k.beta_dot = {-(b2 * c), -(b2 * s), BigReal::from_int(0)};
    k.phase = phase;
    return k;
}

// Doppler-like denominator of the point-charge fields: 1 -+ n.beta.
inline BigReal k_factor(const Vec3& n_hat, const Vec3& beta_vec, Branch branch) {
    BigReal nb = dot(n_hat, beta_vec);
    return branch == Branch::retarded ? 1 - nb : 1 + nb;
}

// Velocity + acceleration fields of a point source, evaluated at a test point
// connected to it by the given branch. Throws CerenkovSingularity when |K| is
// below 10^(-digits+10): the value is meaningless at the working precision and
// the caller must escalate instead.
inline FieldPair lw_fields(const Kinematics& source, const Vec3& test_point, Branch branch,
                           int digits) {
    Vec3 rv = test_point - source.position;
    BigReal range = norm(rv);
    if (range.is_zero()) throw std::domain_error("lw_fields: test point coincides with source");
    Vec3 n = rv / range;
    BigReal k = k_factor(n, source.beta_vec, branch);
    BigReal floor = BigReal::pow10(-digits + 10);
    BigReal b2 = dot(source.beta_vec, source.beta_vec);
    if (abs(k) < floor) {
        BigReal estimate = abs(1 - b2) / (abs(k * k * k) * range * range + BigReal::pow10(-2 * digits));
        throw CerenkovSingularity("lw_fields: |K| below the Cerenkov floor at " +
                                  std::to_string(digits) + " digits; diverging magnitude ~ " +
                                  estimate.format(3));
    }
    Vec3 w = branch == Branch::retarded ? n - source.beta_vec : n + source.beta_vec;
    BigReal k3r = k * k * k * range;
    Vec3 e_vel = ((1 - b2) / (k3r * range)) * w;
    Vec3 e_acc = cross(n, cross(w, source.beta_dot)) / k3r;
    FieldPair f;
    f.e_field = e_vel + e_acc;
    f.b_field = cross(n, f.e_field);
    if (branch == Branch::advanced) f.b_field = -f.b_field;
    f.k_factor = std::move(k);
    f.range = std::move(range);
    f.n_hat = std::move(n);
    return f;
}

// q[E + beta x B] with q = 1.
inline Vec3 lorentz_force(const Vec3& e_field, const Vec3& b_field, const Vec3& beta_vec) {
    return e_field + cross(beta_vec, b_field);
}

namespace detail {

// Source time t' for a field point (x, t): solves t - t' = +-R(t')/c for the
// circular orbit, by guarded Newton from the seed. The root must stay on the
// branch the seed selects; the residual check below guards against jumps.
inline BigReal solve_source_time(const BigReal& beta, const Vec3& x, const BigReal& t,
                                 Branch branch, const BigReal& seed, int digits) {
    int sgn = branch == Branch::retarded ? 1 : -1;
    auto residual = [&](const BigReal& tp) {
        Kinematics k = kinematics_at(beta, beta * tp);
        return (t - tp) - sgn * norm(x - k.position);
    };
    auto dresidual = [&](const BigReal& tp) {
        Kinematics k = kinematics_at(beta, beta * tp);
        Vec3 rv = x - k.position;
        BigReal r = norm(rv);
        return -1 + sgn * dot(rv / r, k.beta_vec);
    };
    BigReal tp = seed.with_digits(digits);
    const BigReal eps = BigReal::pow10(-digits + 2);
    for (int i = 0; i < 64 + digits; ++i) {
        BigReal d = dresidual(tp);
        if (d.is_zero()) break;
        BigReal step = residual(tp) / d;
        tp = tp - step;
        if (abs(step) <= eps * max(abs(tp), BigReal::from_int(1))) break;
    }
    if (abs(residual(tp)) > BigReal::pow10(-digits / 2))
        throw OracleInvalid("solve_source_time: did not converge from the given seed");
    return tp;
}

struct Potentials {
    BigReal scalar;
    Vec3 vector;
    BigReal source_time;
};

// 1/(KR) and beta/(KR) at the branch root tracked from the seed.
inline Potentials potentials_at(const BigReal& beta, const Vec3& x, const BigReal& t,
                                Branch branch, const BigReal& seed, int digits) {
    BigReal tp = solve_source_time(beta, x, t, branch, seed, digits);
    Kinematics k = kinematics_at(beta, beta * tp);
    Vec3 rv = x - k.position;
    BigReal r = norm(rv);
    BigReal kf = k_factor(rv / r, k.beta_vec, branch);
    BigReal kr = kf * r;
    Potentials p{1 / kr, k.beta_vec / kr, std::move(tp)};
    return p;
}

}  // namespace detail

// Independent field estimate from central finite differences of the scalar and
// vector potentials, re-solving the source time at every stencil point. Used
// to test lw_fields; truncation error is O(h^2). The source_time_seed selects
// which root the stencil tracks; a jump to another root raises OracleInvalid.
inline FieldPair potential_fields_oracle(const BigReal& beta, const Vec3& test_point,
                                         Branch branch, const BigReal& h,
                                         const BigReal& source_time_seed, int digits) {
    if (!(h > 0)) throw std::invalid_argument("potential_fields_oracle: h must be > 0");
    const BigReal t0 = BigReal::from_int(0, digits);
    auto at = [&](const Vec3& x, const BigReal& t) {
        return detail::potentials_at(beta, x, t, branch, source_time_seed, digits);
    };
    detail::Potentials base = at(test_point, t0);

    // Round-trip root identity: re-solving the base problem seeded from the
    // stencil's solution must land back on the base root. A stencil that
    // jumped to another retardation root fails this by the inter-root spacing.
    const BigReal same_root_tol =
        BigReal::pow10(-digits / 2) * max(abs(base.source_time), BigReal::from_int(1));
    auto check = [&](const detail::Potentials& p) {
        BigReal back = detail::solve_source_time(beta, test_point, t0, branch, p.source_time, digits);
        if (abs(back - base.source_time) > same_root_tol)
            throw OracleInvalid("potential_fields_oracle: stencil jumped retardation branch");
        return p;
    };

    auto comp = [](const Vec3& v, int i) -> const BigReal& { return i == 0 ? v.x : i == 1 ? v.y : v.z; };
    auto set_comp = [](Vec3& v, int i, BigReal val) { (i == 0 ? v.x : i == 1 ? v.y : v.z) = std::move(val); };

    Vec3 e{BigReal::from_int(0, digits), BigReal::from_int(0, digits), BigReal::from_int(0, digits)};
    detail::Potentials plus[3] = {base, base, base};
    detail::Potentials minus[3] = {base, base, base};
    for (int i = 0; i < 3; ++i) {
        Vec3 xp = test_point;
        Vec3 xm = test_point;
        set_comp(xp, i, comp(test_point, i) + h);
        set_comp(xm, i, comp(test_point, i) - h);
        plus[i] = check(at(xp, t0));
        minus[i] = check(at(xm, t0));
        set_comp(e, i, -((plus[i].scalar - minus[i].scalar) / (2 * h)));
    }
    detail::Potentials tp = check(at(test_point, h));
    detail::Potentials tm = check(at(test_point, BigReal::from_int(0) - h));
    e = e - (tp.vector - tm.vector) / (2 * h);

    // B = curl A from the same spatial stencil; dA(i,j) = dA_i/dx_j
    auto dA = [&](int i, int j) { return (comp(plus[j].vector, i) - comp(minus[j].vector, i)) / (2 * h); };
    Vec3 b{dA(2, 1) - dA(1, 2), dA(0, 2) - dA(2, 0), dA(1, 0) - dA(0, 1)};

    Kinematics src = kinematics_at(beta, beta * base.source_time);
    Vec3 rv = test_point - src.position;
    BigReal range = norm(rv);
    Vec3 n = rv / range;
    FieldPair f;
    f.e_field = std::move(e);
    f.b_field = std::move(b);
    f.k_factor = k_factor(n, src.beta_vec, branch);
    f.range = std::move(range);
    f.n_hat = std::move(n);
    return f;
}

}  // namespace tachyon

#endif
