// Total electromagnetic self-force on the circularly orbiting charge, summed
// over all light-cone self-intersections. Test point fixed at orbit phase 0,
// position (1,0,0), velocity (0,beta,0); rotational symmetry makes the force
// depend on beta only.
//
// Sign conventions: outward radial axis is +position, so a positive radial
// force component means repulsion. Z = -(F . position): positive Z is
// attraction toward the center. epsilon = (signed azimuthal)/(signed radial).
#ifndef TACHYON_SELFFORCE_HPP
#define TACHYON_SELFFORCE_HPP

#include <stdexcept>
#include <vector>

#include "tachyon/big_real.hpp"
#include "tachyon/fields.hpp"
#include "tachyon/nullcone.hpp"
#include "tachyon/precision.hpp"
#include "tachyon/vec3.hpp"

namespace tachyon {

enum class Mode { feynman_wheeler, retarded };

enum class SpinChoice { hbar, hbar_half };

class NoBoundOrbit : public std::runtime_error {
public:
    explicit NoBoundOrbit(const std::string& what) : std::runtime_error(what) {}
};

struct ForceSample {
    BigReal beta;
    BigReal z_value;
    BigReal epsilon;
    Mode mode = Mode::feynman_wheeler;
    int n_roots = 0;
    bool converged = false;
    int digits_used = 0;
};

namespace detail {

// Neumaier-compensated accumulator; near-singular pairs cancel two large
// numbers and must not lose their low-order parts to intermediate rounding.
class CompensatedSum {
public:
    explicit CompensatedSum(int digits)
        : sum_(BigReal::from_int(0, digits)), comp_(BigReal::from_int(0, digits)) {}
    void add(const BigReal& v) {
        BigReal t = sum_ + v;
        if (abs(sum_) >= abs(v))
            comp_ = comp_ + ((sum_ - t) + v);
        else
            comp_ = comp_ + ((v - t) + sum_);
        sum_ = std::move(t);
    }
    BigReal value() const { return sum_ + comp_; }

private:
    BigReal sum_;
    BigReal comp_;
};

// Retarded-branch Lorentz force on the test point from one root (full weight).
inline Vec3 retarded_root_force(const BigReal& beta, const NullRoot& root, int digits) {
    Vec3 test{BigReal::from_int(1, digits), BigReal::from_int(0, digits), BigReal::from_int(0, digits)};
    Vec3 test_vel{BigReal::from_int(0, digits), beta.with_digits(digits), BigReal::from_int(0, digits)};
    Kinematics src = kinematics_at(beta, (-root.phi).with_digits(digits));
    FieldPair f = lw_fields(src, test, Branch::retarded, digits);
    return lorentz_force(f.e_field, f.b_field, test_vel);
}

inline Vec3 advanced_root_force(const BigReal& beta, const NullRoot& root, int digits) {
    Vec3 test{BigReal::from_int(1, digits), BigReal::from_int(0, digits), BigReal::from_int(0, digits)};
    Vec3 test_vel{BigReal::from_int(0, digits), beta.with_digits(digits), BigReal::from_int(0, digits)};
    Kinematics src = kinematics_at(beta, root.phi.with_digits(digits));
    FieldPair f = lw_fields(src, test, Branch::advanced, digits);
    return lorentz_force(f.e_field, f.b_field, test_vel);
}

}  // namespace detail

// Time-symmetric force of one retarded/advanced mirror pair: half-weighted
// sum of the Lorentz forces from source phases -phi and +phi. Azimuthal and
// out-of-plane components cancel by the pair symmetry.
inline Vec3 pair_force(const BigReal& beta, const NullRoot& root, int digits) {
    Vec3 fr = detail::retarded_root_force(beta, root, digits);
    Vec3 fa = detail::advanced_root_force(beta, root, digits);
    return (fr + fa) / BigReal::from_int(2, digits);
}

namespace detail {

struct ForceEval {
    BigReal radial;     // F . x_hat at the test point
    BigReal azimuthal;  // F . y_hat
    int n_roots;
};

inline ForceEval force_at_digits(const BigReal& beta, Mode mode, int digits) {
    auto roots = find_roots(beta, digits);
    for (const auto& r : roots)
        if (r.tangent)
            throw CerenkovSingularity(
                "self_force: tangency-degenerate root pair at this precision");
    CompensatedSum fx(digits);
    CompensatedSum fy(digits);
    for (const auto& r : roots) {  // ascending tau; do not reorder across runs
        Vec3 f = (mode == Mode::feynman_wheeler) ? pair_force(beta, r, digits)
                                                 : retarded_root_force(beta, r, digits);
        fx.add(f.x);
        fy.add(f.y);
    }
    return {fx.value(), fy.value(), static_cast<int>(roots.size())};
}

}  // namespace detail

// Self-force sample under the precision ladder. In feynman_wheeler mode the
// azimuthal force vanishes identically and epsilon is exactly zero; retarded
// mode reports epsilon = F_azimuthal / F_radial (signed).
inline ForceSample self_force(const BigReal& beta, Mode mode, const PrecisionPolicy& policy) {
    if (!(beta > 1)) throw std::domain_error("self_force: requires beta > 1");
    // rungs below the precision of beta itself would silently compute at
    // beta's precision anyway; start the ladder there and keep digits_used
    // equal to the true working precision
    PrecisionPolicy eff = policy;
    eff.start_digits = std::max(policy.start_digits, beta.digits());
    eff.max_digits = std::max(policy.max_digits, eff.start_digits);
    auto eval = [&](int digits) -> std::vector<BigReal> {
        detail::ForceEval f = detail::force_at_digits(beta, mode, digits);
        return {f.radial, f.azimuthal, BigReal::from_int(f.n_roots)};
    };
    Escalated<std::vector<BigReal>> esc = escalate_many(eval, eff);
    ForceSample s;
    s.beta = beta;
    s.mode = mode;
    s.converged = esc.converged;
    s.digits_used = esc.digits_used;
    s.n_roots = static_cast<int>(esc.value[2].to_double());
    const BigReal& radial = esc.value[0];
    const BigReal& azim = esc.value[1];
    s.z_value = -radial;
    if (mode == Mode::feynman_wheeler || radial.is_zero())
        s.epsilon = BigReal::from_int(0, BigReal::min_digits);
    else
        s.epsilon = azim / radial;
    return s;
}

inline BigReal z_of_beta(const BigReal& beta, const PrecisionPolicy& policy) {
    return self_force(beta, Mode::feynman_wheeler, policy).z_value;
}

inline BigReal epsilon_of_beta(const BigReal& beta, const PrecisionPolicy& policy) {
    return self_force(beta, Mode::retarded, policy).epsilon;
}

// r = sqrt(beta^2 - 1) q^2 Z / (m0 c^2 beta^2) with c = 1; the centripetal
// balance then holds identically. Exposed separately so the algebra can be
// checked with a prescribed Z.
inline BigReal equilibrium_radius_from_z(const BigReal& z, const BigReal& beta, const BigReal& m0,
                                         const BigReal& q) {
    if (!(z > 0)) throw NoBoundOrbit("equilibrium_radius: Z <= 0, radial force is not attractive");
    return sqrt(beta * beta - 1) * q * q * z / (m0 * beta * beta);
}

inline BigReal equilibrium_radius(const BigReal& beta, const BigReal& m0, const BigReal& q,
                                  const PrecisionPolicy& policy) {
    return equilibrium_radius_from_z(z_of_beta(beta, policy), beta, m0, q);
}

// Fine-structure candidate: equating the orbital angular momentum
// L = m0 c beta r / sqrt(beta^2 - 1) at the equilibrium radius to hbar (or
// hbar/2) and eliminating q^2 and r leaves alpha = beta/Z (resp. beta/(2Z)).
inline BigReal fine_structure_from_z(const BigReal& z, const BigReal& beta, SpinChoice spin) {
    if (!(z > 0)) throw NoBoundOrbit("fine_structure_candidate: Z <= 0, no bound orbit");
    BigReal a = beta / z;
    return spin == SpinChoice::hbar ? a : a / 2;
}

inline BigReal fine_structure_candidate(const BigReal& beta, SpinChoice spin,
                                        const PrecisionPolicy& policy) {
    return fine_structure_from_z(z_of_beta(beta, policy), beta, spin);
}

}  // namespace tachyon

#endif
