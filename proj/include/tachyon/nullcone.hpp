// Light-cone self-intersection spectrum for superluminal circular motion.
//
// In dimensionless variables (orbit radius and light speed both 1) the delay
// tau = t - t' between a source point and the test point satisfies
//
//     f(tau, beta) = 2 - 2 cos(beta tau) - tau^2 = 0,   tau in (0, 2].
//
// Substituting u = beta*tau/2 turns this into |sin u| = u/beta on (0, beta]:
// intersections of a line of slope 1/beta with the humps of |sin|. Each hump
// is concave, so it carries zero, one (tangent), or two roots, and the hump
// maximum sits at the closed-form point u* = j*pi + acos(1/beta). This gives
// exact brackets for every root at any distance from a tangency, which a
// uniform tau grid cannot (merging pairs become arbitrarily close).
#ifndef TACHYON_NULLCONE_HPP
#define TACHYON_NULLCONE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "tachyon/big_real.hpp"

namespace tachyon {

enum class Branch { retarded, advanced };

struct NullRoot {
    BigReal tau;       // dimensionless delay, in (0, 2]
    BigReal phi;       // orbit phase swept during the delay, phi = beta*tau
    Branch branch = Branch::retarded;
    BigReal dfdtau;    // df/dtau at the root
    BigReal k_factor;  // 1 - beta*sin(phi)/R with R = 2|sin(phi/2)|
    bool tangent = false;  // pair unresolvable at the working precision
};

struct SingularVelocity {
    int index = 0;  // k, 1-based
    BigReal phi;    // root of g(phi) with sin(phi) > 0
    BigReal beta;   // sqrt(phi / sin(phi))
};

// Root count cannot be decided at the working precision: beta sits within the
// tangency threshold of a singular velocity.
class AmbiguousRootCount : public std::runtime_error {
public:
    AmbiguousRootCount(int low, int high)
        : std::runtime_error("root count ambiguous near a singular velocity: " +
                             std::to_string(low) + " or " + std::to_string(high)),
          n_low(low), n_high(high) {}
    int n_low;
    int n_high;
};

// f(tau, beta) = 2 - 2 cos(beta tau) - tau^2
inline BigReal null_f(const BigReal& tau, const BigReal& beta) {
    return 2 - 2 * cos(beta * tau) - tau * tau;
}

inline BigReal null_f_dtau(const BigReal& tau, const BigReal& beta) {
    return 2 * beta * sin(beta * tau) - 2 * tau;
}

// g(phi) = 2 - 2 cos(phi) - phi sin(phi); its nontrivial roots with
// sin(phi) > 0 are the tangency phases.
inline BigReal tangency_g(const BigReal& phi) {
    return 2 - 2 * cos(phi) - phi * sin(phi);
}

inline BigReal tangency_g_dphi(const BigReal& phi) { return sin(phi) - phi * cos(phi); }

// beta = sqrt(phi / sin(phi)); requires sin(phi) > 0 for a real speed.
inline BigReal beta_from_phi(const BigReal& phi) {
    BigReal s = sin(phi);
    if (s <= 0) throw std::domain_error("beta_from_phi: sin(phi) <= 0, no real beta");
    return sqrt(phi / s);
}

namespace detail {

// Bracketed Newton with bisection fallback. The bracket [a,b] must carry a
// sign change; x0 is the starting guess. Converges even for the badly
// conditioned near-tangent roots as long as x0 is seeded close enough.
template <typename F, typename DF>
BigReal newton_bisect(F&& f, DF&& fp, BigReal a, BigReal b, BigReal x0, int digits) {
    BigReal fa = f(a);
    BigReal fb = f(b);
    if (fa.is_zero()) return a;
    if (fb.is_zero()) return b;
    const BigReal eps = BigReal::pow10(-digits + 1);
    BigReal x = x0;
    const int max_iter = 64 + digits * 4;
    for (int i = 0; i < max_iter; ++i) {
        BigReal fx = f(x);
        if (fx.is_zero()) return x;
        if ((fa < 0) != (fx < 0)) {
            b = x;
        } else {
            a = x;
            fa = fx;
        }
        BigReal d = fp(x);
        bool stepped = false;
        BigReal xn = x;
        if (!d.is_zero()) {
            xn = x - fx / d;
            if (xn > a && xn < b) stepped = true;
        }
        if (!stepped) xn = (a + b) / 2;
        BigReal step = abs(xn - x);
        x = xn;
        BigReal scale = max(abs(x), BigReal::from_int(1));
        if (step <= eps * scale) break;
        if (b - a <= eps * scale) break;
    }
    return x;
}

}  // namespace detail

// All retarded-branch null roots for beta > 1, ascending in tau. Advanced
// roots mirror these with equal tau. A root pair that cannot be separated at
// the working precision is reported once with the tangent flag set.
inline std::vector<NullRoot> find_roots(const BigReal& beta, int digits) {
    if (!(beta > 1)) throw std::domain_error("find_roots: requires beta > 1");
    const BigReal b = beta.with_digits(std::max(digits, beta.digits()));
    const BigReal pi = BigReal::pi(digits);
    const BigReal one_over = 1 / b;
    const BigReal sstar = acos(one_over);

    // h(u) = |sin u| - u/beta and its derivative
    auto h = [&](const BigReal& u) {
        BigReal s = sin(u);
        return abs(s) - u * one_over;
    };
    auto hp = [&](const BigReal& u) {
        BigReal s = sin(u);
        BigReal c = cos(u);
        return (s.is_negative() ? -c : c) - one_over;
    };

    const BigReal tau_floor = BigReal::pow10(-6);  // present-location exclusion

    std::vector<NullRoot> roots;
    auto push_root = [&](const BigReal& u, bool tangent_flag) {
        NullRoot r;
        r.tau = 2 * u / b;
        if (r.tau < tau_floor) return;  // singular contribution at the particle itself
        r.phi = 2 * u;
        r.branch = Branch::retarded;
        r.dfdtau = null_f_dtau(r.tau, b);
        BigReal s = sin(r.phi);
        BigReal range = 2 * abs(sin(u));
        r.k_factor = 1 - b * s / range;
        // degenerate-pair criterion on the polished root
        if (!tangent_flag) tangent_flag = abs(r.dfdtau) < BigReal::pow10(-digits / 2);
        r.tangent = tangent_flag;
        roots.push_back(std::move(r));
    };

    int jmax = static_cast<int>((b / pi).to_double());
    for (int j = 0; j <= jmax; ++j) {
        const BigReal lo = j * pi;
        const BigReal hi = min((j + 1) * pi, b);
        if (!(lo < hi)) break;
        const BigReal ustar = lo + sstar;
        if (!(ustar < hi)) {
            // hump maximum beyond the tau = 2 cut; h <= 0 on the remainder
            if (h(hi).is_zero() && j > 0) push_root(hi, false);
            continue;
        }
        if (j == 0) {
            // h(0) = 0 is the excluded trivial root; exactly one more follows
            push_root(detail::newton_bisect(h, hp, ustar, hi, (ustar + hi) / 2, digits), false);
            continue;
        }
        const BigReal hmax = h(ustar);
        // Tangency threshold equivalent to |df/dtau| < 10^(-digits/2) at the
        // merging roots: |f_tau| = 2*tau*beta*sqrt(2*|h||sin u*|) near u*.
        const BigReal tau_star = 2 * ustar / b;
        const BigReal sin_star = abs(sin(ustar));
        BigReal thr = BigReal::pow10(-digits) / (8 * tau_star * tau_star * b * b * sin_star);
        if (abs(hmax) < thr) {
            push_root(ustar, true);
            continue;
        }
        if (hmax > 0) {
            // local quadratic seeds around the hump maximum: u* +- delta
            BigReal delta = sqrt(2 * hmax / sin_star);
            BigReal left_lo = lo + (hi - lo) * BigReal::pow10(-digits);
            BigReal s1 = ustar - delta;
            if (!(s1 > left_lo && s1 < ustar)) s1 = (left_lo + ustar) / 2;
            BigReal s2 = ustar + delta;
            if (!(s2 > ustar && s2 < hi)) s2 = (ustar + hi) / 2;
            push_root(detail::newton_bisect(h, hp, left_lo, ustar, s1, digits), false);
            push_root(detail::newton_bisect(h, hp, ustar, hi, s2, digits), false);
        }
    }
    return roots;
}

// Mirror of a retarded root on the advanced branch (equal tau, equal K).
inline NullRoot mirrored(const NullRoot& r) {
    NullRoot m = r;
    m.branch = (r.branch == Branch::retarded) ? Branch::advanced : Branch::retarded;
    return m;
}

// N(beta): number of null roots. Throws AmbiguousRootCount when beta lies
// within the tangency threshold of a singular velocity.
inline int count_roots(const BigReal& beta, int digits = 50) {
    auto roots = find_roots(beta, digits);
    int tangent = 0;
    for (const auto& r : roots)
        if (r.tangent) ++tangent;
    if (tangent > 0) {
        int base = static_cast<int>(roots.size()) - tangent;
        throw AmbiguousRootCount(base, base + 2 * tangent);
    }
    return static_cast<int>(roots.size());
}

// First k_max singular velocities, ascending. The nontrivial root of g in
// (2 pi k, 2 pi k + pi) is bracketed away from the trivial zero at 2 pi k.
inline std::vector<SingularVelocity> singular_velocities(int k_max, int digits) {
    if (k_max < 1) throw std::invalid_argument("singular_velocities: k_max must be >= 1");
    const BigReal pi = BigReal::pi(digits);
    std::vector<SingularVelocity> out;
    out.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) {
        BigReal lo = 2 * pi * k + 1;  // g < 0 here (g ~ -2 pi k (phi - 2 pi k) near the trivial root)
        BigReal hi = 2 * pi * k + pi; // g = 4 here
        BigReal phi = detail::newton_bisect(
            [](const BigReal& p) { return tangency_g(p); },
            [](const BigReal& p) { return tangency_g_dphi(p); }, lo, hi, (lo + hi) / 2, digits);
        SingularVelocity sv;
        sv.index = k;
        sv.beta = beta_from_phi(phi);
        sv.phi = std::move(phi);
        out.push_back(std::move(sv));
    }
    return out;
}

}  // namespace tachyon

#endif
