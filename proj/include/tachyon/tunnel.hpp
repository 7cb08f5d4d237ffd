// Tachyon trajectories through an external potential barrier. Units m0 = c = 1
// (momenta in m0 c, energies in m0 c^2).
//
// The march is parametrized by x, not t: speed diverges at classical turning
// points, where the x-march stays smooth. Writing E_total - U(x) with its sign
// carried through the forbidden region gives
//
//     p_x(x)^2 = (E - U)^2 + 1 - p_y^2,    dt/dx = (E - U)/p_x,
//     dy/dx = p_y/p_x,
//
// so coordinate time runs backward exactly where U > E (the time splice) and
// the dispersion p^2 - E_k^2 = 1 holds everywhere with E_k = |E - U|.
#ifndef TACHYON_TUNNEL_HPP
#define TACHYON_TUNNEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tachyon {

class TurningPointError : public std::domain_error {
public:
    explicit TurningPointError(const std::string& what) : std::domain_error(what) {}
};

// E_k = 1/sqrt(beta^2 - 1); decreases as the speed grows.
inline double kinetic_energy(double beta, double m0 = 1.0) {
    if (!(beta > 1.0)) throw std::domain_error("kinetic_energy: requires beta > 1");
    return m0 / std::sqrt(beta * beta - 1.0);
}

// p = beta / sqrt(beta^2 - 1); tends to m0 c from above as beta -> infinity.
inline double momentum_scalar(double beta, double m0 = 1.0) {
    if (!(beta > 1.0)) throw std::domain_error("momentum_scalar: requires beta > 1");
    return m0 * beta / std::sqrt(beta * beta - 1.0);
}

// Inverse of momentum_scalar. A momentum at or below m0 c has no superluminal
// speed: that is the turning-point impossibility.
inline double speed_from_momentum(double p, double m0 = 1.0) {
    if (!(p > m0))
        throw TurningPointError("speed_from_momentum: |p| <= m0 c has no tachyon speed");
    return p / std::sqrt(p * p - m0 * m0);
}

// Trapezoidal barrier: zero outside [x_rise, x_fall], linear ramps, flat top.
struct BarrierProfile {
    double u_max = 0.0;
    double x_rise = 0.0;
    double x_plateau_start = 0.0;
    double x_plateau_end = 0.0;
    double x_fall = 0.0;

    void validate() const {
        if (u_max < 0.0) throw std::invalid_argument("BarrierProfile: u_max must be >= 0");
        if (!(x_rise <= x_plateau_start && x_plateau_start <= x_plateau_end &&
              x_plateau_end <= x_fall))
            throw std::invalid_argument("BarrierProfile: kinks must be ordered");
        if (u_max > 0.0 && (x_rise == x_plateau_start || x_plateau_end == x_fall))
            throw std::invalid_argument("BarrierProfile: ramps must have finite slope");
    }

    double at(double x) const {
        if (x <= x_rise || x >= x_fall) return 0.0;
        if (x < x_plateau_start) return u_max * (x - x_rise) / (x_plateau_start - x_rise);
        if (x <= x_plateau_end) return u_max;
        return u_max * (x_fall - x) / (x_fall - x_plateau_end);
    }

    double slope(double x) const {
        if (x <= x_rise || x >= x_fall) return 0.0;
        if (x < x_plateau_start) return u_max / (x_plateau_start - x_rise);
        if (x <= x_plateau_end) return 0.0;
        return -u_max / (x_fall - x_plateau_end);
    }
};

enum class SegmentTag { incident_forward, forbidden_backward, transmitted_forward, reflected };

inline const char* to_string(SegmentTag t) {
    switch (t) {
        case SegmentTag::incident_forward: return "incident_forward";
        case SegmentTag::forbidden_backward: return "forbidden_backward";
        case SegmentTag::transmitted_forward: return "transmitted_forward";
        case SegmentTag::reflected: return "reflected";
    }
    return "?";
}

enum class Outcome { tunneled, reflected };

struct TunnelState {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
    double px = 0.0;
    double py = 0.0;
    int time_direction = 1;
};

struct Trajectory {
    std::vector<TunnelState> states;
    std::vector<SegmentTag> tags;  // one per state
    Outcome outcome = Outcome::tunneled;

    // |sign(td) E_k + U - E| with E_k from the dispersion relation
    static double energy_residual(const TunnelState& s, const BarrierProfile& bar,
                                  double e_total) {
        double ek = std::sqrt(std::max(0.0, s.px * s.px + s.py * s.py - 1.0));
        return std::abs(s.time_direction * ek + bar.at(s.x) - e_total);
    }
};

struct StepControl {
    double dx = 1e-3;    // nominal mesh spacing
    double tol = 1e-12;  // local quadrature refinement target
};

struct Incidence {
    bool tunnels = true;
    double turning_x = 0.0;  // valid when !tunnels
};

namespace tunnel_detail {

inline int time_dir(double e_minus_u) { return e_minus_u < 0.0 ? -1 : 1; }

inline double px_squared(double e_total, double u, double py) {
    double d = e_total - u;
    return d * d + 1.0 - py * py;
}

// Adaptive Simpson of f over [a, b] (a may exceed b), halving until the
// estimate is stable to tol or the depth cap is hit.
template <typename F>
double simpson_adaptive(F&& f, double a, double b, double tol) {
    auto simpson = [&](double lo, double hi, int n) {
        double h = (hi - lo) / n;
        double s = f(lo) + f(hi);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
        return s * h / 3.0;
    };
    double prev = simpson(a, b, 2);
    for (int n = 4; n <= (1 << 20); n *= 2) {
        double cur = simpson(a, b, n);
        if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

// The U = E crossing points (on the ramps); empty when the barrier stays
// below the total energy.
inline std::vector<double> energy_crossings(const BarrierProfile& bar, double e_total) {
    if (e_total >= bar.u_max) return {};
    double f = e_total / bar.u_max;
    return {bar.x_rise + f * (bar.x_plateau_start - bar.x_rise),
            bar.x_fall - f * (bar.x_fall - bar.x_plateau_end)};
}

// Sorted breakpoints of the integrands inside (xa, xb): barrier kinks and
// U = E crossings (the latter flip the time direction).
inline std::vector<double> breakpoints(const BarrierProfile& bar, double e_total, double xa,
                                       double xb) {
    double lo = std::min(xa, xb), hi = std::max(xa, xb);
    std::vector<double> pts;
    for (double k : {bar.x_rise, bar.x_plateau_start, bar.x_plateau_end, bar.x_fall})
        if (k > lo && k < hi) pts.push_back(k);
    for (double c : energy_crossings(bar, e_total))
        if (c > lo && c < hi) pts.push_back(c);
    std::sort(pts.begin(), pts.end());
    if (xa > xb) std::reverse(pts.begin(), pts.end());
    return pts;
}

}  // namespace tunnel_detail

// 2D trajectory through a barrier that varies in x only (p_y exactly
// conserved). Marches from x_start toward x_end; reflection is detected as
// the first zero of p_x^2, which requires |p_y| > m0 c. The final ramp piece
// around a reflection is taken with the exact ramp solution parametrized by
// p_x (momentum is linear in t on a linear ramp), which also provides the
// natural step refinement as p_x -> 0.
inline Trajectory integrate_2d(double e_total, double p_y, const BarrierProfile& barrier,
                               double x_start, double x_end, StepControl step = {}) {
    barrier.validate();
    if (!(e_total > 0.0)) throw std::invalid_argument("integrate_2d: E_total must be > 0");
    if (!(step.dx > 0.0)) throw std::invalid_argument("integrate_2d: dx must be > 0");
    if (x_start == x_end) throw std::invalid_argument("integrate_2d: empty march");
    if (barrier.at(x_start) >= e_total)
        throw std::invalid_argument("integrate_2d: start point is classically forbidden");
    if (tunnel_detail::px_squared(e_total, barrier.at(x_start), p_y) <= 0.0)
        throw std::invalid_argument("integrate_2d: no real incident p_x at start");

    const double dir = x_start < x_end ? 1.0 : -1.0;
    const bool can_reflect = p_y * p_y > 1.0;
    const double a = can_reflect ? std::sqrt(p_y * p_y - 1.0) : 0.0;

    Trajectory traj;
    bool seen_forbidden = false;
    bool reflected = false;

    auto tag_for = [&](double x, int td) {
        if (reflected) return SegmentTag::reflected;
        if (td < 0) return SegmentTag::forbidden_backward;
        return seen_forbidden ? SegmentTag::transmitted_forward : SegmentTag::incident_forward;
    };
    auto push = [&](double x, double y, double t, double px) {
        int td = tunnel_detail::time_dir(e_total - barrier.at(x));
        if (td < 0) seen_forbidden = true;
        traj.states.push_back({x, y, t, px, p_y, td});
        traj.tags.push_back(tag_for(x, td));
    };

    double x = x_start, y = 0.0, t = 0.0;
    double px_sign = dir;
    push(x, y, t, px_sign * std::sqrt(tunnel_detail::px_squared(e_total, barrier.at(x), p_y)));

    // march plan: smooth pieces split at kinks and U = E crossings
    std::vector<double> plan = tunnel_detail::breakpoints(barrier, e_total, x_start, x_end);
    plan.push_back(x_end);

    auto px_at = [&](double xx) {
        return px_sign * std::sqrt(std::max(0.0, tunnel_detail::px_squared(e_total, barrier.at(xx), p_y)));
    };
    auto f_t = [&](double xx) { return (e_total - barrier.at(xx)) / px_at(xx); };
    auto f_y = [&](double xx) { return p_y / px_at(xx); };

    // A state exactly on a U = E crossing would reconstruct E_k through the
    // ill-conditioned sqrt(p^2 - 1 + ...) cancellation; crossings stay
    // integration breakpoints but get no mesh state of their own.
    std::vector<double> crossings = tunnel_detail::energy_crossings(barrier, e_total);
    auto is_crossing = [&](double xx) {
        for (double c : crossings)
            if (xx == c) return true;
        return false;
    };

    auto march_piece = [&](double xa, double xb) {
        int n = std::max(1, static_cast<int>(std::ceil(std::abs(xb - xa) / step.dx)));
        for (int i = 1; i <= n; ++i) {
            double xn = xa + (xb - xa) * i / n;
            t += tunnel_detail::simpson_adaptive(f_t, x, xn, step.tol);
            y += tunnel_detail::simpson_adaptive(f_y, x, xn, step.tol);
            x = xn;
            if (i < n || xn == x_end || !is_crossing(xn)) push(x, y, t, px_at(x));
        }
    };

    for (size_t pi = 0; pi < plan.size(); ++pi) {
        double target = plan[pi];
        if (can_reflect) {
            // Reflection event inside [x, target]? Breakpoints make U monotone
            // and E-U single-signed per piece, so the endpoint sign suffices.
            double q_end = tunnel_detail::px_squared(e_total, barrier.at(target), p_y);
            if (q_end <= 0.0) {
                // the crossing sits on a ramp: U(x_r) = E - a, still allowed region
                double u_r = e_total - a;
                double g = barrier.slope((x + target) / 2);
                double x_r = (g > 0.0 ? barrier.x_rise : barrier.x_fall) + u_r / g;
                // Exact ramp solution parametrized by p_x (dp_x/dt = -g):
                //   t(p) = t0 + (p0 - p)/g
                //   y(p) = y0 + (p_y/g) [asinh(p0/a) - asinh(p/a)]
                //   x(p) from U(x) = E - sqrt(p^2 + a^2)
                double p0 = px_at(x);
                double t0 = t, y0 = y;
                auto ramp_state = [&](double p) {
                    double u = e_total - std::sqrt(p * p + a * a);
                    x = (g > 0.0 ? barrier.x_rise : barrier.x_fall) + u / g;
                    t = t0 + (p0 - p) / g;
                    y = y0 + (p_y / g) * (std::asinh(p0 / a) - std::asinh(p / a));
                    push(x, y, t, p);
                };
                int n = std::max(16, static_cast<int>(std::ceil(std::abs(x_r - x) / step.dx)));
                for (int i = 1; i < n; ++i) ramp_state(p0 * (1.0 - static_cast<double>(i) / n));
                x = x_r;
                t = t0 + p0 / g;
                y = y0 + (p_y / g) * std::asinh(p0 / a);
                push(x, y, t, 0.0);  // turning state
                reflected = true;
                traj.outcome = Outcome::reflected;
                for (int i = 1; i <= n; ++i) ramp_state(-p0 * (static_cast<double>(i) / n));
                px_sign = -px_sign;
                // march back out to the start
                std::vector<double> back = tunnel_detail::breakpoints(barrier, e_total, x, x_start);
                back.push_back(x_start);
                for (double bt : back) march_piece(x, bt);
                return traj;
            }
        }
        march_piece(x, target);
    }
    traj.outcome = reflected ? Outcome::reflected : Outcome::tunneled;
    return traj;
}

// 1D march: the p_y = 0 specialization. A finite barrier always transmits;
// the middle segment of a tall barrier runs backward in coordinate time.
inline Trajectory integrate_1d(double e_total, const BarrierProfile& barrier, double x_start,
                               double x_end, StepControl step = {}) {
    return integrate_2d(e_total, 0.0, barrier, x_start, x_end, step);
}

// Rows: x y t p_x p_y time_direction segment_tag. The header lines echo
// whatever configuration the caller passes as key/value pairs.
inline void write_trajectory(std::ostream& os, const Trajectory& traj,
                             const std::vector<std::pair<std::string, std::string>>& header = {}) {
    os << "# tachyon trajectory\n";
    for (const auto& [k, v] : header) os << "# " << k << ": " << v << "\n";
    os << "# outcome: " << (traj.outcome == Outcome::tunneled ? "tunneled" : "reflected") << "\n";
    os << "# columns: x y t p_x p_y time_direction segment_tag\n";
    char buf[256];
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const TunnelState& s = traj.states[i];
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %d %s\n", s.x, s.y, s.t,
                      s.px, s.py, s.time_direction, to_string(traj.tags[i]));
        os << buf;
    }
}

// Closed-form outcome of the integrate_2d criterion, without integrating.
// Describes incidence from the allowed side onto the barrier.
inline Incidence classify_incidence(double e_total, double p_y, const BarrierProfile& barrier) {
    barrier.validate();
    if (!(e_total > 0.0)) throw std::invalid_argument("classify_incidence: E_total must be > 0");
    if (p_y * p_y >= 1.0 + e_total * e_total)
        throw std::invalid_argument("classify_incidence: no real incident p_x");
    if (p_y * p_y <= 1.0) return {true, 0.0};
    double a = std::sqrt(p_y * p_y - 1.0);
    double u_r = e_total - a;  // > 0 given a real incident p_x
    if (barrier.u_max >= u_r) {
        double x_r = barrier.x_rise + u_r / barrier.slope((barrier.x_rise + barrier.x_plateau_start) / 2);
        return {false, x_r};
    }
    return {true, 0.0};
}

}  // namespace tachyon

#endif
