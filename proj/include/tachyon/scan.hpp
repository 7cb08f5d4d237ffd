// Parameter sweeps of the self-force: coarse Z/epsilon curves with exclusion
// windows around the singular velocities, fine zooms without exclusions,
// sign-census statistics, and a deterministic persisted result format.
//
// Grids are generated in decimal arbitrary precision so that zoom windows far
// below double resolution stay exactly expressible, and samples are pure
// functions of (beta, mode, policy): results are identical for any worker
// count and any interrupt/resume split.
#ifndef TACHYON_SCAN_HPP
#define TACHYON_SCAN_HPP

#include <atomic>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tachyon/big_real.hpp"
#include "tachyon/nullcone.hpp"
#include "tachyon/precision.hpp"
#include "tachyon/selfforce.hpp"

namespace tachyon {

inline const char* to_string(Mode m) {
    return m == Mode::feynman_wheeler ? "feynman_wheeler" : "retarded";
}

inline Mode mode_from_string(const std::string& s) {
    if (s == "feynman_wheeler" || s == "fw") return Mode::feynman_wheeler;
    if (s == "retarded") return Mode::retarded;
    throw std::invalid_argument("unknown mode: " + s);
}

struct ScanConfig {
    BigReal beta_min;
    BigReal beta_max;
    int samples = 0;
    Mode mode = Mode::feynman_wheeler;
    PrecisionPolicy policy;
    BigReal exclusion_radius;  // skip width around each singular velocity; 0 for zooms

    void validate() const {
        if (!(beta_min > 1)) throw std::invalid_argument("ScanConfig: beta_min must be > 1");
        if (!(beta_max > beta_min)) throw std::invalid_argument("ScanConfig: beta_max must be > beta_min");
        if (samples < 2) throw std::invalid_argument("ScanConfig: samples must be >= 2");
        if (exclusion_radius < 0) throw std::invalid_argument("ScanConfig: exclusion_radius must be >= 0");
        policy.validate();
    }
};

struct ScanMetadata {
    std::string tool_version;
    std::int64_t timestamp = 0;
    std::vector<BigReal> eigenvalues_in_range;
};

struct ScanResult {
    ScanConfig config;
    ScanMetadata meta;
    std::vector<ForceSample> rows;  // strictly ascending in beta
};

struct SignCensus {
    long n_positive = 0;
    long n_negative = 0;
    long n_alternations = 0;
    long n_unconverged = 0;
};

namespace scan_detail {

inline std::string tool_version() {
#ifdef TACHYON_VERSION
    return TACHYON_VERSION;
#else
    return "dev";
#endif
}

// Decimal precision for grid points: enough to resolve one step relative to
// the magnitude of the endpoints, with slack, never below the policy start.
inline int grid_digits(const BigReal& lo, const BigReal& hi, int samples,
                       const PrecisionPolicy& policy) {
    BigReal span = hi - lo;
    long scale_mag = max(abs(lo), abs(hi)).magnitude10();
    long step_mag = span.is_zero() ? 0 : span.magnitude10() - static_cast<long>(std::ceil(std::log10(static_cast<double>(samples))));
    int needed = static_cast<int>(scale_mag - step_mag) + 12;
    return std::max(policy.start_digits, needed);
}

inline std::vector<BigReal> uniform_grid(const BigReal& lo, const BigReal& hi, int samples,
                                         int digits) {
    BigReal a = lo.with_digits(digits);
    BigReal b = hi.with_digits(digits);
    std::vector<BigReal> out;
    out.reserve(samples);
    for (int i = 0; i < samples; ++i)
        out.push_back(a + (b - a) * static_cast<long>(i) / static_cast<long>(samples - 1));
    return out;
}

// Singular velocities with beta <= limit (plus a small margin of candidates).
inline std::vector<BigReal> eigenvalues_up_to(const BigReal& limit, int digits) {
    int k_max = static_cast<int>(limit.to_double() / 3.14159) + 2;
    std::vector<BigReal> out;
    if (k_max < 1) return out;
    for (auto& sv : singular_velocities(k_max, digits))
        if (sv.beta <= limit) out.push_back(std::move(sv.beta));
    return out;
}

// Evaluate samples[i] for every i with done[i] == false, in parallel.
inline void fill_samples(const std::vector<BigReal>& betas, Mode mode,
                         const PrecisionPolicy& policy, std::vector<ForceSample>& out,
                         const std::vector<char>& done, int workers) {
    std::size_t n = betas.size();
    if (workers < 1) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min<std::size_t>(workers, n ? n : 1);
    std::atomic<std::size_t> next{0};
    auto body = [&]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            if (done[i]) continue;
            out[i] = self_force(betas[i], mode, policy);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

}  // namespace scan_detail

// Uniform sweep over [beta_min, beta_max] minus exclusion windows around the
// singular velocities. Non-converged samples are flagged, never fatal.
// partial, when given, holds already-computed leading rows from an
// interrupted run; the remainder is computed fresh.
inline ScanResult sweep(const ScanConfig& config, int workers = 0,
                        const std::vector<ForceSample>* partial = nullptr) {
    config.validate();
    int gd = std::max({scan_detail::grid_digits(config.beta_min, config.beta_max, config.samples,
                                                config.policy),
                       config.beta_min.digits(), config.beta_max.digits()});
    std::vector<BigReal> grid = scan_detail::uniform_grid(config.beta_min, config.beta_max,
                                                          config.samples, gd);
    int eig_digits = std::max({30, config.policy.start_digits, gd + 5});
    std::vector<BigReal> eig = scan_detail::eigenvalues_up_to(config.beta_max + config.exclusion_radius,
                                                              eig_digits);
    if (config.exclusion_radius > 0) {
        std::vector<BigReal> kept;
        kept.reserve(grid.size());
        for (auto& b : grid) {
            bool excluded = false;
            for (const auto& e : eig)
                if (abs(b - e) < config.exclusion_radius) { excluded = true; break; }
            if (!excluded) kept.push_back(std::move(b));
        }
        grid = std::move(kept);
    }

    ScanResult res;
    res.config = config;
    // echo the effective grid endpoints at grid precision, so persisted rows
    // re-acquire the exact beta precision on parse
    res.config.beta_min = config.beta_min.with_digits(gd);
    res.config.beta_max = config.beta_max.with_digits(gd);
    res.meta.tool_version = scan_detail::tool_version();
    for (const auto& e : eig)
        if (e >= config.beta_min && e <= config.beta_max) res.meta.eigenvalues_in_range.push_back(e);

    res.rows.resize(grid.size());
    std::vector<char> done(grid.size(), 0);
    if (partial) {
        for (std::size_t i = 0; i < partial->size() && i < grid.size(); ++i) {
            res.rows[i] = (*partial)[i];
            done[i] = 1;
        }
    }
    scan_detail::fill_samples(grid, config.mode, config.policy, res.rows, done, workers);
    return res;
}

// Fine window around a center (typically a singular velocity): uniform grid,
// no exclusions, non-converged samples permitted and flagged.
inline ScanResult zoom(const BigReal& center, const BigReal& width, int samples,
                       const PrecisionPolicy& policy, Mode mode = Mode::feynman_wheeler,
                       int workers = 0, const std::vector<ForceSample>* partial = nullptr) {
    if (!(width > 0)) throw std::invalid_argument("zoom: width must be > 0");
    if (samples < 2) throw std::invalid_argument("zoom: samples must be >= 2");
    // window endpoints need enough digits before they can even be formed:
    // |center| down to width/samples, with slack
    long step_mag = width.magnitude10() - static_cast<long>(std::ceil(std::log10(static_cast<double>(samples))));
    int gd = std::max({policy.start_digits,
                       static_cast<int>(center.magnitude10() - step_mag) + 12, center.digits()});
    ScanConfig cfg;
    cfg.beta_min = center.with_digits(gd) - width.with_digits(gd) / 2;
    cfg.beta_max = center.with_digits(gd) + width.with_digits(gd) / 2;
    cfg.samples = samples;
    cfg.mode = mode;
    cfg.policy = policy;
    cfg.exclusion_radius = BigReal::from_int(0);
    cfg.validate();
    std::vector<BigReal> grid = scan_detail::uniform_grid(cfg.beta_min, cfg.beta_max, samples, gd);

    ScanResult res;
    res.config = cfg;
    res.meta.tool_version = scan_detail::tool_version();
    int eig_digits = std::max({30, policy.start_digits, gd + 5});
    for (auto& e : scan_detail::eigenvalues_up_to(cfg.beta_max + 1, eig_digits))
        if (e >= cfg.beta_min && e <= cfg.beta_max) res.meta.eigenvalues_in_range.push_back(std::move(e));

    res.rows.resize(grid.size());
    std::vector<char> done(grid.size(), 0);
    if (partial) {
        for (std::size_t i = 0; i < partial->size() && i < grid.size(); ++i) {
            res.rows[i] = (*partial)[i];
            done[i] = 1;
        }
    }
    scan_detail::fill_samples(grid, mode, policy, res.rows, done, workers);
    return res;
}

// Sign statistics over converged samples, in beta order. Alternations count
// adjacent converged pairs with strictly opposite Z sign.
inline SignCensus sign_census(const ScanResult& result) {
    SignCensus c;
    int prev_sign = 0;
    for (const auto& s : result.rows) {
        if (!s.converged) {
            ++c.n_unconverged;
            continue;
        }
        int sg = s.z_value.sign();
        if (sg > 0) ++c.n_positive;
        if (sg < 0) ++c.n_negative;
        if (sg != 0 && prev_sign != 0 && sg != prev_sign) ++c.n_alternations;
        if (sg != 0) prev_sign = sg;
    }
    return c;
}

// Census at sampling densities samples * 2^level over the same window,
// level = 0 .. levels-1; reports whether alternation counts grow.
inline std::vector<std::pair<int, SignCensus>> refine_census(const BigReal& center,
                                                             const BigReal& width, int samples,
                                                             const PrecisionPolicy& policy,
                                                             int levels, Mode mode = Mode::feynman_wheeler,
                                                             int workers = 0) {
    if (levels < 1) throw std::invalid_argument("refine_census: levels must be >= 1");
    std::vector<std::pair<int, SignCensus>> out;
    out.reserve(levels);
    for (int level = 0; level < levels; ++level) {
        ScanResult r = zoom(center, width, samples << level, policy, mode, workers);
        out.emplace_back(level, sign_census(r));
    }
    return out;
}

// ---- persistence -----------------------------------------------------------
// Header lines are '#'-prefixed key: value pairs carrying the full effective
// configuration; rows are space-separated columns
//   beta z_value epsilon n_roots converged digits_used
// with all numerics in decimal scientific notation at full working precision.

inline void write_result(std::ostream& os, const ScanResult& r) {
    os << "# tachyon scan result\n";
    os << "# version: " << r.meta.tool_version << "\n";
    os << "# generated_unix: " << r.meta.timestamp << "\n";
    os << "# beta_min: " << r.config.beta_min.to_annotated() << "\n";
    os << "# beta_max: " << r.config.beta_max.to_annotated() << "\n";
    os << "# samples: " << r.config.samples << "\n";
    os << "# mode: " << to_string(r.config.mode) << "\n";
    os << "# exclusion_radius: " << r.config.exclusion_radius.to_annotated() << "\n";
    os << "# start_digits: " << r.config.policy.start_digits << "\n";
    os << "# growth_factor: " << r.config.policy.growth_factor << "\n";
    os << "# agreement_tol: " << r.config.policy.agreement_tol << "\n";
    os << "# max_digits: " << r.config.policy.max_digits << "\n";
    os << "# eigenvalues_in_range:";
    for (const auto& e : r.meta.eigenvalues_in_range) os << " " << e.to_string();
    os << "\n";
    os << "# columns: beta z_value epsilon n_roots converged digits_used\n";
    for (const auto& s : r.rows) {
        os << s.beta.to_string() << " " << s.z_value.to_string() << " " << s.epsilon.to_string()
           << " " << s.n_roots << " " << (s.converged ? 1 : 0) << " " << s.digits_used << "\n";
    }
}

// Parses a persisted result. Row values re-acquire their original working
// precision (beta at the grid precision from the header, z and epsilon at the
// row's digits_used), so re-serialization is byte-identical.
inline ScanResult read_result(std::istream& is) {
    ScanResult r;
    std::string line;
    auto header_value = [](const std::string& l) {
        auto pos = l.find(": ");
        return pos == std::string::npos ? std::string() : l.substr(pos + 2);
    };
    int grid_digits = 50;
    while (is.peek() == '#') {
        std::getline(is, line);
        if (line.rfind("# version: ", 0) == 0) r.meta.tool_version = header_value(line);
        else if (line.rfind("# generated_unix: ", 0) == 0) r.meta.timestamp = std::stoll(header_value(line));
        else if (line.rfind("# beta_min: ", 0) == 0) {
            r.config.beta_min = BigReal::parse_annotated(header_value(line));
            grid_digits = r.config.beta_min.digits();
        } else if (line.rfind("# beta_max: ", 0) == 0) r.config.beta_max = BigReal::parse_annotated(header_value(line));
        else if (line.rfind("# samples: ", 0) == 0) r.config.samples = std::stoi(header_value(line));
        else if (line.rfind("# mode: ", 0) == 0) r.config.mode = mode_from_string(header_value(line));
        else if (line.rfind("# exclusion_radius: ", 0) == 0) r.config.exclusion_radius = BigReal::parse_annotated(header_value(line));
        else if (line.rfind("# start_digits: ", 0) == 0) r.config.policy.start_digits = std::stoi(header_value(line));
        else if (line.rfind("# growth_factor: ", 0) == 0) r.config.policy.growth_factor = std::stod(header_value(line));
        else if (line.rfind("# agreement_tol: ", 0) == 0) r.config.policy.agreement_tol = std::stod(header_value(line));
        else if (line.rfind("# max_digits: ", 0) == 0) r.config.policy.max_digits = std::stoi(header_value(line));
        else if (line.rfind("# eigenvalues_in_range:", 0) == 0) {
            std::istringstream ss(line.substr(std::string("# eigenvalues_in_range:").size()));
            std::string tok;
            while (ss >> tok)
                r.meta.eigenvalues_in_range.push_back(BigReal::from_string(tok, std::max(30, r.config.policy.start_digits)));
        }
    }
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string beta_s, z_s, eps_s;
        int n_roots = 0, conv = 0, digits = 0;
        if (!(ss >> beta_s >> z_s >> eps_s >> n_roots >> conv >> digits))
            throw std::invalid_argument("read_result: malformed row: " + line);
        ForceSample s;
        s.beta = BigReal::from_string(beta_s, grid_digits);
        s.z_value = BigReal::from_string(z_s, digits);
        s.mode = r.config.mode;
        if (s.mode == Mode::feynman_wheeler)
            s.epsilon = BigReal::from_int(0, BigReal::min_digits);
        else
            s.epsilon = BigReal::from_string(eps_s, digits);
        s.n_roots = n_roots;
        s.converged = conv != 0;
        s.digits_used = digits;
        r.rows.push_back(std::move(s));
    }
    return r;
}

}  // namespace tachyon

#endif
