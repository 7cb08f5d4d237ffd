// tachyon: command-line driver for the circular-orbit self-interaction
// library. Subcommands: singular, nroots, zscan, zoom, epsilon, tunnel,
// verify. Exit codes: 0 success, 1 usage/config error, 2 I/O error,
// 3 verification failure.
#include <CLI11.hpp>

#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "tachyon/tachyon.hpp"

namespace {

using tachyon::BigReal;
using tachyon::Mode;
using tachyon::PrecisionPolicy;

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;

// Decimal flags parse at the requested precision, never through a double, so
// window widths far below double resolution stay exact. Strings carrying more
// digits than requested keep them.
BigReal parse_real(const std::string& s, int digits) {
    int present = 0;
    for (char c : s) {
        if (c == 'e' || c == 'E') break;
        if (c >= '0' && c <= '9') ++present;
    }
    return BigReal::from_string(s, std::max(digits, present + 2));
}

struct CommonFlags {
    int digits = 50;
    double tol = 1e-10;
    int max_digits = 1600;
    int workers = 0;
    std::string output;
    std::string config_path;
    std::int64_t timestamp = -1;

    PrecisionPolicy policy() const {
        PrecisionPolicy p;
        p.start_digits = digits;
        p.agreement_tol = tol;
        p.max_digits = std::max(max_digits, digits);
        return p;
    }
    std::int64_t effective_timestamp() const {
        return timestamp >= 0 ? timestamp : static_cast<std::int64_t>(std::time(nullptr));
    }
};

// Config-file fallback: a flag not given on the command line takes its value
// from "<subcommand>.<key>" or plain "<key>" in the config file.
class ConfigLayer {
public:
    ConfigLayer(const std::string& path, std::string scope) : scope_(std::move(scope)) {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read config file: " + path);
        map_ = tachyon::parse_keyvalue(in);
        loaded_ = true;
    }
    bool has(const std::string& key) const { return find(key) != nullptr; }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        const std::string* v = find(key);
        return v ? *v : fallback;
    }
    void apply(const CLI::Option* opt, const std::string& key, std::string& target) const {
        if (opt->count() == 0 && has(key)) target = get(key);
    }
    template <typename T>
    void apply_num(const CLI::Option* opt, const std::string& key, T& target) const {
        if (opt->count() == 0 && has(key)) {
            std::istringstream ss(get(key));
            ss >> target;
            if (ss.fail()) throw std::runtime_error("config key " + key + ": not a number");
        }
    }

private:
    const std::string* find(const std::string& key) const {
        if (!loaded_) return nullptr;
        auto it = map_.find(scope_ + "." + key);
        if (it != map_.end()) return &it->second;
        it = map_.find(key);
        if (it != map_.end()) return &it->second;
        return nullptr;
    }
    std::string scope_;
    tachyon::KeyValueMap map_;
    bool loaded_ = false;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write output file: " + path);
    return out;
}

void print_census(const tachyon::ScanResult& r) {
    auto c = tachyon::sign_census(r);
    std::cout << "samples: " << r.rows.size() << "  Z>0: " << c.n_positive
              << "  Z<0: " << c.n_negative << "  alternations: " << c.n_alternations
              << "  unconverged: " << c.n_unconverged << "\n";
}

int run_scan_command(const std::string& name, const CommonFlags& common, tachyon::ScanConfig cfg,
                     bool resume) {
    if (common.output.empty()) {
        std::cerr << name << ": --output is required\n";
        return kExitUsage;
    }
    std::vector<tachyon::ForceSample> prefix;
    if (resume) {
        std::ifstream in(common.output);
        if (in) {
            try {
                prefix = tachyon::read_result(in).rows;
                std::cout << "resuming: " << prefix.size() << " rows already present\n";
            } catch (const std::exception& e) {
                std::cerr << name << ": cannot resume from " << common.output << ": " << e.what()
                          << "\n";
                return kExitIo;
            }
        }
    }
    tachyon::ScanResult r = tachyon::sweep(cfg, common.workers, resume ? &prefix : nullptr);
    r.meta.timestamp = common.effective_timestamp();
    auto out = open_output(common.output);
    tachyon::write_result(out, r);
    print_census(r);
    return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyReport {
    int failures = 0;
    void check(const std::string& name, bool ok, const std::string& detail = "") {
        if (ok) {
            std::cout << "ok   " << name << "\n";
        } else {
            ++failures;
            std::cout << "FAIL " << name << (detail.empty() ? "" : ": " + detail) << "\n";
        }
    }
};

// First three singular speeds at 30 digits, pinned as a fixture; --perturb-fixture
// flips one digit to exercise the failure path of this harness.
const char* kEigenFixture[3] = {
    "4.603338848751700352556582029103",
    "7.789705767492724681836698222255",
    "10.94987986982626508808725514623",
};

int run_verify(std::uint64_t seed, bool perturb) {
    VerifyReport rep;
    // eigenvalues against the pinned fixture
    auto sv = tachyon::singular_velocities(3, 35);
    for (int k = 0; k < 3; ++k) {
        std::string fix = kEigenFixture[k];
        if (perturb && k == 1) fix[5] = fix[5] == '7' ? '8' : '7';
        BigReal ref = BigReal::from_string(fix, 35);
        bool ok = abs(sv[k].beta - ref) <= ref * BigReal::pow10(-28);
        rep.check("eigenvalue-fixture-" + std::to_string(k + 1), ok,
                  "computed " + sv[k].beta.format(31) + " vs fixture " + fix);
    }
    // root staircase
    {
        bool ok = tachyon::count_roots(BigReal::from_int(2, 40)) == 1 &&
                  tachyon::count_roots(BigReal::from_int(5, 40)) == 3 &&
                  tachyon::count_roots(BigReal::from_int(8, 40)) == 5;
        rep.check("root-staircase", ok);
    }
    // Feynman-Wheeler radiality
    {
        bool ok = true;
        for (int b : {2, 5}) {
            BigReal beta = BigReal::from_int(b, 50);
            BigReal fx(BigReal::from_int(0, 50)), fy(BigReal::from_int(0, 50));
            for (const auto& root : tachyon::find_roots(beta, 50)) {
                auto f = tachyon::pair_force(beta, root, 50);
                fx = fx + f.x;
                fy = fy + f.y;
            }
            ok = ok && abs(fy) < abs(fx) * BigReal::pow10(-20);
        }
        rep.check("fw-radiality", ok);
    }
    // field oracle agreement
    {
        BigReal beta = BigReal::from_int(2, 50);
        auto roots = tachyon::find_roots(beta, 50);
        tachyon::Vec3 test{BigReal::from_int(1, 50), BigReal::from_int(0, 50), BigReal::from_int(0, 50)};
        auto src = tachyon::kinematics_at(beta, -roots[0].phi);
        auto exact = tachyon::lw_fields(src, test, tachyon::Branch::retarded, 50);
        auto oracle = tachyon::potential_fields_oracle(beta, test, tachyon::Branch::retarded,
                                                       BigReal::pow10(-8, 50), -roots[0].tau, 50);
        BigReal rel = norm(oracle.e_field - exact.e_field) / norm(exact.e_field);
        rep.check("field-oracle-agreement", rel < BigReal::pow10(-13), "rel " + rel.format(3));
    }
    // tunneling conservation and classify/integrate agreement
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ud(0.0, 1.0);
        bool ok = true;
        std::string detail;
        for (int i = 0; i < 50 && ok; ++i) {
            double e_total = 0.2 + 3.0 * ud(rng);
            double cap = std::sqrt(1.0 + e_total * e_total) - 1e-6;
            double p_y = (2.0 * ud(rng) - 1.0) * std::min(2.5, cap);
            tachyon::BarrierProfile bar{0.1 + 3.0 * ud(rng), 1.0, 2.0, 3.0, 4.0};
            auto inc = tachyon::classify_incidence(e_total, p_y, bar);
            auto tr = tachyon::integrate_2d(e_total, p_y, bar, 0.0, 5.0, {1e-2, 1e-12});
            if ((tr.outcome == tachyon::Outcome::tunneled) != inc.tunnels) {
                ok = false;
                detail = "classification mismatch at E=" + std::to_string(e_total) +
                         " p_y=" + std::to_string(p_y);
            }
            for (const auto& s : tr.states)
                if (tachyon::Trajectory::energy_residual(s, bar, e_total) > 1e-12) {
                    ok = false;
                    detail = "energy residual above 1e-12";
                    break;
                }
        }
        rep.check("tunnel-conservation-and-classification", ok, detail);
    }
    // determinism across worker counts
    {
        tachyon::ScanConfig cfg;
        cfg.beta_min = BigReal::from_string("2", 40);
        cfg.beta_max = BigReal::from_string("2.2", 40);
        cfg.samples = 4;
        cfg.mode = Mode::retarded;
        cfg.policy = PrecisionPolicy{30, 2.0, 1e-10, 240};
        cfg.exclusion_radius = BigReal::from_int(0);
        auto r1 = tachyon::sweep(cfg, 1);
        auto r2 = tachyon::sweep(cfg, 3);
        r1.meta.timestamp = r2.meta.timestamp = 0;
        std::ostringstream o1, o2;
        tachyon::write_result(o1, r1);
        tachyon::write_result(o2, r2);
        rep.check("worker-determinism", o1.str() == o2.str());
    }
    if (rep.failures) {
        std::cout << rep.failures << " check(s) failed\n";
        return kExitVerify;
    }
    std::cout << "all checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"electromagnetic self-interaction of a charged tachyon on a circular orbit"};
    app.require_subcommand(1);

    CommonFlags common;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--digits", common.digits, "starting working precision, decimal digits");
        sub->add_option("--tol", common.tol, "precision-ladder agreement tolerance");
        sub->add_option("--max-digits", common.max_digits, "precision-ladder cap");
        sub->add_option("--workers", common.workers, "worker threads (0 = auto)");
        sub->add_option("--output", common.output, "output file path");
        sub->add_option("--config", common.config_path, "key = value config file; flags override");
        sub->add_option("--timestamp", common.timestamp,
                        "unix timestamp recorded in output headers (default: now)");
    };

    // singular
    auto* c_singular = app.add_subcommand("singular", "singular velocity spectrum");
    int count = 15;
    c_singular->add_option("--count", count, "number of eigenvalues");
    add_common(c_singular);

    // nroots
    auto* c_nroots = app.add_subcommand("nroots", "null-root count and roots at one speed");
    std::string beta_str;
    c_nroots->add_option("--beta", beta_str, "orbit speed in units of c");
    add_common(c_nroots);

    // zscan / epsilon
    auto* c_zscan = app.add_subcommand("zscan", "coarse Z(beta) sweep with exclusion windows");
    auto* c_eps = app.add_subcommand("epsilon", "azimuthal-to-radial ratio sweep (retarded)");
    std::string min_str, max_str, mode_str = "feynman_wheeler", excl_str = "0.05";
    int samples = 0;
    bool resume = false;
    for (auto* sub : {c_zscan, c_eps}) {
        sub->add_option("--min", min_str, "lower end of the beta range");
        sub->add_option("--max", max_str, "upper end of the beta range");
        sub->add_option("--samples", samples, "grid size");
        sub->add_option("--exclusion", excl_str, "skip width around each singular velocity");
        sub->add_flag("--resume", resume, "reuse leading rows of an interrupted run");
        add_common(sub);
    }
    c_zscan->add_option("--mode", mode_str, "feynman_wheeler | retarded");

    // zoom
    auto* c_zoom = app.add_subcommand("zoom", "fine window around a singular velocity");
    std::string center_str, width_str;
    c_zoom->add_option("--center", center_str, "window center (decimal string)");
    c_zoom->add_option("--width", width_str, "window width (decimal string)");
    c_zoom->add_option("--samples", samples, "grid size");
    c_zoom->add_option("--mode", mode_str, "feynman_wheeler | retarded");
    c_zoom->add_flag("--resume", resume, "reuse leading rows of an interrupted run");
    add_common(c_zoom);

    // tunnel
    auto* c_tunnel = app.add_subcommand("tunnel", "integrate a barrier trajectory");
    add_common(c_tunnel);

    // verify
    auto* c_verify = app.add_subcommand("verify", "run the built-in verification checks");
    std::uint64_t seed = 20240811;
    bool perturb = false;
    c_verify->add_option("--seed", seed, "seed for the randomized checks");
    c_verify->add_flag("--perturb-fixture", perturb, "self-test: corrupt a fixture constant");
    add_common(c_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(c_singular)) {
            ConfigLayer cfgfile(common.config_path, "singular");
            cfgfile.apply_num(c_singular->get_option("--count"), "count", count);
            cfgfile.apply_num(c_singular->get_option("--digits"), "digits", common.digits);
            if (count < 1) {
                std::cerr << "singular: --count must be >= 1\n";
                return kExitUsage;
            }
            auto sv = tachyon::singular_velocities(count, common.digits);
            std::ostream* os = &std::cout;
            std::ofstream file;
            if (!common.output.empty()) {
                file = open_output(common.output);
                os = &file;
            }
            for (const auto& s : sv) *os << s.beta.to_string() << "\n";
            return 0;
        }

        if (app.got_subcommand(c_nroots)) {
            ConfigLayer cfgfile(common.config_path, "nroots");
            cfgfile.apply(c_nroots->get_option("--beta"), "beta", beta_str);
            if (beta_str.empty()) {
                std::cerr << "nroots: --beta is required\n";
                return kExitUsage;
            }
            BigReal beta = parse_real(beta_str, common.digits);
            try {
                auto roots = tachyon::find_roots(beta, common.digits);
                std::cout << "N = " << tachyon::count_roots(beta, common.digits) << "\n";
                for (const auto& r : roots)
                    std::cout << "tau " << r.tau.format(20) << "  phi " << r.phi.format(20) << "  K "
                              << r.k_factor.format(8) << "\n";
            } catch (const tachyon::AmbiguousRootCount& e) {
                std::cout << "N ambiguous at this precision: " << e.n_low << " or " << e.n_high
                          << " (beta within the tangency threshold of a singular velocity)\n";
            }
            return 0;
        }

        if (app.got_subcommand(c_zscan) || app.got_subcommand(c_eps)) {
            bool is_eps = app.got_subcommand(c_eps);
            const char* name = is_eps ? "epsilon" : "zscan";
            CLI::App* sub = is_eps ? c_eps : c_zscan;
            ConfigLayer cfgfile(common.config_path, name);
            cfgfile.apply(sub->get_option("--min"), "min", min_str);
            cfgfile.apply(sub->get_option("--max"), "max", max_str);
            cfgfile.apply_num(sub->get_option("--samples"), "samples", samples);
            cfgfile.apply(sub->get_option("--exclusion"), "exclusion", excl_str);
            if (!is_eps) cfgfile.apply(sub->get_option("--mode"), "mode", mode_str);
            if (min_str.empty() || max_str.empty() || samples < 2) {
                std::cerr << name << ": --min, --max and --samples >= 2 are required\n";
                return kExitUsage;
            }
            tachyon::ScanConfig cfg;
            cfg.beta_min = parse_real(min_str, common.digits);
            cfg.beta_max = parse_real(max_str, common.digits);
            cfg.samples = samples;
            cfg.mode = is_eps ? Mode::retarded : tachyon::mode_from_string(mode_str);
            cfg.policy = common.policy();
            cfg.exclusion_radius = parse_real(excl_str, common.digits);
            cfg.validate();
            return run_scan_command(name, common, cfg, resume);
        }

        if (app.got_subcommand(c_zoom)) {
            ConfigLayer cfgfile(common.config_path, "zoom");
            cfgfile.apply(c_zoom->get_option("--center"), "center", center_str);
            cfgfile.apply(c_zoom->get_option("--width"), "width", width_str);
            cfgfile.apply_num(c_zoom->get_option("--samples"), "samples", samples);
            cfgfile.apply(c_zoom->get_option("--mode"), "mode", mode_str);
            if (center_str.empty() || width_str.empty() || samples < 2) {
                std::cerr << "zoom: --center, --width and --samples >= 2 are required\n";
                return kExitUsage;
            }
            if (common.output.empty()) {
                std::cerr << "zoom: --output is required\n";
                return kExitUsage;
            }
            BigReal center = parse_real(center_str, common.digits);
            BigReal width = parse_real(width_str, common.digits);
            std::vector<tachyon::ForceSample> prefix;
            if (resume) {
                std::ifstream in(common.output);
                if (in) {
                    prefix = tachyon::read_result(in).rows;
                    std::cout << "resuming: " << prefix.size() << " rows already present\n";
                }
            }
            tachyon::ScanResult r =
                tachyon::zoom(center, width, samples, common.policy(),
                              tachyon::mode_from_string(mode_str), common.workers,
                              resume ? &prefix : nullptr);
            r.meta.timestamp = common.effective_timestamp();
            auto out = open_output(common.output);
            tachyon::write_result(out, r);
            print_census(r);
            return 0;
        }

        if (app.got_subcommand(c_tunnel)) {
            if (common.config_path.empty()) {
                std::cerr << "tunnel: --config is required\n";
                return kExitUsage;
            }
            std::ifstream probe(common.config_path);
            if (!probe) {
                std::cerr << "tunnel: cannot read config file: " << common.config_path << "\n";
                return kExitIo;
            }
            probe.close();
            ConfigLayer cfgfile(common.config_path, "tunnel");
            auto need = [&](const char* key) {
                if (!cfgfile.has(key))
                    throw std::invalid_argument(std::string("tunnel: config key missing: ") + key);
                return std::stod(cfgfile.get(key));
            };
            double e_total = need("e_total");
            double p_y = cfgfile.has("p_y") ? std::stod(cfgfile.get("p_y")) : 0.0;
            tachyon::BarrierProfile bar;
            bar.u_max = need("barrier.u_max");
            bar.x_rise = need("barrier.x_rise");
            bar.x_plateau_start = need("barrier.x_plateau_start");
            bar.x_plateau_end = need("barrier.x_plateau_end");
            bar.x_fall = need("barrier.x_fall");
            double x_start = need("x_start");
            double x_end = need("x_end");
            tachyon::StepControl step;
            if (cfgfile.has("dx")) step.dx = std::stod(cfgfile.get("dx"));
            if (cfgfile.has("tol")) step.tol = std::stod(cfgfile.get("tol"));

            tachyon::Trajectory tr;
            try {
                tr = tachyon::integrate_2d(e_total, p_y, bar, x_start, x_end, step);
            } catch (const std::invalid_argument& e) {
                std::cerr << "tunnel: ill-posed configuration: " << e.what() << "\n";
                return kExitUsage;
            }
            if (!common.output.empty()) {
                auto out = open_output(common.output);
                std::vector<std::pair<std::string, std::string>> header{
                    {"e_total", cfgfile.get("e_total")},
                    {"p_y", cfgfile.get("p_y", "0")},
                    {"barrier.u_max", cfgfile.get("barrier.u_max")},
                    {"barrier.x_rise", cfgfile.get("barrier.x_rise")},
                    {"barrier.x_plateau_start", cfgfile.get("barrier.x_plateau_start")},
                    {"barrier.x_plateau_end", cfgfile.get("barrier.x_plateau_end")},
                    {"barrier.x_fall", cfgfile.get("barrier.x_fall")},
                    {"x_start", cfgfile.get("x_start")},
                    {"x_end", cfgfile.get("x_end")},
                    {"dx", std::to_string(step.dx)},
                    {"tol", std::to_string(step.tol)},
                };
                tachyon::write_trajectory(out, tr, header);
            }
            if (tr.outcome == tachyon::Outcome::tunneled) {
                double entry = 0, exit_t = 0;
                bool saw_forbidden = false, saw_exit = false;
                for (std::size_t i = 0; i < tr.states.size(); ++i) {
                    if (tr.tags[i] == tachyon::SegmentTag::forbidden_backward && !saw_forbidden) {
                        saw_forbidden = true;
                        entry = tr.states[i].t;
                    }
                    if (tr.tags[i] == tachyon::SegmentTag::transmitted_forward && !saw_exit) {
                        saw_exit = true;
                        exit_t = tr.states[i].t;
                    }
                }
                std::cout << "outcome: tunneled\n";
                if (saw_forbidden && saw_exit)
                    std::cout << "forbidden-region entry t = " << entry << ", exit t = " << exit_t
                              << "\n";
            } else {
                double x_turn = tr.states.front().x;
                for (const auto& s : tr.states) x_turn = std::max(x_turn, s.x);
                std::cout << "outcome: reflected\nturning x = " << x_turn << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(c_verify)) {
            return run_verify(seed, perturb);
        }
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
