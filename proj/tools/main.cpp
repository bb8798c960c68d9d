// main.cpp — twomode command line: run, fidelity, sweep, threshold, verify

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "twomode/errors.hpp"
#include "twomode/experiment.hpp"
#include "twomode/fock_oracle.hpp"
#include "twomode/gaussian.hpp"

using namespace twomode;

namespace {

struct Common {
    std::string preset;
    std::string config_file;
    std::vector<std::string> sets;
    std::string out;
    std::string lamb_shift;
    std::string grid;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--preset", c.preset, "named parameter set")
        ->check(CLI::IsMember(preset_names()));
    app->add_option("-c,--config", c.config_file, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--set", c.sets, "override, key=value (repeatable)")->allow_extra_args(false);
    app->add_option("--out", c.out, "output directory");
    app->add_option("--lamb-shift", c.lamb_shift, "on|off")->check(CLI::IsMember({"on", "off"}));
    app->add_option("--grid", c.grid, "start:stop:count[:lin|log]");
}

RunConfig build_config(const Common& c) {
    RunConfig cfg = c.preset.empty() ? preset("fig4") : preset(c.preset);
    if (!c.config_file.empty()) {
        std::ifstream f(c.config_file);
        std::stringstream ss;
        ss << f.rdbuf();
        cfg = parse_config(ss.str(), cfg);
    }
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
        try {
            apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("--set ") + kv + ": " + e.what());
        }
    }
    if (!c.out.empty()) cfg.out_dir = c.out;
    if (!c.lamb_shift.empty()) cfg.lamb_shift = c.lamb_shift == "on";
    if (!c.grid.empty()) cfg.grid = parse_grid(c.grid);
    cfg.validate();
    return cfg;
}

int cmd_threshold(const RunConfig& cfg) {
    const auto cp = cp_threshold(dissipator_coefficients(cfg.params));
    std::printf("cp_threshold %.6f\n", cp.bound);
    std::printf("per_channel %.6f %.6f\n", cp.per_channel[0], cp.per_channel[1]);
    return 0;
}

int cmd_verify(const RunConfig& cfg, int draws, unsigned seed) {
    bool ok = true;
    auto report = [&](const std::string& what, double dev, double tol) {
        const bool pass = dev <= tol;
        ok = ok && pass;
        std::printf("%-40s %.3e  (tol %.0e)  %s\n", what.c_str(), dev, tol, pass ? "ok" : "FAIL");
    };

    // vacuum against a thermal product: closed form, Gaussian formula and Fock space
    const double np = 0.7, nm = 1.3;
    const double exact_f2 = 1.0 / ((np + 1.0) * (nm + 1.0));
    const MomentState vac{}, th{np, nm, 0.0};
    report("gaussian F^2(vacuum, thermal)", std::abs(gaussian_fidelity(vac, th).f2 - exact_f2), 1e-6);
    const int K = cutoff_for_occupation(nm, 1e-12);
    const double ff = fidelity_truncated(thermal_product_state(0, 0, K), thermal_product_state(np, nm, K));
    report("fock F^2(vacuum, thermal)", std::abs(ff * ff - exact_f2), 1e-6);

    std::vector<double> times;
    for (int i = 0; i <= 25; ++i) times.push_back(2.0 * i);
    auto compare = [&](const ModelParams& p, const std::string& label) {
        const auto rep = oracle_compare(p, times, cfg.lamb_shift);
        report(label + " moments (K=" + std::to_string(rep.cutoff) + ")", rep.moment_deviation, 1e-4);
        report(label + " F^2(local, global)", rep.fidelity_deviation, 1e-4);
    };
    if (cfg.params.occupation0() <= 3.0) compare(cfg.params, "config");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_n(std::log(0.05), std::log(3.0)), gdist(0.05, 0.3);
    for (int i = 0; i < draws; ++i) {
        ModelParams p = cfg.params;
        p.set_occupation0(std::exp(log_n(rng)));
        p.g = gdist(rng);
        char label[64];
        std::snprintf(label, sizeof label, "draw %d (N0=%.3f g=%.3f)", i, p.occupation0(), p.g);
        compare(p, label);
    }
    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two coupled oscillators with one mode attached to a bosonic bath"};
    app.require_subcommand(1);

    Common run_opts, fid_opts, sweep_opts, thr_opts, ver_opts;
    auto* run_cmd = app.add_subcommand("run", "simulate the selected schemes and write CSV + summary.json");
    add_common(run_cmd, run_opts);

    auto* fid_cmd = app.add_subcommand("fidelity", "F^2 of each scheme against a reference");
    add_common(fid_cmd, fid_opts);

    auto* sweep_cmd = app.add_subcommand("sweep", "repeat a run over values of one parameter");
    add_common(sweep_cmd, sweep_opts);
    std::string axis;
    std::vector<std::string> values;
    unsigned threads = 0;
    sweep_cmd->add_option("--axis", axis, "parameter to vary")->required();
    sweep_cmd->add_option("--values", values, "comma separated values")->required()->delimiter(',');
    sweep_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* thr_cmd = app.add_subcommand("threshold", "print the complete-positivity bound on S+-");
    add_common(thr_cmd, thr_opts);

    auto* ver_cmd = app.add_subcommand("verify", "compare the moment equations against the Fock-space oracle");
    add_common(ver_cmd, ver_opts);
    int draws = 3;
    unsigned seed = 12345;
    ver_cmd->add_option("--draws", draws, "random parameter draws")->check(CLI::NonNegativeNumber);
    ver_cmd->add_option("--seed", seed, "seed for the draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) {
            const auto r = run(build_config(run_opts));
            for (const auto& f : r.files) std::cout << f.string() << '\n';
        } else if (*fid_cmd) {
            const auto cfg = build_config(fid_opts);
            fidelity_run(cfg, true);
            std::cout << (cfg.out_dir / "fidelity.csv").string() << '\n';
        } else if (*sweep_cmd) {
            const auto entries = sweep(build_config(sweep_opts), axis, values, threads);
            int failed = 0;
            for (const auto& e : entries) {
                std::cout << axis << '=' << e.value << ' ' << (e.ok ? "ok" : "failed: " + e.error) << '\n';
                failed += !e.ok;
            }
            return failed ? 2 : 0;
        } else if (*thr_cmd) {
            return cmd_threshold(build_config(thr_opts));
        } else if (*ver_cmd) {
            return cmd_verify(build_config(ver_opts), draws, seed);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
