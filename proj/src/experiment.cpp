// experiment.cpp — presets, config parsing, scheme runs and artifact writers

#include "twomode/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "twomode/errors.hpp"
#include "twomode/fock_oracle.hpp"
#include "twomode/gaussian.hpp"

namespace twomode {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw ValidationError(key + ": '" + v + "' is not a number");
    }
    if (pos != t.size()) throw ValidationError(key + ": '" + v + "' is not a number");
    return x;
}

int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ValidationError(key + ": '" + v + "' is not an integer");
    return static_cast<int>(x);
}

bool parse_flag(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t == "on" || t == "true" || t == "1" || t == "yes") return true;
    if (t == "off" || t == "false" || t == "0" || t == "no") return false;
    throw ValidationError(key + ": expected on or off, got '" + v + "'");
}

const std::set<std::string>& numeric_keys() {
    static const std::set<std::string> keys{"g",       "kappa0", "omega_c",      "alpha", "beta",
                                            "n0",      "M",      "delta_t",      "s",     "mixture_rate"};
    return keys;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw ValidationError("failed writing " + path.string());
}

std::string trajectory_csv(const SchemeResult& r) {
    const bool energies = !r.energies.empty();
    std::string out = "t,n_plus,n_minus,re_cross,im_cross,lambda_c,aa,bb,re_ab,im_ab";
    if (energies) out += ",e_s0,e_sg,e_1,e_e";
    out += '\n';
    const auto& tr = r.trajectory;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& m = tr.states[i];
        const auto ab = to_mode_basis(m);
        std::vector<double> row{tr.times[i], m.n_plus,  m.n_minus, m.cross.real(), m.cross.imag(),
                                lambda_c(m), ab.aa,     ab.bb,     ab.ab.real(),   ab.ab.imag()};
        if (energies) {
            const auto& e = r.energies[i];
            row.insert(row.end(), {e.e_s0, e.e_sg, e.e_1, e.e_e});
        }
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += format_number(row[k]);
        }
        out += '\n';
    }
    return out;
}

json moments_json(const MomentState& m) {
    // + 0.0 folds -0 into 0
    return json{{"n_plus", m.n_plus + 0.0},
                {"n_minus", m.n_minus + 0.0},
                {"re_cross", m.cross.real() + 0.0},
                {"im_cross", m.cross.imag() + 0.0}};
}

json params_json(const RunConfig& cfg) {
    const auto& p = cfg.params;
    return json{{"omega0", p.omega0},     {"g", p.g},
                {"kappa0", p.kappa0},     {"omega_c", p.omega_c},
                {"alpha", p.alpha},       {"beta", p.beta},
                {"n0", p.occupation0()},  {"M", p.M},
                {"delta_t", std::isinf(p.delta_t) ? json("inf") : json(p.delta_t)},
                {"mixture_rate", p.mixture_rate}};
}

bool has(const RunConfig& cfg, SchemeKind k) {
    return std::find(cfg.schemes.begin(), cfg.schemes.end(), k) != cfg.schemes.end();
}

json oracle_check(const RunConfig& cfg) {
    std::vector<double> times;
    for (double t : cfg.grid.points())
        if (t <= 50.0) times.push_back(t);
    if (times.size() < 2) return json{{"skipped", "fewer than two grid points in [0, 50]"}};
    if (cfg.params.occupation0() > 3.0) return json{{"skipped", "occupation above oracle range"}};
    const auto rep = oracle_compare(cfg.params, times, cfg.lamb_shift);
    return json{{"t_max", times.back()},
                {"cutoff", rep.cutoff},
                {"moment_deviation", rep.moment_deviation},
                {"fidelity_deviation", rep.fidelity_deviation}};
}

} // namespace

const char* scheme_name(SchemeKind k) {
    switch (k) {
    case SchemeKind::Exact: return "exact";
    case SchemeKind::Redfield: return "redfield";
    case SchemeKind::CpRedfield: return "cp_redfield";
    case SchemeKind::CgRedfield: return "cg_redfield";
    case SchemeKind::Global: return "global";
    case SchemeKind::Local: return "local";
    case SchemeKind::Mixture: return "mixture";
    }
    return "?";
}

SchemeKind parse_scheme(const std::string& name) {
    for (auto k : {SchemeKind::Exact, SchemeKind::Redfield, SchemeKind::CpRedfield, SchemeKind::CgRedfield,
                   SchemeKind::Global, SchemeKind::Local, SchemeKind::Mixture})
        if (name == scheme_name(k)) return k;
    throw ValidationError("schemes: unknown scheme '" + name + "'");
}

std::vector<double> TimeGrid::points() const {
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double f = count > 1 ? double(i) / (count - 1) : 0.0;
        t[i] = log ? start * std::pow(stop / start, f) : start + (stop - start) * f;
    }
    if (count > 1) t.back() = stop;
    return t;
}

TimeGrid parse_grid(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3 && parts.size() != 4)
        throw ValidationError("grid: expected start:stop:count[:lin|log], got '" + spec + "'");
    TimeGrid g;
    g.start = parse_double("grid start", parts[0]);
    g.stop = parse_double("grid stop", parts[1]);
    g.count = parse_int("grid count", parts[2]);
    if (parts.size() == 3) return g;
    if (parts[3] == "log") g.log = true;
    else if (parts[3] != "lin") throw ValidationError("grid: spacing must be lin or log");
    return g;
}

void RunConfig::validate() const {
    params.validate();
    if (params.omega0 != 1.0) throw ValidationError("omega0: must be 1 (all quantities are in units of omega0)");
    if (schemes.empty()) throw ValidationError("schemes: at least one scheme is required");
    if (has(*this, SchemeKind::Mixture) && !(has(*this, SchemeKind::Local) && has(*this, SchemeKind::Global)))
        throw ValidationError("schemes: mixture requires both local and global");
    if (grid.count < 2) throw ValidationError("grid: count must be at least 2");
    if (!(grid.start >= 0.0) || !(grid.stop > grid.start) || !std::isfinite(grid.stop))
        throw ValidationError("grid: need 0 <= start < stop");
    if (grid.log && !(grid.start > 0.0)) throw ValidationError("grid: log spacing needs start > 0");
    if (s_filter && !std::isfinite(*s_filter)) throw ValidationError("s: must be finite");
}

double RunConfig::cg_filter() const {
    return s_filter ? *s_filter : secular_filter(params.delta_t, params.g)(Plus, Minus);
}

std::vector<std::string> preset_names() {
    return {"fig3", "fig4",  "fig5",  "fig6",  "fig7",          "fig8",         "fig9a",
            "fig9b", "fig10a", "fig10b", "energies_high", "energies_low", "recurrence"};
}

RunConfig preset(const std::string& name) {
    RunConfig c;
    c.preset = name;
    c.params.set_occupation0(10.0);
    c.params.g = 0.3;
    c.params.kappa0 = 0.04;
    c.params.omega_c = 3.0;
    c.params.alpha = 1.0;
    c.params.M = 400;
    c.params.mixture_rate = 0.4 * c.params.kappa0;
    c.grid = {0.0, 300.0, 301, false};
    using K = SchemeKind;
    const std::vector<K> all{K::Exact, K::Redfield, K::CpRedfield, K::Global, K::Local, K::Mixture};
    if (name == "fig3") {
        c.schemes = {K::Exact, K::Global, K::Local, K::Mixture};
    } else if (name == "fig4") {
        c.schemes = {K::Exact, K::CpRedfield, K::Redfield};
    } else if (name == "fig5" || name == "fig6" || name == "fig8") {
        c.schemes = all;
    } else if (name == "fig7") {
        c.schemes = {K::Global, K::Local};
        c.reference = K::Local;
    } else if (name == "fig9a" || name == "fig10a") {
        c.params.g = 0.04;
        c.schemes = all;
    } else if (name == "fig9b" || name == "fig10b") {
        c.params.set_occupation0(0.01);
        c.schemes = all;
    } else if (name == "energies_high") {
        c.schemes = {K::Exact};
    } else if (name == "energies_low") {
        c.params.set_occupation0(0.01);
        c.schemes = {K::Exact};
    } else if (name == "recurrence") {
        c.params.M = 50;
        c.schemes = {K::Exact};
        c.grid = {0.0, 150.0, 301, false};
    } else {
        throw ValidationError("preset: unknown preset '" + name + "'");
    }
    return c;
}

void apply_setting(RunConfig& cfg, const std::string& key_in, const std::string& value_in) {
    const std::string key = trim(key_in), value = trim(value_in);
    auto& p = cfg.params;
    if (key == "preset") {
        const auto keep_out = cfg.out_dir;
        cfg = preset(value);
        cfg.out_dir = keep_out;
    } else if (key == "g") {
        p.g = parse_double(key, value);
    } else if (key == "kappa0") {
        p.kappa0 = parse_double(key, value);
    } else if (key == "omega_c") {
        p.omega_c = parse_double(key, value);
    } else if (key == "alpha") {
        p.alpha = parse_double(key, value);
    } else if (key == "beta") {
        p.beta = parse_double(key, value);
    } else if (key == "n0") {
        try {
            p.set_occupation0(parse_double(key, value));
        } catch (const DomainError& e) {
            throw ValidationError(std::string("n0: ") + e.what());
        }
    } else if (key == "M") {
        p.M = parse_int(key, value);
    } else if (key == "delta_t") {
        p.delta_t = parse_double(key, value);
        cfg.s_filter.reset();
    } else if (key == "s") {
        cfg.s_filter = parse_double(key, value);
    } else if (key == "mixture_rate") {
        p.mixture_rate = parse_double(key, value);
    } else if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& s : split(value, ','))
            if (!s.empty()) cfg.schemes.push_back(parse_scheme(s));
    } else if (key == "grid") {
        cfg.grid = parse_grid(value);
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "lamb_shift") {
        cfg.lamb_shift = parse_flag(key, value);
    } else if (key == "oracle_verify") {
        cfg.oracle_verify = parse_flag(key, value);
    } else if (key == "reference") {
        cfg.reference = parse_scheme(value);
    } else {
        throw ValidationError("unknown key '" + key + "'");
    }
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
    RunConfig cfg = base;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        try {
            if (eq == std::string::npos) throw ValidationError("expected key = value");
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

OracleReport oracle_compare(const ModelParams& p, const std::vector<double>& times, bool lamb_shift) {
    const CoefficientSet c = dissipator_coefficients(p);
    const Trajectory loc = propagate(local_generator(c, lamb_shift), MomentState{}, times);
    const Trajectory glob = propagate(global_generator(c, lamb_shift), MomentState{}, times);
    double n_max = 0.0;
    for (const auto* tr : {&loc, &glob})
        for (const auto& m : tr->states) n_max = std::max({n_max, m.n_plus, m.n_minus});
    OracleReport rep;
    // correlated states have heavier excitation tails than the product estimate; widen on demand
    rep.cutoff = cutoff_for_occupation(1.2 * n_max + 0.05, 1e-10);
    std::vector<TruncatedState> f_loc, f_glob;
    for (int attempt = 0;; ++attempt) {
        try {
            const auto vac = thermal_product_state(0.0, 0.0, rep.cutoff);
            f_loc = lindblad_propagate({OracleScheme::Kind::Local, 0.0, lamb_shift}, p, vac, times);
            f_glob = lindblad_propagate({OracleScheme::Kind::Global, 0.0, lamb_shift}, p, vac, times);
            break;
        } catch (const NumericalError&) {
            if (attempt == 3) throw;
            rep.cutoff = rep.cutoff * 3 / 2;
        }
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (const auto& [fock, tr] : {std::pair{&f_loc, &loc}, std::pair{&f_glob, &glob}}) {
            const double d = (to_real(state_moments((*fock)[i])) - to_real(tr->states[i])).cwiseAbs().maxCoeff();
            rep.moment_deviation = std::max(rep.moment_deviation, d);
        }
        const double f = fidelity_truncated(f_loc[i], f_glob[i]);
        const double f2 = gaussian_fidelity(loc.states[i], glob.states[i]).f2;
        rep.fidelity_deviation = std::max(rep.fidelity_deviation, std::abs(f * f - f2));
    }
    return rep;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunResult simulate(const RunConfig& cfg) {
    cfg.validate();
    const auto times = cfg.grid.points();
    const CoefficientSet c = dissipator_coefficients(cfg.params);
    const CpThreshold cp = cp_threshold(c);
    const MomentState vac{};
    RunResult r;

    auto moments = [&](SchemeKind k) -> Trajectory {
        switch (k) {
        case SchemeKind::Redfield: return propagate(cg_redfield_generator(c, 1.0, cfg.lamb_shift), vac, times);
        case SchemeKind::CpRedfield:
            return propagate(cg_redfield_generator(c, cp.bound, cfg.lamb_shift), vac, times);
        case SchemeKind::CgRedfield:
            return propagate(cg_redfield_generator(c, cfg.cg_filter(), cfg.lamb_shift), vac, times);
        case SchemeKind::Global: return propagate(global_generator(c, cfg.lamb_shift), vac, times);
        case SchemeKind::Local: return propagate(local_generator(c, cfg.lamb_shift), vac, times);
        default: return {};
        }
    };
    for (auto k : cfg.schemes) {
        const std::string name = scheme_name(k);
        if (k == SchemeKind::Mixture) continue;
        SchemeResult sr;
        try {
            if (k == SchemeKind::Exact) {
                auto ex = run_exact(cfg.params, times, true);
                sr.trajectory = std::move(ex.trajectory);
                sr.energies = std::move(ex.energies);
            } else {
                sr.trajectory = moments(k);
            }
        } catch (const NumericalError& e) {
            throw NumericalError("scheme " + name + ": " + e.what());
        }
        sr.trajectory.scheme = name;
        r.schemes[name] = std::move(sr);
    }
    if (has(cfg, SchemeKind::Mixture)) {
        SchemeResult sr;
        sr.trajectory = mixture_moments(r.schemes.at("local").trajectory, r.schemes.at("global").trajectory,
                                        cfg.params.mixture_rate);
        r.schemes["mixture"] = std::move(sr);
    }

    json s;
    s["preset"] = cfg.preset;
    s["units"] = "omega0";
    s["params"] = params_json(cfg);
    s["lamb_shift"] = cfg.lamb_shift;
    s["schemes"] = json::array();
    for (auto k : cfg.schemes) s["schemes"].push_back(scheme_name(k));
    s["cp_threshold"] = cp.bound;
    s["cp_threshold_per_channel"] = json::array({cp.per_channel[0], cp.per_channel[1]});
    s["cg_filter"] = cfg.cg_filter();
    s["coefficients"] = json{{"delta_omega_plus", c.delta_omega_plus},
                             {"delta_omega_minus", c.delta_omega_minus},
                             {"delta_omega_A", c.delta_omega_A},
                             {"n_plus", c.n_plus},
                             {"n_minus", c.n_minus},
                             {"n0", c.n0}};
    json ss;
    ss["global"] = moments_json(steady_state(global_generator(c, cfg.lamb_shift)));
    ss["local"] = moments_json(steady_state(local_generator(c, cfg.lamb_shift)));
    ss["cp_redfield"] = moments_json(steady_state(cg_redfield_generator(c, cp.bound, cfg.lamb_shift)));
    ss["redfield"] = moments_json(steady_state(cg_redfield_generator(c, 1.0, cfg.lamb_shift)));
    if (has(cfg, SchemeKind::CgRedfield))
        ss["cg_redfield"] = moments_json(steady_state(cg_redfield_generator(c, cfg.cg_filter(), cfg.lamb_shift)));
    s["steady_states"] = ss;
    if (cfg.params.g > 0.0) {
        s["gap_first_order_cp_redfield"] = asymptotic_gap_first_order(cp.bound, cfg.params);
        if (has(cfg, SchemeKind::CgRedfield))
            s["gap_first_order_cg_redfield"] = asymptotic_gap_first_order(cfg.cg_filter(), cfg.params);
    }
    s["recurrence_time"] = recurrence_time(cfg.params);
    try {
        const double tau = memory_time(cfg.params);
        s["memory_time"] = tau;
        s["memory_time_resolved"] = memory_time_resolved(tau, cfg.params);
    } catch (const NumericalError& e) {
        s["memory_time"] = nullptr;
        s["memory_time_error"] = e.what();
    }
    if (r.schemes.count("exact")) s["exact_final"] = moments_json(r.schemes.at("exact").trajectory.states.back());
    if (cfg.oracle_verify) s["oracle"] = oracle_check(cfg);
    r.summary = std::move(s);
    return r;
}

RunResult run(const RunConfig& cfg) {
    RunResult r = simulate(cfg);
    fs::create_directories(cfg.out_dir);
    for (const auto& [name, sr] : r.schemes) {
        const fs::path path = cfg.out_dir / (name + ".csv");
        write_text(path, trajectory_csv(sr));
        r.files.push_back(path);
    }
    const fs::path sp = cfg.out_dir / "summary.json";
    write_text(sp, r.summary.dump(2) + "\n");
    r.files.push_back(sp);
    return r;
}

std::vector<FidelityRow> fidelity_run(const RunConfig& cfg_in, bool write) {
    RunConfig cfg = cfg_in;
    using K = SchemeKind;
    cfg.schemes = {K::Local, K::Global, K::CpRedfield, K::Redfield};
    if (cfg.reference == K::Exact) cfg.schemes.push_back(K::Exact);
    else if (cfg.reference == K::CgRedfield) cfg.schemes.push_back(K::CgRedfield);
    else if (cfg.reference == K::Mixture) throw ValidationError("reference: mixture has no Gaussian state");
    const RunResult r = simulate(cfg);
    const auto& ref = r.schemes.at(scheme_name(cfg.reference)).trajectory;
    const auto& tr = [&](K k) -> const Trajectory& { return r.schemes.at(scheme_name(k)).trajectory; };

    std::vector<FidelityRow> rows;
    for (std::size_t i = 0; i < ref.times.size(); ++i) {
        const double t = ref.times[i];
        auto f2 = [&](K k) { return gaussian_fidelity(tr(k).states[i], ref.states[i]); };
        FidelityRow row{};
        row.t = t;
        try {
            row.f2_local = f2(K::Local).f2;
            row.f2_global = f2(K::Global).f2;
            row.f2_cp_redfield = f2(K::CpRedfield).f2;
            const auto red = f2(K::Redfield);
            row.re_f2_redfield = red.f2;
            row.redfield_physical = red.physical;
        } catch (const NumericalError& e) {
            throw NumericalError(std::string("fidelity at t = ") + format_number(t) + ": " + e.what());
        }
        const double fb = mixture_fidelity_lower_bound(std::sqrt(row.f2_local), std::sqrt(row.f2_global),
                                                       cfg.params.mixture_rate, t);
        row.f2_mixture_lower_bound = fb * fb;
        rows.push_back(row);
    }
    if (write) {
        fs::create_directories(cfg.out_dir);
        std::string out = "t,f2_local,f2_global,f2_cp_redfield,re_f2_redfield,f2_mixture_lower_bound,"
                          "redfield_nonphysical\n";
        for (const auto& row : rows) {
            for (double v : {row.t, row.f2_local, row.f2_global, row.f2_cp_redfield, row.re_f2_redfield,
                             row.f2_mixture_lower_bound})
                out += format_number(v) + ',';
            out += row.redfield_physical ? "0\n" : "1\n";
        }
        write_text(cfg.out_dir / "fidelity.csv", out);
    }
    return rows;
}

std::vector<SweepEntry> sweep(const RunConfig& cfg, const std::string& axis,
                              const std::vector<std::string>& values, unsigned threads) {
    if (!numeric_keys().count(axis)) throw ValidationError("sweep: '" + axis + "' is not a sweepable parameter");
    if (values.empty()) throw ValidationError("sweep: empty value list");
    cfg.validate();
    std::vector<SweepEntry> entries(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        entries[i].value = values[i];
        entries[i].dir = cfg.out_dir / (axis + "_" + std::to_string(i));
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < entries.size(); i = next++) {
            auto& e = entries[i];
            try {
                RunConfig c = cfg;
                apply_setting(c, axis, e.value);
                c.out_dir = e.dir;
                e.summary = run(c).summary;
                e.ok = true;
            } catch (const std::exception& ex) {
                e.error = ex.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(entries.size()));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    json index;
    index["axis"] = axis;
    index["runs"] = json::array();
    for (const auto& e : entries) {
        json item{{"value", e.value}, {"dir", e.dir.filename().string()}, {"ok", e.ok}};
        if (e.ok) {
            json files = json::array();
            for (const auto& entry : fs::directory_iterator(e.dir)) files.push_back(entry.path().filename().string());
            std::sort(files.begin(), files.end());
            item["files"] = files;
        } else {
            item["error"] = e.error;
        }
        index["runs"].push_back(item);
    }
    fs::create_directories(cfg.out_dir);
    write_text(cfg.out_dir / "index.json", index.dump(2) + "\n");
    return entries;
}

} // namespace twomode
