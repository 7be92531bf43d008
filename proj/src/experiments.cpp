#include "rlw/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>

#include "rlw/diagnostics.hpp"
#include "rlw/errors.hpp"
#include "rlw/field_io.hpp"
#include "rlw/problems.hpp"
#include "rlw/schemes.hpp"

namespace fs = std::filesystem;

namespace rlw {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string cell(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

/// Minimal CSV emitter; every number is printed with fixed %.16e so equal
/// configurations produce byte-identical files.
class Csv {
  public:
    Csv(const fs::path& path, const std::string& header) {
        f_ = std::fopen(path.string().c_str(), "w");
        if (!f_) throw ConfigError("cannot open '" + path.string() + "' for writing");
        std::fprintf(f_, "%s\n", header.c_str());
    }
    Csv(const Csv&) = delete;
    Csv& operator=(const Csv&) = delete;
    ~Csv() {
        if (f_) std::fclose(f_);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::fprintf(f_, "%s%s", i ? "," : "", cells[i].c_str());
        }
        std::fprintf(f_, "\n");
    }

  private:
    std::FILE* f_ = nullptr;
};

std::string resolve_out_dir(ConfigView& cv) {
    std::string out = cv.get_string("out", "out");
    if (const char* env = std::getenv("RLW_OUT")) {
        if (*env != '\0') out = env;
    }
    return out;
}

SolveConfig solve_from(ConfigView& cv) {
    SolveConfig sc;
    sc.rel_tol = cv.get_double("rel_tol", sc.rel_tol);
    sc.max_iters = cv.get_int("max_iters", sc.max_iters);
    sc.restart = cv.get_int("restart", sc.restart);
    const std::string m = cv.get_string("method", "krylov");
    if (m == "krylov") {
        sc.method = StageMethod::krylov;
    } else if (m == "fixed_point") {
        sc.method = StageMethod::fixed_point;
    } else {
        throw ConfigError("key 'method': expected krylov or fixed_point, got '" + m + "'");
    }
    sc.validate();
    return sc;
}

int nominal_order(SchemeKind kind) {
    return (kind == SchemeKind::lmp_pc6 || kind == SchemeKind::lep_pc6) ? 6 : 4;
}

std::vector<double> default_ladder(SchemeKind kind) {
    if (nominal_order(kind) == 6) return {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80};
    return {1.0 / 100, 1.0 / 200, 1.0 / 400, 1.0 / 800};
}

std::vector<std::string> scheme_list(ConfigView& cv) {
    auto schemes = cv.get_string_list("scheme", all_scheme_tags());
    if (schemes.empty()) throw ConfigError("the scheme list is empty");
    for (const std::string& tag : schemes) (void)scheme_from_tag(tag);  // validate early
    return schemes;
}

/// Appends one invariant record per step, skipping the duplicate entry
/// record when a run is resumed segment by segment.
struct InvariantCollector {
    RlwParams params;
    bool has_quad = false;
    std::vector<InvariantRecord> rows;
    long last_step = -1;

    void operator()(const SchemeState& st) {
        if (st.steps == last_step) return;
        last_step = st.steps;
        InvariantRecord r;
        r.t = st.t();
        r.mass = mass(st.u);
        r.momentum = momentum(st.u, params);
        r.hamiltonian = hamiltonian(st.u);
        if (has_quad) {
            r.quad_energy = quad_energy(st.u, st.q);
            r.has_quad = true;
        }
        rows.push_back(r);
    }
};

void write_invariants_csv(const fs::path& path, const std::vector<InvariantRecord>& rows) {
    Csv csv(path,
            "t,mass,momentum,hamiltonian,quad_energy,"
            "mass_drift,momentum_drift,hamiltonian_drift,quad_energy_drift");
    if (rows.empty()) return;
    const InvariantRecord& r0 = rows.front();
    for (const InvariantRecord& r : rows) {
        std::vector<std::string> cells = {cell(r.t), cell(r.mass), cell(r.momentum),
                                          cell(r.hamiltonian)};
        cells.push_back(r.has_quad ? cell(r.quad_energy) : "");
        cells.push_back(cell(r.mass - r0.mass));
        cells.push_back(cell(r.momentum - r0.momentum));
        cells.push_back(cell(r.hamiltonian - r0.hamiltonian));
        cells.push_back(r.has_quad ? cell(r.quad_energy - r0.quad_energy) : "");
        csv.row(cells);
    }
}

std::string snap_name(long step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%06ld.txt", step);
    return buf;
}

bool is_solver_failure(const std::exception& e) {
    return dynamic_cast<const SolverError*>(&e) != nullptr ||
           dynamic_cast<const DivergenceError*>(&e) != nullptr ||
           dynamic_cast<const StartupError*>(&e) != nullptr;
}

/// One (scheme, tau) cell of a convergence or efficiency table.
struct CellResult {
    bool ok = false;
    ErrorNorms err;
    double seconds = 0.0;
    std::string detail;
};

template <class MakeState, class ErrorOf>
CellResult run_cell(MakeState&& make_state, RlwOperators& ops, double T, ErrorOf&& error_of) {
    CellResult res;
    const auto begin = std::chrono::steady_clock::now();
    try {
        SchemeState st = make_state();
        run(st, T, ops);
        res.err = error_of(st);
        res.ok = true;
    } catch (const std::exception& e) {
        if (!is_solver_failure(e)) throw;
        res.detail = e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    return res;
}

void write_error_table(const fs::path& path, const std::vector<std::string>& schemes,
                       const std::vector<std::vector<double>>& taus,
                       const std::vector<std::vector<CellResult>>& cells) {
    Csv csv(path, "scheme,tau,e2,order2,einf,orderinf,status");
    for (std::size_t is = 0; is < schemes.size(); ++is) {
        const CellResult* prev = nullptr;
        for (std::size_t it = 0; it < taus[is].size(); ++it) {
            const CellResult& c = cells[is][it];
            std::vector<std::string> row = {schemes[is], cell(taus[is][it])};
            if (c.ok) {
                row.push_back(cell(c.err.l2));
                const bool rate_ok = prev && prev->ok && prev->err.l2 > 0.0 && c.err.l2 > 0.0;
                row.push_back(rate_ok ? cell(std::log2(prev->err.l2 / c.err.l2)) : "");
                row.push_back(cell(c.err.max));
                row.push_back(rate_ok && prev->err.max > 0.0 && c.err.max > 0.0
                                  ? cell(std::log2(prev->err.max / c.err.max))
                                  : "");
                row.push_back("ok");
            } else {
                row.insert(row.end(), {"", "", "", "", "failed"});
            }
            csv.row(row);
            prev = &c;
        }
    }
}

// ---------------------------------------------------------------------------

void cmd_converge1d(ConfigView& cv, bool efficiency) {
    const auto schemes = scheme_list(cv);
    const int n = cv.get_int("n", efficiency ? 3072 : 2048);
    const double ax = cv.get_double("ax", -100.0);
    const double bx = cv.get_double("bx", 100.0);
    RlwParams p;
    p.alpha = cv.get_double("alpha", 1.0);
    p.mu = cv.get_double("mu", 1.0);
    p.dealias = cv.get_bool("dealias", false);
    SolitonParams sp{cv.get_double("c", 3.0), cv.get_double("x0", 0.0)};
    const double T = cv.get_double("T", efficiency ? 10.0 : 1.0);
    const auto taus_user = cv.get_double_list("taus", {});
    const SolveConfig sc = solve_from(cv);
    const int sweeps = cv.get_int("sweeps", 0);
    const fs::path out = resolve_out_dir(cv);
    cv.reject_unknown();

    fs::create_directories(out);
    auto g = make_grid({ax, bx}, n);
    RlwOperators ops(g, p);
    Field u0 = soliton_1d(g, p, sp, 0.0);
    Field uT = soliton_1d(g, p, sp, T);

    std::vector<std::vector<double>> taus;
    std::vector<std::vector<CellResult>> cells;
    for (const std::string& tag : schemes) {
        const SchemeKind kind = scheme_from_tag(tag);
        std::vector<double> ladder = taus_user;
        if (ladder.empty()) {
            ladder = efficiency ? std::vector<double>{1.0 / 10, 1.0 / 20, 1.0 / 40}
                                : default_ladder(kind);
        }
        std::vector<CellResult> row;
        for (double tau : ladder) {
            const int cell_sweeps = is_extrapolation_scheme(kind) ? 0 : sweeps;
            row.push_back(run_cell(
                [&] { return make_scheme_state(kind, u0, tau, p, sc, cell_sweeps); }, ops, T,
                [&](const SchemeState& st) { return error_norms(st.u, uT); }));
        }
        taus.push_back(std::move(ladder));
        cells.push_back(std::move(row));
    }

    if (efficiency) {
        Csv csv(out / "efficiency.csv", "scheme,tau,e2,seconds,status");
        for (std::size_t is = 0; is < schemes.size(); ++is) {
            for (std::size_t it = 0; it < taus[is].size(); ++it) {
                const CellResult& c = cells[is][it];
                csv.row({schemes[is], cell(taus[is][it]), c.ok ? cell(c.err.l2) : "",
                         cell(c.seconds), c.ok ? "ok" : "failed"});
            }
        }
    } else {
        write_error_table(out / "converge1d.csv", schemes, taus, cells);
    }
}

void cmd_converge2d(ConfigView& cv) {
    const auto schemes = scheme_list(cv);
    const int nx = cv.get_int("nx", cv.get_int("n", 128));
    const int ny = cv.get_int("ny", nx);
    RlwParams p;
    p.alpha = cv.get_double("alpha", 1.0);
    p.beta = cv.get_double("beta", 1.0);
    p.mu = cv.get_double("mu", 1.0);
    p.theta = cv.get_double("theta", 1.0);
    p.dealias = cv.get_bool("dealias", false);
    const double T = cv.get_double("T", 10.0);
    auto taus_user = cv.get_double_list("taus", {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80});
    const double ref_tau = cv.get_double("ref_tau", 0.001);
    const SolveConfig sc = solve_from(cv);
    const int sweeps = cv.get_int("sweeps", 0);
    const fs::path out = resolve_out_dir(cv);
    cv.reject_unknown();

    fs::create_directories(out);
    auto g = make_grid({0.0, two_pi}, {0.0, two_pi}, nx, ny);
    RlwOperators ops(g, p);
    Field u0 = trig_ic_2d(g);

    // self-reference solution; a failure here aborts the experiment
    SchemeState ref = make_scheme_state(SchemeKind::lep_pc6, u0, ref_tau, p, sc);
    run(ref, T, ops);

    std::vector<std::vector<double>> taus;
    std::vector<std::vector<CellResult>> cells;
    for (const std::string& tag : schemes) {
        const SchemeKind kind = scheme_from_tag(tag);
        std::vector<CellResult> row;
        for (double tau : taus_user) {
            const int cell_sweeps = is_extrapolation_scheme(kind) ? 0 : sweeps;
            row.push_back(run_cell(
                [&] { return make_scheme_state(kind, u0, tau, p, sc, cell_sweeps); }, ops, T,
                [&](const SchemeState& st) { return error_norms(st.u, ref.u); }));
        }
        taus.push_back(taus_user);
        cells.push_back(std::move(row));
    }
    write_error_table(out / "converge2d.csv", schemes, taus, cells);
}

void cmd_two_soliton(ConfigView& cv) {
    const auto schemes = scheme_list(cv);
    const int n = cv.get_int("n", 1024);
    const double ax = cv.get_double("ax", -60.0);
    const double bx = cv.get_double("bx", 300.0);
    RlwParams p;
    p.alpha = cv.get_double("alpha", 1.0);
    p.mu = cv.get_double("mu", 1.0);
    p.dealias = cv.get_bool("dealias", false);
    SolitonParams s1{cv.get_double("c1", 1.0), cv.get_double("x1", -20.0)};
    SolitonParams s2{cv.get_double("c2", 0.5), cv.get_double("x2", 15.0)};
    const double tau = cv.get_double("tau", 0.01);
    const double T = cv.get_double("T", 150.0);
    const int inv_stride = cv.get_int("invariant_stride", 1);
    const int snap_stride = cv.get_int("snapshot_stride", 100);
    const SolveConfig sc = solve_from(cv);
    const int sweeps = cv.get_int("sweeps", 0);
    const fs::path out = resolve_out_dir(cv);
    cv.reject_unknown();

    auto g = make_grid({ax, bx}, n);
    RlwOperators ops(g, p);
    Field u0 = two_soliton_ic(g, p, s1, s2);

    fs::create_directories(out / "two-soliton");
    Csv summary(out / "two-soliton" / "summary.csv", "scheme,status,t_final,max_abs,detail");
    for (const std::string& tag : schemes) {
        const SchemeKind kind = scheme_from_tag(tag);
        const fs::path dir = out / "two-soliton" / tag;
        fs::create_directories(dir);

        InvariantCollector collect;
        collect.params = p;
        collect.has_quad = is_energy_scheme(kind);
        RunObservers obs;
        obs.invariant_stride = inv_stride;
        obs.snapshot_stride = snap_stride;
        obs.on_invariant = std::ref(collect);
        obs.on_snapshot = [&dir](const SchemeState& st) {
            write_field((dir / snap_name(st.steps)).string(), st.u, st.t());
        };

        SchemeState st =
            make_scheme_state(kind, u0, tau, p, sc, is_extrapolation_scheme(kind) ? 0 : sweeps);
        std::string status = "ok";
        std::string detail;
        RunSummary sum;
        try {
            sum = run(st, T, ops, obs);
        } catch (const std::exception& e) {
            if (!is_solver_failure(e)) throw;
            status = "failed";
            detail = e.what();
            sum.t_final = st.t();
            sum.max_abs = max_norm(st.u);
        }
        write_invariants_csv(dir / "invariants.csv", collect.rows);
        summary.row({tag, status, cell(sum.t_final), cell(sum.max_abs), detail});
    }
}

void cmd_field_demo(bool bore, ConfigView& cv) {
    const std::string tag = cv.get_string("scheme", bore ? "lmp-pc6" : "lep-pc6");
    const SchemeKind kind = scheme_from_tag(tag);
    const int nx = cv.get_int("nx", cv.get_int("n", bore ? 512 : 256));
    const int ny = cv.get_int("ny", nx);
    const double def_a = bore ? -60.0 : -100.0;
    const double def_b = bore ? 300.0 : 100.0;
    const double ax = cv.get_double("ax", def_a), bx = cv.get_double("bx", def_b);
    const double ay = cv.get_double("ay", def_a), by = cv.get_double("by", def_b);
    RlwParams p;
    p.alpha = cv.get_double("alpha", 1.0);
    p.beta = cv.get_double("beta", 1.0);
    p.mu = cv.get_double("mu", 1.0);
    p.theta = cv.get_double("theta", 1.0);
    p.dealias = cv.get_bool("dealias", false);
    const double tau = cv.get_double("tau", 0.1);
    std::vector<double> snap_times =
        cv.get_double_list("snap_times", bore ? std::vector<double>{0, 30, 60, 120, 180, 250}
                                              : std::vector<double>{0, 5, 10, 20, 25, 50});
    const double T = cv.get_double("T", snap_times.empty() ? 0.0 : snap_times.back());
    const double x0 = cv.get_double("x0", bore ? 0.0 : 40.0);
    const double y0 = cv.get_double("y0", bore ? 0.0 : 40.0);
    const double d = cv.get_double("d", 2.0);
    const int inv_stride = cv.get_int("invariant_stride", 1);
    const SolveConfig sc = solve_from(cv);
    const int sweeps = cv.get_int("sweeps", 0);
    const fs::path out = resolve_out_dir(cv);
    cv.reject_unknown();

    auto g = make_grid({ax, bx}, {ay, by}, nx, ny);
    RlwOperators ops(g, p);
    Field u0 = bore ? undular_bore_ic(g, x0, y0, d) : maxwellian_ic(g, x0, y0);

    const char* name = bore ? "bore2d" : "maxwellian2d";
    const fs::path dir = out / name / tag;
    fs::create_directories(dir);

    SchemeState st =
        make_scheme_state(kind, std::move(u0), tau, p, sc, is_extrapolation_scheme(kind) ? 0 : sweeps);

    InvariantCollector collect;
    collect.params = p;
    collect.has_quad = is_energy_scheme(kind);
    RunObservers obs;
    obs.invariant_stride = inv_stride;
    obs.on_invariant = std::ref(collect);

    // checkpoints: requested snapshot times up to T, then T itself
    std::vector<double> stops;
    for (double ts : snap_times) {
        if (ts > st.t() + 1e-12 && ts <= T + 1e-12) stops.push_back(ts);
    }
    if (stops.empty() || stops.back() < T - 1e-12) stops.push_back(T);

    write_field((dir / snap_name(st.steps)).string(), st.u, st.t());
    for (double ts : stops) {
        run(st, ts, ops, obs);
        write_field((dir / snap_name(st.steps)).string(), st.u, st.t());
    }
    write_invariants_csv(dir / "invariants.csv", collect.rows);
}

void cmd_custom(ConfigView& cv) {
    const std::string in_path = cv.get_string("in", "");
    if (in_path.empty()) throw ConfigError("custom: key 'in' (initial field file) is required");
    const std::string tag = cv.get_string("scheme", "");
    if (tag.empty()) throw ConfigError("custom: key 'scheme' is required");
    const SchemeKind kind = scheme_from_tag(tag);
    if (!cv.has("tau")) throw ConfigError("custom: key 'tau' is required");
    const double tau = cv.get_double("tau", 0.0);
    if (!cv.has("T")) throw ConfigError("custom: key 'T' is required");
    const double T = cv.get_double("T", 0.0);

    LoadedField start = read_field(in_path);
    RlwParams p;
    p.alpha = cv.get_double("alpha", 1.0);
    p.beta = cv.get_double("beta", start.u.grid->dim() == 2 ? 1.0 : 0.0);
    p.mu = cv.get_double("mu", 1.0);
    p.theta = cv.get_double("theta", start.u.grid->dim() == 2 ? 1.0 : 0.0);
    p.dealias = cv.get_bool("dealias", false);
    const int inv_stride = cv.get_int("invariant_stride", 1);
    const int snap_stride = cv.get_int("snapshot_stride", 100);
    const SolveConfig sc = solve_from(cv);
    const int sweeps = cv.get_int("sweeps", 0);
    const bool from_state = cv.get_bool("predict_from_state", true);
    const fs::path out = resolve_out_dir(cv);
    cv.reject_unknown();

    RlwOperators ops(start.u.grid, p);
    SchemeState st = make_scheme_state(kind, std::move(start.u), tau, p, sc,
                                       is_extrapolation_scheme(kind) ? 0 : sweeps, start.t);
    st.predict_from_state = from_state;

    const fs::path dir = fs::path(out) / "custom";
    fs::create_directories(dir);

    InvariantCollector collect;
    collect.params = p;
    collect.has_quad = is_energy_scheme(kind);
    RunObservers obs;
    obs.invariant_stride = inv_stride;
    obs.snapshot_stride = snap_stride;
    obs.on_invariant = std::ref(collect);
    obs.on_snapshot = [&dir](const SchemeState& s) {
        write_field((dir / snap_name(s.steps)).string(), s.u, s.t());
    };

    run(st, T, ops, obs);
    write_invariants_csv(dir / "invariants.csv", collect.rows);
    write_field((dir / "final.txt").string(), st.u, st.t());
}

}  // namespace

const std::vector<std::string>& all_experiment_commands() {
    static const std::vector<std::string> cmds = {"converge1d", "efficiency", "two-soliton",
                                                  "converge2d", "bore2d",     "maxwellian2d",
                                                  "custom"};
    return cmds;
}

void run_experiment(const std::string& command, const KeyValues& kv) {
    ConfigView cv(kv);
    if (command == "converge1d") {
        cmd_converge1d(cv, false);
    } else if (command == "efficiency") {
        cmd_converge1d(cv, true);
    } else if (command == "two-soliton") {
        cmd_two_soliton(cv);
    } else if (command == "converge2d") {
        cmd_converge2d(cv);
    } else if (command == "bore2d") {
        cmd_field_demo(true, cv);
    } else if (command == "maxwellian2d") {
        cmd_field_demo(false, cv);
    } else if (command == "custom") {
        cmd_custom(cv);
    } else {
        std::string names;
        for (const std::string& c : all_experiment_commands()) {
            if (!names.empty()) names += " | ";
            names += c;
        }
        throw ConfigError("unknown command '" + command + "' (expected " + names + ")");
    }
}

}  // namespace rlw
