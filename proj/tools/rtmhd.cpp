// Batch front end for the growth-rate toolkit.
#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "rtmhd/config.hpp"
#include "rtmhd/dispersion.hpp"
#include "rtmhd/errors.hpp"
#include "rtmhd/io.hpp"
#include "rtmhd/mode.hpp"
#include "rtmhd/verifier.hpp"

using namespace rtmhd;
using Json = nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;
constexpr int kExitIo = 4;

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Config: return kExitConfig;
        case ErrorKind::Io: return kExitIo;
        default: return kExitCompute;
    }
}

void report_error(const std::string& kind, const std::string& message) {
    std::cerr << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

Frequency parse_xi(const std::string& s) {
    std::istringstream in(s);
    double a = 0.0, b = 0.0;
    char comma = 0;
    if (!(in >> a >> comma >> b) || comma != ',' || !(in >> std::ws).eof())
        throw Error(ErrorKind::Config, "--xi expects 'a,b', got '" + s + "'");
    return {a, b};
}

struct Context {
    RunConfig cfg;
    DensityProfile profile;
    std::filesystem::path out;

    std::string path(const std::string& name) const { return (out / name).string(); }
};

Frequency require_xi(const Context& c) {
    if (!c.cfg.xi) throw Error(ErrorKind::Config, "this command needs --xi a,b");
    return *c.cfg.xi;
}

void cmd_profile(const Context& c) {
    std::ostringstream csv;
    csv << "x3,rho,drho\n";
    for (int i = 0; i < c.cfg.grid.n; ++i) {
        const double x = c.cfg.grid.node(i);
        csv << fmt_double(x) << ',' << fmt_double(c.profile.rho(x)) << ','
            << fmt_double(c.profile.drho(x)) << '\n';
    }
    write_text_file(c.path("profile.csv"), csv.str());
    const auto& m = c.profile.metrics();
    std::cout << "total_jump=" << fmt_double(m.total_jump) << '\n'
              << "sup_ratio=" << fmt_double(m.sup_ratio) << '\n'
              << "inf_rho=" << fmt_double(m.inf_rho) << '\n'
              << "sup_rho=" << fmt_double(m.sup_rho) << '\n';
}

void cmd_critical(const Context& c) {
    const CriticalNumber cn = critical_number(c.profile, c.cfg.grid, c.cfg.params.g);
    write_trace_csv(cn, c.path("critical_trace.csv"));
    if (cn.infinite) std::cout << "M_c=INF\n";
    else std::cout << "M_c=" << fmt_double(cn.value) << '\n';
    for (const auto& [Lz, v] : cn.trace) std::cout << "trace Lz=" << fmt_double(Lz) << " value=" << fmt_double(v) << '\n';
}

void cmd_thresholds(const Context& c) {
    const double g = c.cfg.params.g;
    const double M = c.cfg.mag.magnitude;
    std::ostringstream csv;
    if (c.cfg.mag.orientation == Orientation::Vertical) {
        const double v = critical_freq_vertical(c.profile, c.cfg.grid, M, g);
        csv << "M,xi_vc\n" << fmt_double(M) << ',' << fmt_double(v) << '\n';
        std::cout << "xi_vc=" << fmt_double(v) << '\n';
    } else {
        const double radius = c.cfg.sweep_radius.value_or(default_sweep_radius(c.profile));
        csv << "xi1,xi2,S\n";
        int count = 0;
        for (const auto& xi : lattice_points(c.cfg.params.L, radius)) {
            if (xi.xi1 <= 0.0 || xi.xi2 < 0.0) continue;
            csv << fmt_double(xi.xi1) << ',' << fmt_double(xi.xi2) << ',';
            try {
                csv << fmt_double(critical_freq_horizontal(c.profile, c.cfg.grid, xi, M, g));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::OutOfRange) throw;
            }
            csv << '\n';
            ++count;
        }
        std::cout << "samples=" << count << '\n';
    }
    write_text_file(c.path("thresholds.csv"), csv.str());
}

GrowthResult growth_at(const Context& c, Frequency xi) {
    const FormSet forms = assemble_forms(c.profile, c.cfg.grid, xi, c.cfg.mag, c.cfg.params);
    const auto res = growth_rate(forms);
    if (!res) throw Error(ErrorKind::OutOfRange, "no growing mode at this frequency");
    return *res;
}

void cmd_growth(const Context& c) {
    const Frequency xi = require_xi(c);
    const FormSet forms = assemble_forms(c.profile, c.cfg.grid, xi, c.cfg.mag, c.cfg.params);
    const auto res = growth_rate(forms);
    Json j{{"xi", {xi.xi1, xi.xi2}}};
    if (!res) {
        j["growing"] = false;
        std::cout << "lambda=none\n";
    } else {
        j["growing"] = true;
        j["lambda"] = res->lambda;
        j["s_star"] = res->s_star;
        j["alpha"] = res->alpha_at_s;
        j["bracket_width"] = res->bracket_width;
        j["s_frontier"] = res->s_frontier;
        j["eigen_residual"] = res->psi.residual;
        std::cout << "lambda=" << fmt_double(res->lambda) << '\n'
                  << "s_star=" << fmt_double(res->s_star) << '\n'
                  << "alpha=" << fmt_double(res->alpha_at_s) << '\n';
    }
    write_text_file(c.path("growth.json"), j.dump(1) + "\n");
}

void cmd_sweep(const Context& c) {
    const double radius = c.cfg.sweep_radius.value_or(default_sweep_radius(c.profile));
    const DispersionTable table = lattice_sweep(c.profile, c.cfg.grid, c.cfg.mag, c.cfg.params, radius);
    write_dispersion_csv(table, c.path("dispersion.csv"));
    const SupRate s = sup_rate(table);
    std::vector<const DispersionEntry*> members;
    for (const auto& e : table.entries)
        if (e.member && e.lambda && (e.k1 > 0 || (e.k1 == 0 && e.k2 > 0))) members.push_back(&e);  // one per +-xi pair
    std::stable_sort(members.begin(), members.end(),
                     [](auto* a, auto* b) { return *a->lambda > *b->lambda; });
    Json top = Json::array();
    for (size_t i = 0; i < members.size() && i < static_cast<size_t>(c.cfg.verify.sharpness_count); ++i)
        top.push_back({{"xi", {members[i]->xi.xi1, members[i]->xi.xi2}}, {"lambda", *members[i]->lambda}});
    Json j{{"Lambda", s.Lambda},
           {"Lambda_star", s.Lambda_star},
           {"xi1", {s.xi1.xi1, s.xi1.xi2}},
           {"xi2", {s.xi2.xi1, s.xi2.xi2}},
           {"on_boundary", s.on_boundary},
           {"radius", radius},
           {"member_pairs", members.size()},
           {"entries", table.entries.size()},
           {"top", top}};
    write_text_file(c.path("summary.json"), j.dump(1) + "\n");
    if (s.on_boundary) std::cerr << "warning: maximum lies on the sweep boundary; enlarge the radius\n";
    std::cout << "Lambda=" << fmt_double(s.Lambda) << '\n'
              << "xi1=" << fmt_double(s.xi1.xi1) << ',' << fmt_double(s.xi1.xi2) << '\n'
              << "member_pairs=" << members.size() << " entries=" << table.entries.size() << '\n';
}

void cmd_mode(const Context& c) {
    const GrowthResult gr = growth_at(c, require_xi(c));
    const NormalMode m = build_mode(gr, c.cfg.mag, c.cfg.params, c.profile, c.cfg.grid);
    export_mode_json(m, c.path("mode.json"));
    export_mode_csv(m, c.path("mode.csv"));
    export_snapshot_csv(assemble_real_solution(m, 0.0), c.path("snapshot.csv"));
    std::cout << "lambda=" << fmt_double(m.lambda) << '\n';
    for (int e = 0; e < 4; ++e) std::cout << "residual" << e + 1 << '=' << fmt_double(m.residuals[e]) << '\n';
    std::cout << "divergence=" << fmt_double(m.divergence) << '\n';
}

void cmd_verify(const Context& c) {
    Json summary;
    try {
        summary = Json::parse(read_text_file(c.path("summary.json")));
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Io, std::string("summary.json is malformed: ") + e.what());
    }
    const Frequency xi{summary.at("xi1").at(0).get<double>(), summary.at("xi1").at(1).get<double>()};
    const double Lambda = summary.at("Lambda").get<double>();
    const GrowthResult gr = growth_at(c, xi);
    const NormalMode m = build_mode(gr, c.cfg.mag, c.cfg.params, c.profile, c.cfg.grid);
    auto shared = std::make_shared<const DensityProfile>(c.profile);
    const LinearProblem prob{shared, c.cfg.grid, xi, c.cfg.mag, c.cfg.params};
    const auto ev = evolve(eigenmode_state(m, c.profile), prob, c.cfg.verify.dt_factor / m.lambda,
                           c.cfg.verify.T_factor / m.lambda);
    write_series_csv(ev.series, c.path("verify_series.csv"));
    const RateEstimate est = measured_rate(ev.series);

    std::vector<Frequency> xs;
    std::vector<double> ls;
    for (const auto& t : summary.at("top")) {
        xs.push_back({t.at("xi").at(0).get<double>(), t.at("xi").at(1).get<double>()});
        ls.push_back(t.at("lambda").get<double>());
    }
    VerifyOptions vo;
    vo.dt_factor = c.cfg.verify.dt_factor;
    vo.T_factor = c.cfg.verify.sharpness_T_factor;
    vo.record_every = 10;
    const SharpnessReport rep =
        sharpness_test(c.profile, c.cfg.grid, c.cfg.mag, c.cfg.params, Lambda, xs, ls, c.cfg.verify.seeds, vo);
    Json runs = Json::array();
    for (const auto& r : rep.runs)
        runs.push_back({{"seed", r.seed}, {"xi", {r.xi.xi1, r.xi.xi2}}, {"lambda", r.lambda}, {"measured", r.measured}});
    Json j{{"xi", {xi.xi1, xi.xi2}},
           {"lambda_pred", m.lambda},
           {"lambda_meas", est.rate},
           {"rel_err", (est.rate - m.lambda) / m.lambda},
           {"fit_residual", est.residual},
           {"max_div_u", ev.max_div_u},
           {"sharpness", {{"Lambda", Lambda}, {"max_rate", rep.max_rate}, {"runs", runs}}}};
    write_text_file(c.path("verify.json"), j.dump(1) + "\n");
    std::cout << "lambda_pred=" << fmt_double(m.lambda) << '\n'
              << "lambda_meas=" << fmt_double(est.rate) << '\n'
              << "rel_err=" << fmt_double((est.rate - m.lambda) / m.lambda) << '\n'
              << "sharpness_max=" << fmt_double(rep.max_rate) << " Lambda=" << fmt_double(Lambda) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear Rayleigh-Taylor growth rates for viscous MHD with zero resistivity"};
    app.footer(
        "Exit codes: 0 success, 1 usage error, 2 invalid configuration, 3 computation failure, "
        "4 file I/O failure. Errors are printed to stderr as JSON {\"error\", \"message\"}.\n"
        "Environment: RTMHD_OUTPUT_DIR overrides output_dir from the config.");
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, xi_text;
    std::optional<double> M_override, Lz_override;
    std::optional<int> n_override;
    app.add_option("-c,--config", config_path, "run configuration (JSON)")->required();
    app.add_option("--xi", xi_text, "frequency a,b");
    app.add_option("--M", M_override, "override magnetic.M");
    app.add_option("--n", n_override, "override grid.n");
    app.add_option("--Lz", Lz_override, "override grid.half_length");

    const std::pair<const char*, const char*> commands[] = {
        {"profile", "dump rho and rho' on the grid"},
        {"critical", "critical number with truncation trace"},
        {"freq-thresholds", "S(xi) samples (horizontal) or |xi|_vc (vertical)"},
        {"growth", "growth rate at --xi"},
        {"sweep", "lattice sweep, dispersion table and sup rate"},
        {"mode", "normal mode at --xi with residual report"},
        {"verify", "time-integration check of the swept rate and sharpness test"},
    };
    for (const auto& [name, desc] : commands) app.add_subcommand(name, desc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (!xi_text.empty()) cfg.xi = parse_xi(xi_text);
        if (M_override) cfg.mag.magnitude = *M_override;
        if (n_override) cfg.grid.n = *n_override;
        if (Lz_override) cfg.grid.half_length = *Lz_override;
        if (const char* env = std::getenv("RTMHD_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
        cfg.validate();

        std::filesystem::path out(cfg.output_dir);
        std::error_code ec;
        std::filesystem::create_directories(out, ec);
        if (ec) throw Error(ErrorKind::Io, "cannot create output_dir '" + cfg.output_dir + "': " + ec.message());
        const std::string effective = config_to_text(cfg);
        std::cout << "config=" << effective << '\n';
        write_text_file((out / "run_config.json").string(), effective + "\n");

        const Grid1D grid(cfg.grid.half_length, cfg.grid.n);
        Context ctx{cfg, DensityProfile::build(cfg.profile, grid), out};
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "profile") cmd_profile(ctx);
        else if (cmd == "critical") cmd_critical(ctx);
        else if (cmd == "freq-thresholds") cmd_thresholds(ctx);
        else if (cmd == "growth") cmd_growth(ctx);
        else if (cmd == "sweep") cmd_sweep(ctx);
        else if (cmd == "mode") cmd_mode(ctx);
        else cmd_verify(ctx);
    } catch (const Error& e) {
        report_error(to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        report_error("Internal", e.what());
        return kExitCompute;
    }
    return 0;
}
