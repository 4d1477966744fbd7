#include "cli.hpp"

#include "dpg/error.hpp"
#include "dpg/fortin.hpp"
#include "dpg/pipeline.hpp"
#include "dpg/study.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace dpg::cli {

namespace {

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {"command", "problem", "p",   "r",   "split", "n",    "mesh",
                                               "levels",  "solver",  "tol", "out", "seed",  "export_matrix"};
    return keys;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value)
{
    T out{};
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(kExitInvalidValue, key + ": expected an integer, got \"" + value + "\"");
    return out;
}

double parse_double(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    const double out = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(out)) {
        throw ConfigError(kExitInvalidValue, key + ": expected a number, got \"" + value + "\"");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError(kExitInvalidValue, key + ": expected true or false, got \"" + value + "\"");
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    DPG_THROW_IF(!out, ErrorCode::Io, "cannot write " + path.string());
    out << content;
}

mesh::Mesh load_mesh(const RunConfig& c)
{
    return c.mesh ? mesh::read_mesh(*c.mesh) : mesh::unit_square_mesh(c.n);
}

study::StudyConfig study_config(const RunConfig& c)
{
    study::StudyConfig s;
    s.problem = c.problem;
    s.p = c.p;
    s.test.mode = c.split ? spaces::TestMode::Split : spaces::TestMode::Uniform;
    s.test.r = c.r;
    s.n = c.n;
    s.levels = c.levels;
    if (c.mesh) s.base_mesh = mesh::read_mesh(*c.mesh);
    s.solver.kind = c.solver;
    s.solver.tolerance = c.tol;
    return s;
}

std::string fmt(const char* format, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

int run_solve(const RunConfig& c, std::ostream& log)
{
    const study::ManufacturedSolution exact = study::smooth_solution(c.problem);
    study::StudyConfig sc = study_config(c);
    ProblemSetup setup;
    setup.kind = c.problem;
    setup.p = c.p;
    setup.test = sc.test;
    setup.f = exact.f;
    Discretization d = discretize(load_mesh(c), setup);
    const system::SolveReport rep = solve(d, sc.solver);

    study::RateTable table;
    study::LevelResult row;
    row.h = d.mesh.h_max();
    row.dofs = d.dofs.num_dofs();
    row.elements = d.mesh.num_elements();
    row.errors = study::solution_errors(d, exact);
    row.eta = study::residual_indicator(d).eta;
    row.alpha = d.alpha();
    row.solve = rep;
    table.rows.push_back(row);
    study::fill_rates(table);
    write_file(c.out / "rates.csv", study::rates_csv(table));

    std::ostringstream s;
    s << "problem: " << spaces::to_string(c.problem) << "\np: " << c.p << "\nelements: " << row.elements
      << "\ndofs: " << row.dofs << '\n';
    s << "h: " << fmt("%.6e", row.h) << '\n';
    s << "err_sigma_L2: " << fmt("%.6e", row.errors.sigma_l2) << '\n';
    s << "err_u_L2: " << fmt("%.6e", row.errors.u_l2) << '\n';
    s << "err_trace_h12: " << fmt("%.6e", row.errors.trace_h12) << '\n';
    s << "err_flux_hm12: " << fmt("%.6e", row.errors.flux_hm12) << '\n';
    s << "eta: " << fmt("%.6e", row.eta) << '\n';
    s << "alpha: " << fmt("%.6e", row.alpha) << '\n';
    s << "relative_residual: " << fmt("%.3e", rep.relative_residual) << '\n';
    write_file(c.out / "solution.txt", s.str());
    if (c.export_matrix) system::export_matrix(d.system.S, c.out / "matrix.txt");
    log << s.str();
    return kExitOk;
}

int run_converge(const RunConfig& c, std::ostream& log, std::ostream& err)
{
    const study::StudyConfig sc = study_config(c);
    const study::ManufacturedSolution exact = study::smooth_solution(c.problem);
    const study::RateTable table = study::convergence_study(sc, exact);
    write_file(c.out / "rates.csv", study::rates_csv(table));
    study::write_plot_data(table, c.out);
    log << study::rates_csv(table);
    if (table.failed) {
        err << "ERROR " << kExitNumeric << ": " << table.failure << '\n';
        return kExitNumeric;
    }

    // Constants on a coarse level, where dense eigensolvers are affordable.
    ProblemSetup setup;
    setup.kind = c.problem;
    setup.p = c.p;
    setup.test = sc.test;
    setup.f = exact.f;
    const Discretization d = discretize(study::level_mesh(sc, std::min(1, c.levels - 1)), setup);
    study::ConstantsReport constants = study::measure_constants(d);
    fortin::VerifyOptions vo;
    vo.seed = c.seed;
    constants.c_pi = fortin::verify_fortin(c.problem, c.p, mesh::AffineMap{}, vo).c_pi;
    constants.kappa_slope = table.kappa_slope;
    constants.rate_sigma = table.fit_sigma;
    constants.rate_u = table.fit_u;
    write_file(c.out / "constants.txt", study::constants_text(constants));
    log << study::constants_text(constants);
    return kExitOk;
}

int run_cond(const RunConfig& c, std::ostream& log)
{
    const study::RateTable table = study::condition_study(study_config(c));
    std::ostringstream s;
    s << "level,h,dofs,kappa\n";
    for (const auto& r : table.rows) s << r.level << ',' << fmt("%.6e", r.h) << ',' << r.dofs << ',' << fmt("%.6e", r.kappa) << '\n';
    write_file(c.out / "condition.csv", s.str());
    study::write_plot_data(table, c.out);
    log << s.str() << "kappa_slope: " << fmt("%.4f", table.kappa_slope) << '\n';
    write_file(c.out / "constants.txt", "kappa_slope: " + fmt("%.6e", table.kappa_slope) + "\n");
    return kExitOk;
}

int run_fortin(const RunConfig& c, std::ostream& log)
{
    fortin::VerifyOptions vo;
    vo.seed = c.seed;
    const mesh::AffineMap reference;
    const mesh::AffineMap distorted =
        mesh::AffineMap::from_vertices({0.0, 0.0}, {1.0, 0.2}, {0.3, 1.1});
    const fortin::FortinReport a = fortin::verify_fortin(c.problem, c.p, reference, vo);
    const fortin::FortinReport b = fortin::verify_fortin(c.problem, c.p, distorted, vo);
    const bool pass = a.passed() && b.passed();
    std::ostringstream s;
    s << "# reference element\n" << fortin::report_text(a) << "# distorted element\n" << fortin::report_text(b);
    s << "overall: " << (pass ? "PASS" : "FAIL") << '\n';
    write_file(c.out / "fortin_report.txt", s.str());
    write_file(c.out / "fortin_residuals.csv", fortin::report_csv({a, b}, {"reference", "distorted"}));
    log << s.str();
    return pass ? kExitOk : kExitNumeric;
}

}  // namespace

KeyValues read_config_text(const std::string& text)
{
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(kExitInvalidValue, "config line " + std::to_string(number) + ": expected key = value");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

KeyValues read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(kExitInvalidValue, "cannot read config file " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return read_config_text(s.str());
}

RunConfig parse_config(const KeyValues& file, const KeyValues& overrides)
{
    KeyValues kv = file;
    for (const auto& [k, v] : overrides) kv[k] = v;
    for (const auto& [k, v] : kv) {
        if (!known_keys().count(k)) throw ConfigError(kExitUnknownKey, "unknown key \"" + k + "\"");
    }

    RunConfig c;
    auto get = [&](const char* key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (const auto* v = get("command")) {
        if (*v == "solve") c.command = Command::Solve;
        else if (*v == "converge") c.command = Command::Converge;
        else if (*v == "cond") c.command = Command::Cond;
        else if (*v == "fortin") c.command = Command::Fortin;
        else throw ConfigError(kExitInvalidValue, "command: expected solve, converge, cond or fortin");
    }
    if (const auto* v = get("problem")) {
        if (*v == "poisson") c.problem = spaces::ProblemKind::Poisson;
        else if (*v == "elasticity") c.problem = spaces::ProblemKind::Elasticity;
        else throw ConfigError(kExitInvalidValue, "problem: expected poisson or elasticity");
    }
    if (const auto* v = get("p")) c.p = parse_integer<int>("p", *v);
    if (c.p < 0) throw ConfigError(kExitInvalidValue, "p must be >= 0");
    c.r = c.p + spaces::kDimension;
    if (const auto* v = get("r")) c.r = parse_integer<int>("r", *v);
    if (const auto* v = get("split")) c.split = parse_bool("split", *v);
    if (const auto* v = get("n")) c.n = parse_integer<int>("n", *v);
    if (const auto* v = get("levels")) c.levels = parse_integer<int>("levels", *v);
    if (c.levels < 1) throw ConfigError(kExitInvalidValue, "levels must be >= 1");
    if (const auto* v = get("solver")) {
        if (*v == "chol") c.solver = system::SolverKind::Cholesky;
        else if (*v == "cg") c.solver = system::SolverKind::ConjugateGradient;
        else throw ConfigError(kExitInvalidValue, "solver: expected chol or cg");
    }
    if (const auto* v = get("tol")) c.tol = parse_double("tol", *v);
    if (!(c.tol > 0.0)) throw ConfigError(kExitInvalidValue, "tol must be positive");
    if (const auto* v = get("out")) c.out = *v;
    if (const auto* v = get("seed")) c.seed = parse_integer<std::uint64_t>("seed", *v);
    if (const auto* v = get("export_matrix")) c.export_matrix = parse_bool("export_matrix", *v);

    if (const auto* v = get("mesh")) {
        if (v->empty()) throw ConfigError(kExitMissingMesh, "mesh: empty mesh path and no generator selected");
        c.mesh = *v;
    } else if (c.n < 1) {
        throw ConfigError(kExitMissingMesh, "no mesh source: give n >= 1 or a mesh file");
    }
    if (!c.split && c.r < c.p + spaces::kDimension) {
        throw ConfigError(kExitDegree, "r = " + std::to_string(c.r) + " is below p + N = " +
                                           std::to_string(c.p + spaces::kDimension));
    }
    return c;
}

int run(const RunConfig& config, std::ostream& log, std::ostream& err)
{
    try {
        std::filesystem::create_directories(config.out);
        switch (config.command) {
            case Command::Solve: return run_solve(config, log);
            case Command::Converge: return run_converge(config, log, err);
            case Command::Cond: return run_cond(config, log);
            case Command::Fortin: return run_fortin(config, log);
        }
    } catch (const ConfigError& e) {
        err << "ERROR " << e.exit_code() << ": " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "ERROR " << kExitNumeric << ": " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitNumeric;
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"DPG solver for Poisson and linear elasticity, with verification commands"};
    std::string config_path;
    KeyValues flags;
    app.add_option("--config", config_path, "key = value configuration file");
    struct Flag {
        const char* name;
        const char* key;
        const char* help;
    };
    const Flag options[] = {
        {"--command", "command", "solve | converge | cond | fortin"},
        {"--problem", "problem", "poisson | elasticity"},
        {"--p", "p", "trial degree"},
        {"--r", "r", "test degree (default p + 2)"},
        {"--n", "n", "unit-square generator subdivisions"},
        {"--mesh", "mesh", "mesh file (dpgmesh 2 format)"},
        {"--levels", "levels", "refinement levels"},
        {"--solver", "solver", "chol | cg"},
        {"--tol", "tol", "iterative solver tolerance"},
        {"--out", "out", "output directory"},
        {"--seed", "seed", "seed for randomized Fortin probes"},
        {"--export-matrix", "export_matrix", "write the condensed matrix (true/false)"},
    };
    std::map<std::string, std::string> values;
    std::vector<std::pair<std::string, CLI::Option*>> bound;
    for (const Flag& f : options) {
        CLI::Option* opt = app.add_option(f.name, values[f.key], f.help);
        bound.emplace_back(f.key, opt);
    }
    bool split = false;
    app.add_flag("--split", split, "split test degrees (r_tau, r_v) = (p + 2, p + N)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ERROR " << kExitUnknownKey << ": " << e.what() << '\n';
        return kExitUnknownKey;
    }
    for (const auto& [key, opt] : bound) {
        if (opt->count() > 0) flags[key] = values[key];
    }
    if (split) flags["split"] = "true";

    RunConfig config;
    try {
        const KeyValues file = config_path.empty() ? KeyValues{} : read_config_file(config_path);
        config = parse_config(file, flags);
    } catch (const ConfigError& e) {
        std::cerr << "ERROR " << e.exit_code() << ": " << e.what() << '\n';
        return e.exit_code();
    }
    return run(config, std::cout, std::cerr);
}

}  // namespace dpg::cli
