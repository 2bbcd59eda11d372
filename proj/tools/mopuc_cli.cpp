// Command-line front end: load a measure system, print moment/coefficient
// tables, run the identity verification suite, evaluate the
// Christoffel-Darboux identity, and map normality over an index box.
//
// Exit codes: 0 all checks pass or are not applicable / skipped,
//             1 at least one identity residual failure,
//             2 input or validation error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mopuc/mopuc.hpp"

namespace {

using mopuc::Json;

struct RunConfig {
    std::string system_path;
    std::string backend = "exact";
    std::optional<double> tol;        // residual_tol override
    std::optional<double> zero_eps;   // scalar zero-test override
    std::optional<double> rcond_min;  // float normality override
    std::string out_path;             // empty: stdout
    std::string format = "json";
    uint64_t seed = 0;

    mopuc::TolerancePolicy policy() const {
        mopuc::TolerancePolicy pol;
        if (tol) pol.residual_tol = *tol;
        if (zero_eps) pol.zero_eps = *zero_eps;
        if (rcond_min) pol.rcond_min = *rcond_min;
        pol.validate();
        return pol;
    }
};

struct CliError : std::runtime_error {
    explicit CliError(const std::string& what) : std::runtime_error(what) {}
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open system file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw CliError("cannot open output file: " + cfg.out_path);
    out << text;
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream ss;
    for (size_t i = 0; i < header.size(); ++i) ss << (i ? "," : "") << csv_escape(header[i]);
    ss << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) ss << (i ? "," : "") << csv_escape(row[i]);
        ss << "\n";
    }
    return ss.str();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

mopuc::MultiIndex parse_index(const std::string& text) {
    std::vector<int> entries;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            entries.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw CliError("bad multi-index component: " + item);
        }
    }
    if (entries.empty()) throw CliError("empty multi-index");
    mopuc::MultiIndex n(entries);
    if (!n.in_lattice()) throw CliError("multi-index outside Z_+^r: " + n.str());
    return n;
}

std::vector<int> parse_steps(const std::string& text) {
    std::vector<int> steps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) steps.push_back(std::stoi(item));
    return steps;
}

Json run_header(const char* command, const RunConfig& cfg) {
    Json out;
    out["command"] = command;
    out["backend"] = cfg.backend;
    out["system"] = cfg.system_path;
    out["seed"] = cfg.seed;
    return out;
}

// Parse + validate; advisory findings (indefinite densities) go to stderr so
// machine-readable stdout stays clean.
template <mopuc::ScalarField S>
std::shared_ptr<const mopuc::MeasureSystem<S>> load_system(const RunConfig& cfg) {
    auto sys = mopuc::parse_system<S>(read_file(cfg.system_path), cfg.policy());
    for (const auto& w : sys->warnings()) std::cerr << "warning: " << w << "\n";
    return sys;
}

// ---------------------------------------------------------------- moments

template <mopuc::ScalarField S>
int cmd_moments(const RunConfig& cfg, int j, long p_min, long p_max) {
    auto sys = load_system<S>(cfg);
    if (j < 1 || j > sys->size()) throw CliError("--measure out of range 1.." + std::to_string(sys->size()));
    if (p_min > p_max) throw CliError("empty moment range");

    Json doc = run_header("moments", cfg);
    doc["measure"] = j;
    Json rows = Json::array();
    std::vector<std::vector<std::string>> csv;
    for (long p = p_min; p <= p_max; ++p) {
        S v = sys->moment(j, p);
        rows.push_back(Json{{"p", p}, {"value", mopuc::scalar_to_json(v)}});
        csv.push_back({std::to_string(j), std::to_string(p), mopuc::scalar_str(v)});
    }
    doc["rows"] = std::move(rows);
    if (cfg.format == "csv")
        write_output(cfg, csv_table({"measure", "p", "value"}, csv));
    else
        write_output(cfg, dump_json(doc));
    return 0;
}

// ----------------------------------------------------------------- coeffs

template <mopuc::ScalarField S>
int cmd_coeffs(const RunConfig& cfg, const std::string& max_index) {
    auto sys = load_system<S>(cfg);
    mopuc::Lattice<S> lat(sys, cfg.policy());
    mopuc::MultiIndex box = parse_index(max_index);
    if (box.dim() != lat.r()) throw CliError("--max-index dimension != number of measures");

    Json doc = run_header("coeffs", cfg);
    Json rows = Json::array();
    std::vector<std::vector<std::string>> csv;
    for (const auto& n : mopuc::box_indices(box)) {
        std::vector<std::string> cells{n.str()};
        try {
            auto rec = mopuc::coeffs(lat, n);
            rows.push_back(mopuc::coeff_record_to_json(rec));
            cells.push_back("normal");
            cells.push_back(mopuc::scalar_str(rec.alpha));
            cells.push_back(mopuc::scalar_str(rec.beta));
            for (const S& v : rec.rho) cells.push_back(mopuc::scalar_str(v));
            for (const S& v : rec.kappa) cells.push_back(mopuc::scalar_str(v));
        } catch (const mopuc::NotNormalError& e) {
            Json row;
            row["index"] = mopuc::multi_index_to_json(n);
            row["status"] = "non-normal";
            row["note"] = e.what();
            rows.push_back(std::move(row));
            cells.push_back("non-normal");
            cells.resize(4 + 2 * static_cast<size_t>(lat.r()), "");
        }
        csv.push_back(std::move(cells));
    }
    doc["rows"] = std::move(rows);
    if (cfg.format == "csv") {
        std::vector<std::string> header{"index", "status", "alpha", "beta"};
        for (int k = 1; k <= lat.r(); ++k) header.push_back("rho_" + std::to_string(k));
        for (int k = 1; k <= lat.r(); ++k) header.push_back("kappa_" + std::to_string(k));
        write_output(cfg, csv_table(header, csv));
    } else {
        write_output(cfg, dump_json(doc));
    }
    return 0;
}

// ----------------------------------------------------------------- verify

template <mopuc::ScalarField S>
std::vector<mopuc::IdentityReport> run_verify_suite(const mopuc::Lattice<S>& lat,
                                                    const std::vector<mopuc::MultiIndex>& indices) {
    std::vector<mopuc::IdentityReport> all;
    auto add = [&](std::vector<mopuc::IdentityReport> reps) {
        for (auto& rep : reps) all.push_back(std::move(rep));
    };
    for (const auto& n : indices) {
        add(mopuc::verify_type2(lat, n));
        for (int k : n.support()) add(mopuc::verify_type2star(lat, n, k));
        add(mopuc::verify_third(lat, n));
        add(mopuc::verify_A_matrix(lat, n));
        add(mopuc::verify_type1(lat, n));
        for (int k = 1; k <= lat.r(); ++k)
            for (int l = k + 1; l <= lat.r(); ++l) add(mopuc::verify_compat_polys(lat, n, k, l));
        for (int k = 1; k <= lat.r(); ++k)
            for (int l = 1; l <= lat.r(); ++l)
                if (k != l) add(mopuc::verify_compat_coeffs(lat, n, k, l));
    }
    return all;
}

template <mopuc::ScalarField S>
int cmd_verify(const RunConfig& cfg, const std::string& max_index,
               const std::vector<std::string>& index_list) {
    auto sys = load_system<S>(cfg);
    mopuc::Lattice<S> lat(sys, cfg.policy());

    std::vector<mopuc::MultiIndex> indices;
    if (!index_list.empty()) {
        for (const auto& text : index_list) {
            mopuc::MultiIndex n = parse_index(text);
            if (n.dim() != lat.r()) throw CliError("--index dimension != number of measures");
            indices.push_back(std::move(n));
        }
    } else {
        mopuc::MultiIndex box = parse_index(max_index);
        if (box.dim() != lat.r()) throw CliError("--max-index dimension != number of measures");
        indices = mopuc::box_indices(box);
    }

    auto reports = run_verify_suite(lat, indices);
    int failed = 0, passed = 0, skipped = 0, na = 0;
    double max_residual = 0.0;
    for (const auto& rep : reports) {
        switch (rep.status) {
            case mopuc::CheckStatus::ok:
                rep.pass ? ++passed : ++failed;
                max_residual = std::max(max_residual, rep.residual);
                break;
            case mopuc::CheckStatus::precondition_failed: ++skipped; break;
            case mopuc::CheckStatus::not_applicable: ++na; break;
        }
    }

    Json doc = run_header("verify", cfg);
    doc["summary"] = Json{{"checks", reports.size()},
                          {"passed", passed},
                          {"failed", failed},
                          {"precondition_failed", skipped},
                          {"not_applicable", na},
                          {"max_residual", max_residual}};
    Json rows = Json::array();
    std::vector<std::vector<std::string>> csv;
    for (const auto& rep : reports) {
        rows.push_back(mopuc::identity_report_to_json(rep));
        csv.push_back({rep.identity, rep.index.str(), rep.k ? std::to_string(rep.k) : "",
                       rep.l ? std::to_string(rep.l) : "", to_string(rep.status),
                       format_double(rep.residual), rep.pass ? "true" : "false", rep.note});
    }
    doc["rows"] = std::move(rows);
    if (cfg.format == "csv")
        write_output(cfg, csv_table({"identity", "index", "k", "l", "status", "residual", "pass", "note"}, csv));
    else
        write_output(cfg, dump_json(doc));
    return failed > 0 ? 1 : 0;
}

// --------------------------------------------------------------------- cd

template <mopuc::ScalarField S>
int cmd_cd(const RunConfig& cfg, const std::string& path_kind, int path_len,
           const std::string& target, const std::string& steps, const std::string& points_spec,
           bool symbolic) {
    auto sys = load_system<S>(cfg);
    mopuc::Lattice<S> lat(sys, cfg.policy());

    mopuc::LatticePath path;
    if (path_kind == "stepline") {
        if (target.empty()) throw CliError("stepline path requires --target");
        mopuc::MultiIndex t = parse_index(target);
        if (t.dim() != lat.r()) throw CliError("--target dimension != number of measures");
        path = mopuc::make_path_stepline(t);
    } else if (path_kind == "round-robin") {
        path = mopuc::make_path_round_robin(lat.r(), path_len);
    } else if (path_kind == "random") {
        path = mopuc::make_path_random(lat.r(), path_len, cfg.seed);
    } else if (path_kind == "explicit") {
        if (steps.empty()) throw CliError("explicit path requires --steps");
        path = mopuc::make_path_explicit(lat.r(), parse_steps(steps));
    } else {
        throw CliError("unknown path kind: " + path_kind);
    }
    if (path.length() < 1) throw CliError("path must contain at least one step");

    std::vector<std::pair<S, S>> points;
    auto colon = points_spec.find(':');
    std::string kind = points_spec.substr(0, colon);
    int count = colon == std::string::npos ? 8 : std::stoi(points_spec.substr(colon + 1));
    if (kind == "random") {
        points = mopuc::sample_cd_points<S>(count, cfg.seed);
    } else if (kind == "circle") {
        for (const S& z : mopuc::unit_circle_points<S>(count)) points.emplace_back(z, z);
    } else {
        throw CliError("unknown points spec: " + points_spec + " (use random:K or circle:K)");
    }

    Json doc = run_header("cd", cfg);
    Json rows = Json::array();
    std::vector<std::vector<std::string>> csv;
    bool all_pass = true;
    for (const auto& [z, zeta] : points) {
        auto ev = mopuc::cd_check(lat, path, z, zeta);
        all_pass = all_pass && ev.pass;
        rows.push_back(mopuc::cd_evaluation_to_json(ev));
        csv.push_back({mopuc::scalar_str(z), mopuc::scalar_str(zeta), mopuc::scalar_str(ev.lhs),
                       mopuc::scalar_str(ev.rhs), format_double(ev.residual), ev.pass ? "true" : "false"});
    }
    doc["rows"] = std::move(rows);
    if (symbolic) {
        auto sym = mopuc::cd_check_symbolic(lat, path);
        all_pass = all_pass && sym.pass;
        doc["symbolic"] = Json{{"residual", sym.residual},
                               {"exact_zero", sym.exact_zero},
                               {"pass", sym.pass},
                               {"degree_z", sym.lhs.degree_z(lat.policy())},
                               {"degree_w", sym.lhs.degree_w(lat.policy())}};
    }
    if (cfg.format == "csv")
        write_output(cfg, csv_table({"z", "zeta", "lhs", "rhs", "residual", "pass"}, csv));
    else
        write_output(cfg, dump_json(doc));
    return all_pass ? 0 : 1;
}

// ----------------------------------------------------------- normality-map

template <mopuc::ScalarField S>
int cmd_normality_map(const RunConfig& cfg, const std::string& max_index) {
    auto sys = load_system<S>(cfg);
    mopuc::Lattice<S> lat(sys, cfg.policy());
    mopuc::MultiIndex box = parse_index(max_index);
    if (box.dim() != lat.r()) throw CliError("--max-index dimension != number of measures");

    Json doc = run_header("normality-map", cfg);
    Json rows = Json::array();
    std::vector<std::vector<std::string>> csv;
    for (const auto& n : mopuc::box_indices(box)) {
        const auto& info = lat.is_normal(n);
        rows.push_back(mopuc::normality_to_json(n, info, mopuc::kExactScalar<S>));
        csv.push_back({n.str(), info.normal ? "normal" : "non-normal", format_double(info.abs_det),
                       info.rcond ? format_double(*info.rcond) : "",
                       info.indeterminate ? "true" : "false"});
    }
    doc["rows"] = std::move(rows);
    if (cfg.format == "csv")
        write_output(cfg, csv_table({"index", "status", "abs_det", "rcond", "indeterminate"}, csv));
    else
        write_output(cfg, dump_json(doc));
    return 0;
}

template <class Fn>
int dispatch(const RunConfig& cfg, Fn&& fn) {
    if (cfg.backend == "exact") return fn.template operator()<mopuc::GaussianRational>();
    if (cfg.backend == "float") return fn.template operator()<mopuc::ComplexF>();
    throw CliError("unknown backend: " + cfg.backend + " (use exact or float)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiple orthogonal polynomials on the unit circle"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand

    RunConfig cfg;
    app.add_option("--system", cfg.system_path, "measure system JSON file")->required();
    app.add_option("--backend", cfg.backend, "exact|float (default exact)");
    app.add_option("--tol", cfg.tol, "identity residual tolerance (float backend)");
    app.add_option("--zero-eps", cfg.zero_eps, "scalar zero-test threshold (float backend)");
    app.add_option("--rcond-min", cfg.rcond_min, "normality rcond floor (float backend)");
    app.add_option("--out", cfg.out_path, "output path (default stdout)");
    app.add_option("--format", cfg.format, "json|csv (default json)");
    app.add_option("--seed", cfg.seed, "seed for random paths/points (default 0)");

    auto* moments = app.add_subcommand("moments", "print trigonometric moments of one measure");
    int measure = 1;
    std::string range = "-8..8";
    moments->add_option("--measure", measure, "measure index, 1-based")->required();
    moments->add_option("--range", range, "moment range, e.g. -3..3");

    auto* coeffs_cmd = app.add_subcommand("coeffs", "recurrence coefficient table over an index box");
    std::string max_index;
    coeffs_cmd->add_option("--max-index", max_index, "box corner, e.g. 2,2")->required();

    auto* verify = app.add_subcommand("verify", "run every recurrence/compatibility identity");
    std::string verify_max;
    std::vector<std::string> verify_indices;
    verify->add_option("--max-index", verify_max, "box corner, e.g. 3,3");
    verify->add_option("--index", verify_indices, "explicit index (repeatable)");

    auto* cd = app.add_subcommand("cd", "evaluate the Christoffel-Darboux identity along a path");
    std::string path_kind = "round-robin", cd_target, cd_steps, points_spec = "random:8";
    int path_len = 4;
    bool symbolic = false;
    cd->add_option("--path", path_kind, "round-robin|stepline|random|explicit");
    cd->add_option("--N", path_len, "path length for round-robin/random");
    cd->add_option("--target", cd_target, "stepline target index, e.g. 3,0");
    cd->add_option("--steps", cd_steps, "explicit step list, e.g. 1,2,1");
    cd->add_option("--points", points_spec, "random:K or circle:K (circle sets zeta = z)");
    cd->add_flag("--symbolic", symbolic, "also compare bivariate coefficient arrays");

    auto* nmap = app.add_subcommand("normality-map", "normality of every index in a box");
    std::string nmap_max;
    nmap->add_option("--max-index", nmap_max, "box corner, e.g. 4,4")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (moments->parsed()) {
            auto sep = range.find("..");
            if (sep == std::string::npos) throw CliError("bad --range, expected a..b");
            long p_min = std::stol(range.substr(0, sep));
            long p_max = std::stol(range.substr(sep + 2));
            return dispatch(cfg, [&]<mopuc::ScalarField S>() { return cmd_moments<S>(cfg, measure, p_min, p_max); });
        }
        if (coeffs_cmd->parsed())
            return dispatch(cfg, [&]<mopuc::ScalarField S>() { return cmd_coeffs<S>(cfg, max_index); });
        if (verify->parsed()) {
            if (verify_max.empty() && verify_indices.empty())
                throw CliError("verify requires --max-index or --index");
            return dispatch(cfg, [&]<mopuc::ScalarField S>() { return cmd_verify<S>(cfg, verify_max, verify_indices); });
        }
        if (cd->parsed())
            return dispatch(cfg, [&]<mopuc::ScalarField S>() {
                return cmd_cd<S>(cfg, path_kind, path_len, cd_target, cd_steps, points_spec, symbolic);
            });
        if (nmap->parsed())
            return dispatch(cfg, [&]<mopuc::ScalarField S>() { return cmd_normality_map<S>(cfg, nmap_max); });
    } catch (const mopuc::NotNormalError& e) {
        std::cerr << "error: " << e.what() << " (evaluation refused)\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
