#include "ghostfield/harness.hpp"

#include "ghostfield/errors.hpp"
#include "ghostfield/fock.hpp"
#include "ghostfield/interference.hpp"
#include "ghostfield/mode.hpp"
#include "ghostfield/quadrature.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace ghostfield {

namespace {

using ordered_json = nlohmann::ordered_json;

Vec3 parse_vec3(const std::string& text, const std::string& what) {
    Vec3 v;
    std::stringstream ss(text);
    std::string part;
    int i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= 3)
            throw std::invalid_argument(what + ": expected x,y,z");
        std::size_t used = 0;
        v[i++] = std::stod(part, &used);
        if (used != part.size())
            throw std::invalid_argument(what + ": bad number '" + part + "'");
    }
    if (i != 3)
        throw std::invalid_argument(what + ": expected x,y,z");
    return v;
}

std::vector<double> parse_list(const std::string& text,
                               const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(part, &used));
        if (used != part.size())
            throw std::invalid_argument(what + ": bad number '" + part + "'");
    }
    if (out.empty())
        throw std::invalid_argument(what + ": empty list");
    return out;
}

CouplingKind parse_coupling(const std::string& s) {
    if (s == "em")
        return CouplingKind::EM;
    if (s == "gravity")
        return CouplingKind::Gravity;
    throw std::invalid_argument("coupling must be 'em' or 'gravity'");
}

QuadScheme parse_scheme(const std::string& s) {
    if (s == "gauss")
        return QuadScheme::CompositeGauss;
    if (s == "tanh-sinh")
        return QuadScheme::TanhSinh;
    throw std::invalid_argument("scheme must be 'gauss' or 'tanh-sinh'");
}

TailRule parse_tail(const std::string& s) {
    if (s == "analytic")
        return TailRule::AnalyticSineIntegral;
    if (s == "none")
        return TailRule::None;
    throw std::invalid_argument("tail must be 'analytic' or 'none'");
}

double min_separation(const Configuration& c) {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& ra : c.positions_a)
        for (const auto& rb : c.positions_b)
            r = std::min(r, (ra - rb).norm());
    return r;
}

void finalize_spec(ParsedConfig& pc) {
    if (!pc.has_k_max)
        pc.spec.k_max = 200.0 / min_separation(pc.config);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_digest(const ParsedConfig& pc) {
    std::ostringstream os;
    os.precision(17);
    os << (pc.config.coupling_kind == CouplingKind::EM ? "em" : "gravity")
       << '|' << pc.config.charge_value << '|' << pc.config.time;
    for (const auto& r : pc.config.positions_a)
        os << "|a:" << r.x() << ',' << r.y() << ',' << r.z();
    for (const auto& r : pc.config.positions_b)
        os << "|b:" << r.x() << ',' << r.y() << ',' << r.z();
    os << '|' << pc.spec.k_min << '|' << pc.spec.k_max << '|'
       << pc.spec.n_nodes << '|' << static_cast<int>(pc.spec.scheme) << '|'
       << static_cast<int>(pc.spec.tail) << '|' << pc.spec.rel_tol << '|'
       << pc.n_max;
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(os.str());
    return hex.str();
}

std::string iso8601_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ordered_json spec_json(const ParsedConfig& pc) {
    return ordered_json{
        {"k_min", pc.spec.k_min},
        {"k_max", pc.spec.k_max},
        {"n_nodes", pc.spec.n_nodes},
        {"scheme", pc.spec.scheme == QuadScheme::CompositeGauss ? "gauss"
                                                                : "tanh-sinh"},
        {"tail", pc.spec.tail == TailRule::AnalyticSineIntegral ? "analytic"
                                                                : "none"},
        {"rel_tol", pc.spec.rel_tol},
        {"n_max", pc.n_max},
    };
}

void emit_manifest(const std::string& command, const ParsedConfig& pc,
                   const ordered_json& results, const std::string& out_path) {
    ordered_json manifest{
        {"command", command},
        {"config_digest", config_digest(pc)},
        {"spec", spec_json(pc)},
        {"results", results},
        {"tool_version", GHOSTFIELD_VERSION},
        {"timestamp", iso8601_now()},
    };
    if (out_path.empty()) {
        std::cout << manifest.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw std::invalid_argument("cannot open output file: " + out_path);
    out << manifest.dump(2) << '\n';
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

int worker_count() {
    if (const char* env = std::getenv("GHOSTFIELD_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

struct CommonOpts {
    std::string config_path;
    std::string coupling = "em";
    double q = 1.0;
    std::string ra = "0,0,0";
    std::string ra2;
    std::string rb = "1,0,0";
    std::string rb2;
    double t = 1.0;
    double k_min = 0.0;
    double k_max = 0.0; // 0: derive 200/R
    int n_nodes = 256;
    std::string scheme = "gauss";
    std::string tail = "analytic";
    int n_max = 32;
    double rel_tol = 1e-6;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "key=value configuration file (flags override it)");
        cmd->add_option("--coupling", coupling, "em or gravity");
        cmd->add_option("--q", q, "charge (em) or mass (gravity)");
        cmd->add_option("--ra", ra, "particle A position x,y,z");
        cmd->add_option("--ra2", ra2, "second branch position of A");
        cmd->add_option("--rb", rb, "particle B position x,y,z");
        cmd->add_option("--rb2", rb2, "second branch position of B");
        cmd->add_option("--t", t, "evolution time");
        cmd->add_option("--k-min", k_min, "lower mode cutoff");
        cmd->add_option("--k-max", k_max, "upper mode cutoff (default 200/R)");
        cmd->add_option("--n-nodes", n_nodes, "radial quadrature node budget");
        cmd->add_option("--scheme", scheme, "gauss or tanh-sinh");
        cmd->add_option("--tail", tail, "analytic or none");
        cmd->add_option("--n-max", n_max, "Fock truncation level");
        cmd->add_option("--rel-tol", rel_tol, "phase relative tolerance");
        cmd->add_option("--out", out, "write the JSON run manifest here");
    }

    ParsedConfig resolve(const CLI::App* cmd) const {
        ParsedConfig pc;
        if (!config_path.empty())
            pc = parse_config(config_path);
        auto given = [&](const std::string& name) {
            return cmd->count(name) > 0;
        };
        if (config_path.empty() || given("--coupling"))
            pc.config.coupling_kind = parse_coupling(coupling);
        if (config_path.empty() || given("--q"))
            pc.config.charge_value = q;
        if (config_path.empty() || given("--ra") || given("--ra2")) {
            pc.config.positions_a = {parse_vec3(ra, "--ra")};
            if (!ra2.empty())
                pc.config.positions_a.push_back(parse_vec3(ra2, "--ra2"));
        }
        if (config_path.empty() || given("--rb") || given("--rb2")) {
            pc.config.positions_b = {parse_vec3(rb, "--rb")};
            if (!rb2.empty())
                pc.config.positions_b.push_back(parse_vec3(rb2, "--rb2"));
        }
        if (config_path.empty() || given("--t"))
            pc.config.time = t;
        if (config_path.empty() || given("--k-min"))
            pc.spec.k_min = k_min;
        if (given("--k-max") || (config_path.empty() && k_max > 0.0)) {
            pc.spec.k_max = k_max;
            pc.has_k_max = true;
        }
        if (config_path.empty() || given("--n-nodes"))
            pc.spec.n_nodes = n_nodes;
        if (config_path.empty() || given("--scheme"))
            pc.spec.scheme = parse_scheme(scheme);
        if (config_path.empty() || given("--tail"))
            pc.spec.tail = parse_tail(tail);
        if (config_path.empty() || given("--n-max"))
            pc.n_max = n_max;
        if (config_path.empty() || given("--rel-tol"))
            pc.spec.rel_tol = rel_tol;
        pc.config.validate();
        finalize_spec(pc);
        pc.spec.validate();
        return pc;
    }
};

int cmd_phase(const CommonOpts& opts, const CLI::App* cmd) {
    const ParsedConfig pc = opts.resolve(cmd);
    const PhaseResult r = coulomb_phase(pc.config, pc.config.positions_a[0],
                                        pc.config.positions_b[0], pc.spec);
    const double R =
        (pc.config.positions_a[0] - pc.config.positions_b[0]).norm();
    const double analytic = analytic_phase(pc.config, R);
    ordered_json results{
        {"R", R},
        {"phase", r.phase},
        {"phase_analytic", analytic},
        {"rel_err", analytic == 0.0
                        ? 0.0
                        : std::abs(r.phase - analytic) / std::abs(analytic)},
        {"subtracted_constant", r.subtracted_constant},
        {"est_error", r.est_error},
    };
    emit_manifest("phase", pc, results, opts.out);
    return 0;
}

int cmd_modes(const CommonOpts& opts, const CLI::App* cmd, double k,
              double eta_re, double eta_im) {
    const ParsedConfig pc = opts.resolve(cmd);
    FockSpaceRep rep(pc.n_max);
    const Complex eta(eta_re, eta_im);
    const ModeHamiltonian mode = build_mode_hamiltonian(k, eta, rep);
    const ConstrainedState state = make_constrained_state(mode, rep);
    const double closed = closed_form_mode_phase(k, eta, pc.config.time);
    const ModePhase brute =
        brute_force_mode_phase(mode, state, pc.config.time);
    const double wrapped =
        std::fmod(closed, 2.0 * std::numbers::pi) < 0.0
            ? std::fmod(closed, 2.0 * std::numbers::pi) + 2.0 * std::numbers::pi
            : std::fmod(closed, 2.0 * std::numbers::pi);
    ordered_json results{
        {"k", k},
        {"eta_re", eta_re},
        {"eta_im", eta_im},
        {"phase_closed", closed},
        {"phase_closed_wrapped", wrapped},
        {"phase_brute", brute.phase},
        {"overlap_modulus", brute.modulus},
        {"phase_diff", std::abs(std::remainder(brute.phase - closed,
                                               2.0 * std::numbers::pi))},
    };
    emit_manifest("modes", pc, results, opts.out);
    return 0;
}

int cmd_heisenberg(const CommonOpts& opts, const CLI::App* cmd) {
    const ParsedConfig pc = opts.resolve(cmd);
    const ChargeObservableResult r =
        heisenberg_CA_expectation(pc.config, pc.spec, pc.n_max, pc.config.time);
    const double direct = relative_phase(pc.config, pc.spec);
    ordered_json results{
        {"extracted_phase", r.extracted_phase},
        {"relative_phase", direct},
        {"visibility", r.visibility},
        {"value_re", r.value.real()},
        {"value_im", r.value.imag()},
        {"static_overlap_log", r.static_overlap_log},
        {"est_error", r.est_error},
    };
    emit_manifest("heisenberg", pc, results, opts.out);
    return 0;
}

int cmd_tomography(const CommonOpts& opts, const CLI::App* cmd,
                   std::uint64_t seed, int samples) {
    const ParsedConfig pc = opts.resolve(cmd);
    const double truth = relative_phase(pc.config, pc.spec);
    const double est =
        tomography_without_closing(pc.config, pc.spec, seed, samples);
    ordered_json results{
        {"seed", seed},
        {"n_samples", samples},
        {"phase_estimate", est},
        {"phase_true", truth},
        {"abs_error",
         std::abs(std::remainder(est - truth, 2.0 * std::numbers::pi))},
    };
    emit_manifest("tomography", pc, results, opts.out);
    return 0;
}

int cmd_entangle(const CommonOpts& opts, const CLI::App* cmd) {
    const ParsedConfig pc = opts.resolve(cmd);
    const BranchPhaseMatrix m = branch_phase_matrix(pc.config, pc.spec);
    const WitnessResult w = entanglement_witness(pc.config, pc.spec);
    ordered_json results{
        {"phases", {m.phases[0][0], m.phases[0][1], m.phases[1][0],
                    m.phases[1][1]}},
        {"delta", w.delta},
        {"concurrence", w.concurrence},
        {"negativity", w.negativity},
        {"est_error", m.est_error},
    };
    emit_manifest("entangle", pc, results, opts.out);
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const CLI::App* cmd,
              const std::string& param, const std::string& values_text,
              const std::string& csv_path) {
    const ParsedConfig base = opts.resolve(cmd);
    if (param != "R" && param != "t")
        throw std::invalid_argument("sweep --param must be 'R' or 't'");
    const std::vector<double> values = parse_list(values_text, "--values");

    struct Row {
        double R = 0.0, t = 0.0;
        double numeric = 0.0, analytic = 0.0, rel_err = 0.0, est = 0.0;
        std::string error;
    };
    std::vector<Row> rows(values.size());

    auto run_one = [&](std::size_t i) {
        Row& row = rows[i];
        ParsedConfig pc = base;
        if (param == "R") {
            pc.config.positions_b = {pc.config.positions_a[0] +
                                     Vec3(values[i], 0.0, 0.0)};
            if (!pc.has_k_max)
                pc.spec.k_max = 200.0 / values[i];
        } else {
            pc.config.time = values[i];
        }
        row.R = (pc.config.positions_a[0] - pc.config.positions_b[0]).norm();
        row.t = pc.config.time;
        try {
            const PhaseResult r =
                coulomb_phase(pc.config, pc.config.positions_a[0],
                              pc.config.positions_b[0], pc.spec);
            row.numeric = r.phase;
            row.analytic = analytic_phase(pc.config, row.R);
            row.rel_err = row.analytic == 0.0
                              ? 0.0
                              : std::abs(row.numeric - row.analytic) /
                                    std::abs(row.analytic);
            row.est = r.est_error;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const int workers =
        std::min<int>(worker_count(), static_cast<int>(values.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < values.size();
                 i = next.fetch_add(1))
                run_one(i);
        });
    for (auto& th : pool)
        th.join();

    for (const Row& row : rows)
        if (!row.error.empty())
            throw ConvergenceError("sweep: point failed: " + row.error, 0.0);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!csv_path.empty()) {
        file.open(csv_path);
        if (!file)
            throw std::invalid_argument("cannot open output file: " +
                                        csv_path);
        out = &file;
    }
    *out << "param,R,t,phase_numeric,phase_analytic,rel_err,est_error\n";
    for (const Row& row : rows)
        *out << csv_field(param) << ',' << fmt(row.R) << ',' << fmt(row.t)
             << ',' << fmt(row.numeric) << ',' << fmt(row.analytic) << ','
             << fmt(row.rel_err) << ',' << fmt(row.est) << '\n';
    return 0;
}

int cmd_selftest() {
    FockSpaceRep rep(32);
    if (commutator_check(rep) > 1e-12)
        throw TruncationError("selftest: commutator interior deviation",
                              commutator_check(rep));
    const MState coh = m_coherent(Complex(0.5, 0.2), rep);
    if (std::abs(m_inner(coh, coh).real() - 1.0) > 1e-9)
        throw TruncationError("selftest: coherent M-norm off unity",
                              std::abs(m_inner(coh, coh).real() - 1.0));
    Configuration cfg;
    cfg.coupling_kind = CouplingKind::EM;
    cfg.charge_value = 1.0;
    cfg.positions_a = {Vec3(0, 0, 0)};
    cfg.positions_b = {Vec3(1, 0, 0)};
    cfg.time = 1.0;
    const QuadratureSpec spec = default_spec_for(1.0);
    const PhaseResult r =
        coulomb_phase(cfg, cfg.positions_a[0], cfg.positions_b[0], spec);
    const double expect = analytic_phase(cfg, 1.0);
    if (std::abs(r.phase - expect) > 1e-6 * expect)
        throw ConvergenceError("selftest: phase deviates from 1/R law",
                               std::abs(r.phase - expect));
    std::cout << "selftest: algebra ok, coherent ok, phase ok\n";
    return 0;
}

} // namespace

ParsedConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    ParsedConfig pc;
    pc.config.positions_a.clear();
    pc.config.positions_b.clear();
    Vec3 ra{0, 0, 0}, ra2{0, 0, 0}, rb{1, 0, 0}, rb2{0, 0, 0};
    bool has_ra = false, has_ra2 = false, has_rb = false, has_rb2 = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " +
                                        std::to_string(line_no) +
                                        ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto strip = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        strip(key);
        strip(value);
        if (key == "coupling")
            pc.config.coupling_kind = parse_coupling(value);
        else if (key == "q")
            pc.config.charge_value = std::stod(value);
        else if (key == "ra") {
            ra = parse_vec3(value, "ra");
            has_ra = true;
        } else if (key == "ra2") {
            ra2 = parse_vec3(value, "ra2");
            has_ra2 = true;
        } else if (key == "rb") {
            rb = parse_vec3(value, "rb");
            has_rb = true;
        } else if (key == "rb2") {
            rb2 = parse_vec3(value, "rb2");
            has_rb2 = true;
        } else if (key == "t")
            pc.config.time = std::stod(value);
        else if (key == "k_min")
            pc.spec.k_min = std::stod(value);
        else if (key == "k_max") {
            pc.spec.k_max = std::stod(value);
            pc.has_k_max = true;
        } else if (key == "n_nodes")
            pc.spec.n_nodes = std::stoi(value);
        else if (key == "scheme")
            pc.spec.scheme = parse_scheme(value);
        else if (key == "tail")
            pc.spec.tail = parse_tail(value);
        else if (key == "n_max")
            pc.n_max = std::stoi(value);
        else if (key == "rel_tol")
            pc.spec.rel_tol = std::stod(value);
        else
            throw std::invalid_argument("config line " +
                                        std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
    }
    if (!has_ra)
        throw std::invalid_argument("config: missing key 'ra'");
    if (!has_rb)
        throw std::invalid_argument("config: missing key 'rb'");
    pc.config.positions_a.push_back(ra);
    if (has_ra2)
        pc.config.positions_a.push_back(ra2);
    pc.config.positions_b.push_back(rb);
    if (has_rb2)
        pc.config.positions_b.push_back(rb2);
    pc.config.validate();
    finalize_spec(pc);
    pc.spec.validate();
    return pc;
}

int run_command(const std::vector<std::string>& argv) {
    CLI::App app{"scalar-mode interaction phase simulator"};
    app.require_subcommand(1);

    CommonOpts phase_opts, modes_opts, heis_opts, tomo_opts, ent_opts,
        sweep_opts;

    CLI::App* phase = app.add_subcommand(
        "phase", "position-dependent phase for one branch pair");
    phase_opts.attach(phase);

    CLI::App* modes = app.add_subcommand(
        "modes", "single-mode brute-force vs closed-form phase");
    modes_opts.attach(modes);
    double mode_k = 1.0, eta_re = 0.5, eta_im = 0.0;
    modes->add_option("--k", mode_k, "mode wavenumber");
    modes->add_option("--eta-re", eta_re, "displacement, real part");
    modes->add_option("--eta-im", eta_im, "displacement, imaginary part");

    CLI::App* heis = app.add_subcommand(
        "heisenberg", "charge cross observable, Heisenberg picture");
    heis_opts.attach(heis);

    CLI::App* tomo = app.add_subcommand(
        "tomography", "phase reconstruction from finite samples");
    tomo_opts.attach(tomo);
    std::uint64_t seed = 1;
    int samples = 10000;
    tomo->add_option("--seed", seed, "sampling seed");
    tomo->add_option("--samples", samples, "samples per quadrature");

    CLI::App* ent = app.add_subcommand(
        "entangle", "two-particle entanglement witness");
    ent_opts.attach(ent);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "phase sweep over R or t, CSV output");
    sweep_opts.attach(sweep);
    std::string sweep_param = "R", sweep_values, sweep_csv;
    sweep->add_option("--param", sweep_param, "R or t");
    sweep->add_option("--values", sweep_values, "comma-separated values")
        ->required();
    sweep->add_option("--csv", sweep_csv, "CSV output path (default stdout)");

    app.add_subcommand("selftest", "quick internal consistency checks");

    try {
        std::vector<std::string> args(argv.begin() + 1, argv.end());
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (phase->parsed())
            return cmd_phase(phase_opts, phase);
        if (modes->parsed())
            return cmd_modes(modes_opts, modes, mode_k, eta_re, eta_im);
        if (heis->parsed())
            return cmd_heisenberg(heis_opts, heis);
        if (tomo->parsed())
            return cmd_tomography(tomo_opts, tomo, seed, samples);
        if (ent->parsed())
            return cmd_entangle(ent_opts, ent);
        if (sweep->parsed())
            return cmd_sweep(sweep_opts, sweep, sweep_param, sweep_values,
                             sweep_csv);
        return cmd_selftest();
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace ghostfield
