#include <CLI11.hpp>
#include <json.hpp>

#include "nrd/attractor.hpp"
#include "nrd/conjugate.hpp"
#include "nrd/manifest.hpp"
#include "nrd/model.hpp"
#include "nrd/noise.hpp"
#include "nrd/parallel.hpp"
#include "nrd/solver.hpp"
#include "nrd/wiener.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace nrd;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    unsigned workers = default_workers();
    std::string out_dir = ".";
    std::uint64_t seed = 7;
    std::string config_file;

    void attach(CLI::App* cmd, bool with_config = true) {
        cmd->add_option("--workers", workers, "worker pool size (1 = serial reference)");
        cmd->add_option("--out-dir", out_dir, "output directory");
        cmd->add_option("--seed", seed, "path seed");
        if (with_config) cmd->add_option("--config", config_file, "model config file");
    }

    ModelSpec spec() const {
        return config_file.empty() ? ModelSpec{} : load_config(config_file);
    }

    fs::path resolve(const std::string& name) const {
        fs::create_directories(out_dir);
        return fs::path(out_dir) / name;
    }
};

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw UsageError("empty list: " + csv);
    return out;
}

std::optional<NoiseVariant> variant_of(const std::string& name) {
    if (name == "ou") return NoiseVariant::Ou;
    if (name == "mollifier") return NoiseVariant::MollifierDerivative;
    if (name == "diffq") return NoiseVariant::DifferenceQuotient;
    if (name == "white" || name == "none") return std::nullopt;
    throw UsageError("unknown noise kind: " + name);
}

std::int64_t nodes(double t, double h) { return (std::int64_t)std::llround(t / h); }

/// Path window in grid nodes wide enough for history integrals and supports.
WienerPath make_window(std::uint64_t seed, double h, double t_lo, double t_hi,
                       double history_units, double support_units) {
    std::int64_t lo = nodes(t_lo, h) - (std::int64_t)std::llround(history_units / h) - 4;
    std::int64_t hi = nodes(t_hi, h) + (std::int64_t)std::llround(support_units / h) + 4;
    lo = std::min<std::int64_t>(lo, 0);
    hi = std::max<std::int64_t>(hi, 0);
    return WienerPath::sample(seed, (double)lo * h, (double)hi * h, h);
}

double noise_history(const std::optional<NoiseVariant>& v, double delta) {
    if (v && *v == NoiseVariant::Ou) return kHistoryTimeConstants * delta;
    return 0.0;
}
double noise_support(const std::optional<NoiseVariant>& v, double delta) {
    if (v && *v != NoiseVariant::Ou) return delta;
    return 0.0;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& file, const std::string& manifest_line, const std::string& header)
        : out_(file, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot write " + file.string());
        out_ << manifest_line << "\n" << header << "\n";
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            out_ << (i ? "," : "") << format17(vals[i]);
        out_ << "\n";
    }
    void raw(const std::string& line) { out_ << line << "\n"; }

private:
    std::ofstream out_;
};

void finish_manifest(RunManifest& man, const Common& common, const std::string& primary_out) {
    man.outputs.push_back(primary_out);
    man.write(common.resolve(primary_out + ".manifest.json").string());
}

// ---------------------------------------------------------------- noise-check

int run_noise_check(const Common& common, const std::string& kind_name,
                    const std::string& deltas_csv, double T, double h, double slack,
                    const std::string& out_name) {
    const auto variant = variant_of(kind_name);
    if (!variant) throw UsageError("noise-check needs a stationary kind (ou|mollifier|diffq)");
    const std::vector<double> deltas = parse_list(deltas_csv);
    double dmax = 0.0;
    for (double d : deltas) dmax = std::max(dmax, d);
    const WienerPath path =
        make_window(common.seed, h, -T - kHistoryTimeConstants, T, noise_history(variant, dmax),
                    noise_support(variant, dmax));
    const HypothesisReport rep = certify_hypotheses(*variant, path, T, deltas, slack);

    RunManifest man;
    man.subcommand = "noise-check";
    man.add("kind", kind_name);
    man.add("deltas", deltas_csv);
    man.add("T", T);
    man.add("dt_grid", h);
    man.add("slack", slack);
    man.seeds = {common.seed};

    nlohmann::ordered_json j;
    j["manifest"] = man.hash_hex();
    j["kind"] = rep.kind;
    j["delta"] = rep.delta;
    j["k_delta"] = rep.k_delta;
    j["integral_gap"] = rep.integral_gap;
    j["stationary_gap"] = rep.stationary_gap;
    j["pass"] = rep.pass;
    std::ofstream out(common.resolve(out_name), std::ios::binary);
    out << j.dump(2) << "\n";
    finish_manifest(man, common, out_name);
    std::cout << (rep.pass ? "pass" : "fail") << ": gaps along delta = {";
    for (std::size_t i = 0; i < rep.delta.size(); ++i)
        std::cout << (i ? ", " : "") << rep.integral_gap[i];
    std::cout << "}\n";
    return 0;
}

// ------------------------------------------------------------------- validate

int run_validate(const Common& common, double alpha, double lambda1) {
    const ModelSpec spec = common.spec();
    const ValidationReport rep = validate(spec, lambda1, alpha);
    std::printf("%-72s %14s %14s  %s\n", "condition", "lhs", "rhs", "pass");
    for (const auto& r : rep.rows)
        std::printf("%-72s %14.6g %14.6g  %s%s\n", r.name.c_str(), r.lhs, r.rhs,
                    r.pass ? "yes" : "NO", r.fatal ? "" : " (informational)");
    std::printf("sampled Lipschitz constant of a: %.6g\n", rep.lipschitz_a);
    return rep.ok() ? 0 : 1;
}

// ------------------------------------------------------------------- simulate

int run_simulate(const Common& common, const std::string& noise_name, double delta, double eps_cli,
                 bool eps_set, double t0, double t1, double dt, double h, std::size_t n_modes,
                 std::size_t n_grid, const std::string& scheme, int ic_mode, double ic_amp,
                 const std::string& out_name) {
    ModelSpec spec = common.spec();
    if (eps_set) spec.epsilon = eps_cli;
    if (noise_name == "none" && eps_set && eps_cli != 0.0)
        throw UsageError("epsilon requires a noise kind");
    const auto variant = variant_of(noise_name);
    const bool white = noise_name == "white";

    SolveConfig cfg;
    cfg.dt = dt;
    cfg.t_start = t0;
    cfg.t_end = t1;
    cfg.n_modes = n_modes;
    cfg.n_grid = n_grid ? n_grid : 4 * n_modes;
    cfg.scheme = scheme == "explicit-heun" ? Scheme::ExplicitHeun : Scheme::ImexEuler;
    if (white && cfg.scheme != Scheme::ImexEuler)
        throw UsageError("white-noise solves support the imex-euler scheme only");

    const Field ic = Field::basis(n_modes, ic_mode, ic_amp);

    RunManifest man;
    man.subcommand = "simulate";
    man.add("noise", noise_name);
    man.add("delta", delta);
    man.add("epsilon", spec.epsilon);
    man.add("t0", t0);
    man.add("t1", t1);
    man.add("dt", dt);
    man.add("dt_grid", h);
    man.add("n_modes", (std::uint64_t)n_modes);
    man.add("scheme", scheme);
    man.add("ic_mode", (std::uint64_t)ic_mode);
    man.add("ic_amp", ic_amp);
    man.add("config", serialize_config(spec));
    man.seeds = {common.seed};

    Trajectory traj;
    if (noise_name == "none") {
        traj = solve_deterministic(spec, cfg, ic);
    } else if (white) {
        const double rate = spec.coupling == CouplingType::Additive ? spec.eta_damp : 1.0;
        const WienerPath path =
            make_window(common.seed, h, t0, t1, kHistoryTimeConstants / rate, 0.0);
        traj = spec.coupling == CouplingType::Additive
                   ? solve_white_additive(spec, path, cfg, ic).u
                   : solve_white_multiplicative(spec, path, cfg, ic).u;
    } else {
        const WienerPath path = make_window(common.seed, h, t0, t1, noise_history(variant, delta),
                                            noise_support(variant, delta));
        traj = solve_stationary(spec, path, NoiseKind::make(*variant, delta), cfg, ic);
    }

    std::ostringstream header;
    header << "t,l2,h1,l_u,a_l_u";
    for (std::size_t k = 1; k <= n_modes; ++k) header << ",c" << k;
    CsvWriter csv(common.resolve(out_name), man.manifest_line(), header.str());
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const Field& u = traj.states[n];
        const double lu = nonlocal_l(spec, u, cfg.n_grid);
        std::vector<double> row{traj.times[n], u.l2_norm(), std::sqrt(u.h1_norm_sq()), lu,
                                spec.a(lu)};
        row.insert(row.end(), u.coeffs.begin(), u.coeffs.end());
        csv.row(row);
    }
    finish_manifest(man, common, out_name);
    std::cout << "simulate: " << traj.states.size() << " states -> " << out_name << "\n";
    return 0;
}

// -------------------------------------------------------------------- converge

int run_converge(const Common& common, const std::string& noise_name,
                 const std::string& deltas_csv, const std::string& epsilons_csv, bool paired,
                 double t0, double t1, double dt, double h, std::size_t n_modes, int ic_mode,
                 double ic_amp, const std::string& out_name) {
    const auto variant = variant_of(noise_name);
    if (!variant) throw UsageError("converge needs a stationary kind (ou|mollifier|diffq)");
    const std::vector<double> deltas = parse_list(deltas_csv);
    const std::vector<double> epsilons = parse_list(epsilons_csv);
    std::vector<std::pair<double, double>> schedule;
    if (paired) {
        if (deltas.size() != epsilons.size())
            throw UsageError("--paired needs equally long delta and epsilon lists");
        for (std::size_t i = 0; i < deltas.size(); ++i)
            schedule.emplace_back(deltas[i], epsilons[i]);
    } else {
        for (double d : deltas)
            for (double e : epsilons) schedule.emplace_back(d, e);
    }
    ModelSpec spec = common.spec();
    double dmax = 0.0;
    for (double d : deltas) dmax = std::max(dmax, d);
    const double rate = spec.coupling == CouplingType::Additive ? spec.eta_damp : 1.0;
    const WienerPath path = make_window(
        common.seed, h, t0, t1,
        std::max(noise_history(variant, dmax), kHistoryTimeConstants / rate),
        noise_support(variant, dmax));

    SolveConfig cfg;
    cfg.dt = dt;
    cfg.t_start = t0;
    cfg.t_end = t1;
    cfg.n_modes = n_modes;
    cfg.n_grid = 4 * n_modes;
    const Field ic = Field::basis(n_modes, ic_mode, ic_amp);
    const auto rows =
        converge_solutions(spec, path, *variant, schedule, cfg, ic, common.workers);

    RunManifest man;
    man.subcommand = "converge";
    man.add("noise", noise_name);
    man.add("deltas", deltas_csv);
    man.add("epsilons", epsilons_csv);
    man.add("paired", paired ? "1" : "0");
    man.add("t0", t0);
    man.add("t1", t1);
    man.add("dt", dt);
    man.add("dt_grid", h);
    man.add("n_modes", (std::uint64_t)n_modes);
    man.add("config", serialize_config(spec));
    man.seeds = {common.seed};

    CsvWriter csv(common.resolve(out_name), man.manifest_line(),
                  "delta,epsilon,sup_gap_vs_deterministic,sup_gap_vs_white");
    for (const auto& r : rows)
        csv.row({r.delta, r.epsilon, r.sup_gap_vs_deterministic, r.sup_gap_vs_white});
    finish_manifest(man, common, out_name);
    std::cout << "converge: " << rows.size() << " rows -> " << out_name << "\n";
    return 0;
}

// ------------------------------------------------------------------------ aux

int run_aux(const Common& common, const std::string& flavor, const std::string& noise_name,
            double delta, double epsilon, double rate, double t0, double t1, double h,
            const std::string& out_name) {
    const auto variant = variant_of(noise_name);
    if (noise_name == "none") throw UsageError("aux needs ou|mollifier|diffq|white");
    std::optional<NoiseKind> kind;
    if (variant) kind = NoiseKind::make(*variant, delta);
    const bool additive = flavor == "additive";
    const AuxProcess proc = additive
                                ? AuxProcess::additive(kind, epsilon, rate, Field::basis(8, 1, 1.0))
                                : AuxProcess::multiplicative(kind, epsilon);
    const double hist = kHistoryTimeConstants / (additive ? rate : 1.0) +
                        noise_history(variant, delta);
    const WienerPath path =
        make_window(common.seed, h, t0, t1, hist, noise_support(variant, delta));
    const AuxTable tab = AuxTable::build(proc, path, path.node_of(t0), path.node_of(t1));

    RunManifest man;
    man.subcommand = "aux";
    man.add("flavor", flavor);
    man.add("noise", noise_name);
    man.add("delta", delta);
    man.add("epsilon", epsilon);
    man.add("rate", rate);
    man.add("t0", t0);
    man.add("t1", t1);
    man.add("dt_grid", h);
    man.seeds = {common.seed};

    CsvWriter csv(common.resolve(out_name), man.manifest_line(), "t,value");
    for (std::int64_t i = path.node_of(t0); i <= path.node_of(t1); ++i)
        csv.row({(double)i * h, tab.scalar_at_node(i)});
    finish_manifest(man, common, out_name);
    std::cout << "aux: -> " << out_name << "\n";
    return 0;
}

// ------------------------------------------------------------------ aux-limit

int run_aux_limit(const Common& common, const std::string& flavor, const std::string& noise_name,
                  const std::string& deltas_csv, double epsilon, double rate, double T, double h,
                  const std::string& out_name) {
    const auto variant = variant_of(noise_name);
    if (!variant) throw UsageError("aux-limit needs a stationary kind (ou|mollifier|diffq)");
    const std::vector<double> deltas = parse_list(deltas_csv);
    double dmax = 0.0;
    for (double d : deltas) dmax = std::max(dmax, d);
    const bool additive = flavor == "additive";
    const AuxProcess proto =
        additive ? AuxProcess::additive(NoiseKind::make(*variant, deltas.front()), epsilon, rate,
                                        Field::basis(8, 1, 1.0))
                 : AuxProcess::multiplicative(NoiseKind::make(*variant, deltas.front()), epsilon);
    const double hist = kHistoryTimeConstants / (additive ? rate : 1.0) +
                        noise_history(variant, dmax);
    const WienerPath path =
        make_window(common.seed, h, -T, T, hist, noise_support(variant, dmax));
    const auto rows = limit_check(proto, deltas, path, T);

    RunManifest man;
    man.subcommand = "aux-limit";
    man.add("flavor", flavor);
    man.add("noise", noise_name);
    man.add("deltas", deltas_csv);
    man.add("epsilon", epsilon);
    man.add("rate", rate);
    man.add("T", T);
    man.add("dt_grid", h);
    man.seeds = {common.seed};

    CsvWriter csv(common.resolve(out_name), man.manifest_line(), "delta,gap,white_sup");
    for (const auto& r : rows) csv.row({r.delta, r.gap, r.white_sup});
    finish_manifest(man, common, out_name);
    std::cout << "aux-limit: " << rows.size() << " rows -> " << out_name << "\n";
    return 0;
}

// --------------------------------------------------------------------- absorb

int run_absorb(const Common& common, const std::string& noise_name, const std::string& deltas_csv,
               double eps_cli, bool eps_set, double ball_radius, double pullback, int n_ics,
               double dt, double h, std::size_t n_modes, double slack,
               const std::string& out_name) {
    const auto variant = variant_of(noise_name);
    if (!variant) throw UsageError("absorb needs a stationary kind (ou|mollifier|diffq)");
    ModelSpec spec = common.spec();
    if (eps_set) spec.epsilon = eps_cli;
    const RadiusFormula formula =
        spec.p > 2.0 ? RadiusFormula::General
         : spec.coupling == CouplingType::Additive ? RadiusFormula::Additive
                                                   : RadiusFormula::Multiplicative;
    const std::vector<double> deltas = parse_list(deltas_csv);
    double dmax = 0.0;
    for (double d : deltas) dmax = std::max(dmax, d);
    const double kap = formula == RadiusFormula::General ? spec.m * kLambda1
                       : formula == RadiusFormula::Additive
                           ? spec.m * kLambda1 - 4.0 * spec.c_f
                           : spec.m * kLambda1 - 3.0 * spec.c_f;
    const double hist = kHistoryTimeConstants / kap + 1.0 + kHistoryTimeConstants +
                        noise_history(variant, dmax);
    const WienerPath path = make_window(common.seed, h, -std::max(pullback, 0.0), 0.0, hist,
                                        noise_support(variant, dmax));

    SolveConfig cfg;
    cfg.dt = dt;
    cfg.n_modes = n_modes;
    cfg.n_grid = 4 * n_modes;

    RunManifest man;
    man.subcommand = "absorb";
    man.add("noise", noise_name);
    man.add("deltas", deltas_csv);
    man.add("epsilon", spec.epsilon);
    man.add("ball_radius", ball_radius);
    man.add("pullback", pullback);
    man.add("n_ics", (std::uint64_t)n_ics);
    man.add("dt", dt);
    man.add("dt_grid", h);
    man.add("n_modes", (std::uint64_t)n_modes);
    man.add("slack", slack);
    man.add("config", serialize_config(spec));
    man.seeds = {common.seed};

    CsvWriter csv(common.resolve(out_name), man.manifest_line(),
                  "delta,epsilon,r_squared,r_squared_white,radius_gap,max_terminal_sq,bound,"
                  "contained");
    bool all_contained = true;
    for (double d : deltas) {
        const NoiseKind kind = NoiseKind::make(*variant, d);
        const RadiusReport rad = absorbing_radius(spec, path, kind, formula);
        const AbsorbReport rep = absorbing_check(spec, path, kind, rad, ball_radius, pullback,
                                                 n_ics, cfg, slack, common.workers);
        all_contained = all_contained && rep.contained;
        csv.row({d, spec.epsilon, rad.r_squared, rad.r_squared_white,
                 std::abs(rad.r_squared - rad.r_squared_white), rep.max_terminal_sq, rep.bound,
                 rep.contained ? 1.0 : 0.0});
    }
    finish_manifest(man, common, out_name);
    std::cout << "absorb: " << (all_contained ? "contained" : "NOT contained") << " -> "
              << out_name << "\n";
    return 0;
}

// ------------------------------------------------------------------ attractor

int run_attractor(const Common& common, const std::string& noise_name, double delta,
                  double eps_cli, bool eps_set, const std::string& pullback_csv, double cauchy_tol,
                  int n_ics, double ic_radius, double dt, double h, std::size_t n_modes,
                  const std::string& out_name) {
    ModelSpec spec = common.spec();
    if (eps_set) spec.epsilon = eps_cli;
    const auto variant = variant_of(noise_name);
    const bool white = noise_name == "white";
    const std::vector<double> pullback_times = parse_list(pullback_csv);

    SolveConfig cfg;
    cfg.dt = dt;
    cfg.n_modes = n_modes;
    cfg.n_grid = 4 * n_modes;
    const auto ics = default_ic_cloud(n_modes, ic_radius, n_ics);

    DynamicsMode mode = DynamicsMode::Deterministic;
    std::optional<NoiseKind> kind;
    if (white) {
        mode = DynamicsMode::White;
    } else if (variant) {
        mode = DynamicsMode::Stationary;
        kind = NoiseKind::make(*variant, delta);
    }
    const double t_back = pullback_times.back();
    const double rate = spec.coupling == CouplingType::Additive ? spec.eta_damp : 1.0;
    const WienerPath path =
        make_window(common.seed, h, -t_back, 0.0,
                    std::max(noise_history(variant, delta), kHistoryTimeConstants / rate),
                    noise_support(variant, delta));
    const PointCloud cloud =
        pullback_attractor_sample(spec, path, kind ? &*kind : nullptr, mode, pullback_times, ics,
                                  cfg, cauchy_tol, common.workers);

    RunManifest man;
    man.subcommand = "attractor";
    man.add("noise", noise_name);
    man.add("delta", delta);
    man.add("epsilon", spec.epsilon);
    man.add("pullback_times", pullback_csv);
    man.add("cauchy_tol", cauchy_tol);
    man.add("n_ics", (std::uint64_t)n_ics);
    man.add("ic_radius", ic_radius);
    man.add("dt", dt);
    man.add("dt_grid", h);
    man.add("n_modes", (std::uint64_t)n_modes);
    man.add("config", serialize_config(spec));
    man.seeds = {common.seed};

    std::ofstream out(common.resolve(out_name), std::ios::binary);
    dump_cloud_csv(cloud, out, man.manifest_line());
    finish_manifest(man, common, out_name);
    std::cout << "attractor: " << cloud.members.size() << " members -> " << out_name << "\n";
    return 0;
}

// ------------------------------------------------------------------- semidist

int run_semidist(const Common& common, const std::string& noise_name,
                 const std::string& deltas_csv, const std::string& epsilons_csv,
                 const std::string& pullback_csv, double cauchy_tol, int n_ics, double ic_radius,
                 double dt, double h, std::size_t n_modes, const std::string& out_name) {
    const auto variant = variant_of(noise_name);
    if (!variant) throw UsageError("semidist needs a stationary kind (ou|mollifier|diffq)");
    const std::vector<double> deltas = parse_list(deltas_csv);
    const std::vector<double> epsilons = parse_list(epsilons_csv);
    if (deltas.size() != epsilons.size())
        throw UsageError("semidist expects paired delta and epsilon lists");
    std::vector<std::pair<double, double>> schedule;
    for (std::size_t i = 0; i < deltas.size(); ++i) schedule.emplace_back(deltas[i], epsilons[i]);
    const std::vector<double> pullback_times = parse_list(pullback_csv);

    const ModelSpec spec = common.spec();
    double dmax = 0.0;
    for (double d : deltas) dmax = std::max(dmax, d);
    const double rate = spec.coupling == CouplingType::Additive ? spec.eta_damp : 1.0;
    const WienerPath path =
        make_window(common.seed, h, -pullback_times.back(), 0.0,
                    std::max(noise_history(variant, dmax), kHistoryTimeConstants / rate),
                    noise_support(variant, dmax));

    SolveConfig cfg;
    cfg.dt = dt;
    cfg.n_modes = n_modes;
    cfg.n_grid = 4 * n_modes;
    const auto ics = default_ic_cloud(n_modes, ic_radius, n_ics);
    const auto rows = semicontinuity_experiment(spec, path, *variant, schedule, pullback_times,
                                                ics, cfg, cauchy_tol, common.workers);

    RunManifest man;
    man.subcommand = "semidist";
    man.add("noise", noise_name);
    man.add("deltas", deltas_csv);
    man.add("epsilons", epsilons_csv);
    man.add("pullback_times", pullback_csv);
    man.add("cauchy_tol", cauchy_tol);
    man.add("n_ics", (std::uint64_t)n_ics);
    man.add("ic_radius", ic_radius);
    man.add("dt", dt);
    man.add("dt_grid", h);
    man.add("n_modes", (std::uint64_t)n_modes);
    man.add("config", serialize_config(spec));
    man.seeds = {common.seed};

    CsvWriter csv(common.resolve(out_name), man.manifest_line(),
                  "delta,epsilon,dist_total,dist_split1,dist_split2");
    for (const auto& r : rows)
        csv.row({r.delta, r.epsilon, r.dist_total, r.dist_split1, r.dist_split2});
    finish_manifest(man, common, out_name);
    std::cout << "semidist: " << rows.size() << " rows -> " << out_name << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic nonlocal reaction-diffusion experiments"};
    app.require_subcommand(1);

    Common common;

    // noise-check
    auto* nc = app.add_subcommand("noise-check", "certify the noise hypotheses");
    std::string nc_kind = "ou", nc_deltas = "0.1,0.05,0.025,0.0125", nc_out = "noise_check.json";
    double nc_T = 1.0, nc_h = 2.5e-4, nc_slack = 1.1;
    nc->add_option("--kind", nc_kind);
    nc->add_option("--deltas", nc_deltas);
    nc->add_option("--T", nc_T);
    nc->add_option("--dt-grid", nc_h);
    nc->add_option("--slack", nc_slack);
    nc->add_option("--out", nc_out);

    // validate
    auto* va = app.add_subcommand("validate", "check the standing assumptions");
    double va_alpha = -1.0, va_lambda1 = kLambda1;
    va->add_option("--alpha", va_alpha, "a-priori bound for the smallness conditions");
    va->add_option("--lambda1", va_lambda1);

    // simulate
    auto* si = app.add_subcommand("simulate", "integrate one trajectory");
    std::string si_noise = "ou", si_scheme = "imex-euler", si_out = "simulate.csv";
    double si_delta = 0.1, si_eps = 0.0, si_t0 = 0.0, si_t1 = 1.0, si_dt = 1e-3, si_h = 2.5e-4,
           si_ic_amp = 1.0;
    std::size_t si_modes = 32, si_grid = 0;
    int si_ic_mode = 1;
    si->add_option("--noise", si_noise, "ou|mollifier|diffq|white|none");
    si->add_option("--delta", si_delta);
    auto* si_eps_opt = si->add_option("--epsilon", si_eps);
    si->add_option("--t0", si_t0);
    si->add_option("--t1", si_t1);
    si->add_option("--dt", si_dt);
    si->add_option("--dt-grid", si_h);
    si->add_option("--n-modes", si_modes);
    si->add_option("--n-grid", si_grid);
    si->add_option("--scheme", si_scheme, "imex-euler|explicit-heun");
    si->add_option("--ic-mode", si_ic_mode);
    si->add_option("--ic-amp", si_ic_amp);
    si->add_option("--out", si_out);

    // converge
    auto* co = app.add_subcommand("converge", "solution gap table");
    std::string co_noise = "ou", co_deltas = "0.25,0.125,0.0625,0.03125,0.015625",
                co_eps = "0.25,0.125,0.0625,0.03125,0.015625", co_out = "converge.csv";
    bool co_paired = true;
    double co_t0 = 0.0, co_t1 = 1.0, co_dt = 0.0009765625, co_h = 0.000244140625,
           co_ic_amp = 1.0;
    std::size_t co_modes = 32;
    int co_ic_mode = 1;
    co->add_option("--noise", co_noise);
    co->add_option("--deltas", co_deltas);
    co->add_option("--epsilons", co_eps);
    co->add_flag("--paired,!--cross", co_paired, "pair the lists instead of crossing them");
    co->add_option("--t0", co_t0);
    co->add_option("--t1", co_t1);
    co->add_option("--dt", co_dt);
    co->add_option("--dt-grid", co_h);
    co->add_option("--n-modes", co_modes);
    co->add_option("--ic-mode", co_ic_mode);
    co->add_option("--ic-amp", co_ic_amp);
    co->add_option("--out", co_out);

    // aux
    auto* au = app.add_subcommand("aux", "dump the auxiliary process");
    std::string au_flavor = "multiplicative", au_noise = "ou", au_out = "aux.csv";
    double au_delta = 0.1, au_eps = 0.1, au_rate = 1.0, au_t0 = -1.0, au_t1 = 1.0, au_h = 2.5e-4;
    au->add_option("--flavor", au_flavor, "additive|multiplicative");
    au->add_option("--noise", au_noise, "ou|mollifier|diffq|white");
    au->add_option("--delta", au_delta);
    au->add_option("--epsilon", au_eps);
    au->add_option("--rate", au_rate);
    au->add_option("--t0", au_t0);
    au->add_option("--t1", au_t1);
    au->add_option("--dt-grid", au_h);
    au->add_option("--out", au_out);

    // aux-limit
    auto* al = app.add_subcommand("aux-limit", "gap table of the auxiliary process");
    std::string al_flavor = "multiplicative", al_noise = "ou", al_deltas = "0.1,0.05,0.025",
                al_out = "aux_limit.csv";
    double al_eps = 0.25, al_rate = 1.0, al_T = 1.0, al_h = 2.5e-4;
    al->add_option("--flavor", al_flavor);
    al->add_option("--noise", al_noise);
    al->add_option("--deltas", al_deltas);
    al->add_option("--epsilon", al_eps);
    al->add_option("--rate", al_rate);
    al->add_option("--T", al_T);
    al->add_option("--dt-grid", al_h);
    al->add_option("--out", al_out);

    // absorb
    auto* ab = app.add_subcommand("absorb", "absorbing radius and containment check");
    std::string ab_noise = "diffq", ab_deltas = "0.1,0.05,0.025", ab_out = "absorb.csv";
    double ab_eps = 0.0, ab_ball = 10.0, ab_pull = 20.0, ab_dt = 1e-3, ab_h = 2.5e-4,
           ab_slack = 0.05;
    int ab_ics = 16;
    std::size_t ab_modes = 32;
    ab->add_option("--noise", ab_noise);
    ab->add_option("--deltas", ab_deltas, "radius ladder; first entry drives the check");
    auto* ab_eps_opt = ab->add_option("--epsilon", ab_eps);
    ab->add_option("--ball-radius", ab_ball);
    ab->add_option("--pullback", ab_pull);
    ab->add_option("--n-ics", ab_ics);
    ab->add_option("--dt", ab_dt);
    ab->add_option("--dt-grid", ab_h);
    ab->add_option("--n-modes", ab_modes);
    ab->add_option("--slack", ab_slack);
    ab->add_option("--out", ab_out);

    // attractor
    auto* at = app.add_subcommand("attractor", "sample a pullback attractor");
    std::string at_noise = "none", at_pull = "2,5", at_out = "cloud.csv";
    double at_delta = 0.1, at_eps = 0.0, at_tol = 1e-6, at_radius = 2.0, at_dt = 1e-3,
           at_h = 2.5e-4;
    int at_ics = 32;
    std::size_t at_modes = 32;
    at->add_option("--noise", at_noise, "none|ou|mollifier|diffq|white");
    at->add_option("--delta", at_delta);
    auto* at_eps_opt = at->add_option("--epsilon", at_eps);
    at->add_option("--pullback-times", at_pull);
    at->add_option("--cauchy-tol", at_tol);
    at->add_option("--n-ics", at_ics);
    at->add_option("--ic-radius", at_radius);
    at->add_option("--dt", at_dt);
    at->add_option("--dt-grid", at_h);
    at->add_option("--n-modes", at_modes);
    at->add_option("--out", at_out);

    // semidist
    auto* se = app.add_subcommand("semidist", "upper-semicontinuity table");
    std::string se_noise = "ou", se_deltas = "0.25,0.125,0.0625,0.03125,0.015625",
                se_eps = "0.25,0.125,0.0625,0.03125,0.015625", se_pull = "2,5",
                se_out = "semidist.csv";
    double se_tol = 1e-6, se_radius = 2.0, se_dt = 0.0009765625, se_h = 0.000244140625;
    int se_ics = 32;
    std::size_t se_modes = 32;
    se->add_option("--noise", se_noise);
    se->add_option("--deltas", se_deltas);
    se->add_option("--epsilons", se_eps);
    se->add_option("--pullback-times", se_pull);
    se->add_option("--cauchy-tol", se_tol);
    se->add_option("--n-ics", se_ics);
    se->add_option("--ic-radius", se_radius);
    se->add_option("--dt", se_dt);
    se->add_option("--dt-grid", se_h);
    se->add_option("--n-modes", se_modes);
    se->add_option("--out", se_out);

    for (auto* cmd : {nc, va, si, co, au, al, ab, at, se}) common.attach(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help() << "\n";
        return 64;
    }

    try {
        if (app.got_subcommand(nc))
            return run_noise_check(common, nc_kind, nc_deltas, nc_T, nc_h, nc_slack, nc_out);
        if (app.got_subcommand(va)) return run_validate(common, va_alpha, va_lambda1);
        if (app.got_subcommand(si))
            return run_simulate(common, si_noise, si_delta, si_eps, si_eps_opt->count() > 0, si_t0,
                                si_t1, si_dt, si_h, si_modes, si_grid, si_scheme, si_ic_mode,
                                si_ic_amp, si_out);
        if (app.got_subcommand(co))
            return run_converge(common, co_noise, co_deltas, co_eps, co_paired, co_t0, co_t1,
                                co_dt, co_h, co_modes, co_ic_mode, co_ic_amp, co_out);
        if (app.got_subcommand(au))
            return run_aux(common, au_flavor, au_noise, au_delta, au_eps, au_rate, au_t0, au_t1,
                           au_h, au_out);
        if (app.got_subcommand(al))
            return run_aux_limit(common, al_flavor, al_noise, al_deltas, al_eps, al_rate, al_T,
                                 al_h, al_out);
        if (app.got_subcommand(ab))
            return run_absorb(common, ab_noise, ab_deltas, ab_eps, ab_eps_opt->count() > 0,
                              ab_ball, ab_pull, ab_ics, ab_dt, ab_h, ab_modes, ab_slack, ab_out);
        if (app.got_subcommand(at))
            return run_attractor(common, at_noise, at_delta, at_eps, at_eps_opt->count() > 0,
                                 at_pull, at_tol, at_ics, at_radius, at_dt, at_h, at_modes,
                                 at_out);
        if (app.got_subcommand(se))
            return run_semidist(common, se_noise, se_deltas, se_eps, se_pull, se_tol, se_ics,
                                se_radius, se_dt, se_h, se_modes, se_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
