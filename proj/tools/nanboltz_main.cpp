// Command-line front end: simulation runs, convergence scans, the invariant
// suite, and standalone transport computations.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

#include "nanboltz/errors.hpp"
#include "nanboltz/harness.hpp"
#include "nanboltz/io.hpp"
#include "nanboltz/simd/kernels.hpp"

namespace {

using namespace nanboltz;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "flat key = value config file");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "master seed (overrides the config)")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--threads", opts.threads, "worker threads (affects speed only)")
        ->check(CLI::PositiveNumber);
}

uint64_t resolve_seed(const CommonOpts& opts, FlatConfig& cfg) {
    uint64_t seed = cfg.get_u64("seed", 1);
    return opts.seed_set ? opts.seed : seed;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_simulate(const CommonOpts& opts) {
    auto t0 = std::chrono::steady_clock::now();
    FlatConfig cfg = FlatConfig::load(opts.config_path);

    SimConfig sc;
    sc.kernel = kernel_from_config(cfg);
    sc.law = law_from_config(cfg);
    sc.n = cfg.get_size("n");
    sc.k_levels = cfg.get_double_list("k_levels");
    sc.horizon = cfg.get_double("horizon");
    sc.snapshot_times = cfg.get_double_list("snapshots", {sc.horizon});
    sc.seed = resolve_seed(opts, cfg);
    sc.replica = cfg.get_u64("replica", 0);
    cfg.finish();

    std::vector<Trajectory> trajs = run_coupled(sc);

    std::filesystem::create_directories(opts.out_dir);
    nlohmann::json manifest;
    manifest["version"] = kVersionString;
    manifest["seed"] = sc.seed;
    std::string echo = cfg.canonical_text();
    manifest["config"] = echo;
    manifest["config_hash"] = (std::ostringstream{} << std::hex << io::fnv1a64(echo)).str();
    manifest["event_count"] = trajs.back().events_generated;
    auto files = nlohmann::json::array();

    for (std::size_t l = 0; l < trajs.size(); ++l) {
        std::string ktag = io::format_double(sc.k_levels[l]);
        for (std::size_t s = 0; s < trajs[l].snapshots.size(); ++s) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_k%s_%03zu.csv", ktag.c_str(), s);
            std::string path = opts.out_dir + "/" + name;
            io::write_snapshot_csv(path, trajs[l].snapshots[s].v);
            files.push_back(name);
        }
        std::string final_path = opts.out_dir + "/final_k" + ktag + ".csv";
        io::write_snapshot_csv(final_path, trajs[l].state.v);
        files.push_back("final_k" + ktag + ".csv");
    }
    manifest["files"] = files;
    manifest["wall_time_s"] = seconds_since(t0);
    io::write_text_file(opts.out_dir + "/manifest.json", manifest.dump(2) + "\n");

    std::cout << "simulated N=" << sc.n << " to T=" << sc.horizon << " ("
              << trajs.back().events_generated << " events, "
              << trajs.size() << " cutoff level(s)) -> " << opts.out_dir << "\n";
    return kExitOk;
}

ScanConfig scan_config_common(FlatConfig& cfg, const CommonOpts& opts) {
    ScanConfig sc;
    sc.kernel = kernel_from_config(cfg);
    sc.law = law_from_config(cfg);
    sc.horizon = cfg.get_double("horizon");
    sc.replicas = cfg.get_size("replicas", 30);
    sc.snapshot_times = cfg.get_double_list("snapshots", {});
    sc.seed = resolve_seed(const_cast<CommonOpts&>(opts), cfg);
    return sc;
}

ReportFormat format_from(FlatConfig& cfg) {
    std::string f = cfg.get_string("format", "csv");
    if (f == "csv") return ReportFormat::csv;
    if (f == "structured-text" || f == "text") return ReportFormat::structured_text;
    throw input_error("config: unknown format '" + f + "'");
}

int cmd_n_scan(const CommonOpts& opts) {
    auto t0 = std::chrono::steady_clock::now();
    FlatConfig cfg = FlatConfig::load(opts.config_path);
    ScanConfig sc = scan_config_common(cfg, opts);
    sc.n_list = cfg.get_size_list("n_list");
    sc.k_fixed = cfg.get_double("k");
    sc.n_ref = cfg.get_size("n_ref");
    std::string ref = cfg.get_string("reference", "particle");
    if (ref == "particle") sc.reference = ReferenceKind::particle;
    else if (ref == "gaussian") sc.reference = ReferenceKind::gaussian;
    else if (ref == "both") sc.reference = ReferenceKind::both;
    else throw input_error("config: unknown reference '" + ref + "'");
    ReportFormat format = format_from(cfg);
    cfg.finish();

    NScanResult res = run_n_scan(sc, opts.threads);
    auto files = emit_report(res.rows, opts.out_dir, format, cfg.canonical_text(), sc.seed,
                             seconds_since(t0),
                             {{"reference_self_w2sq", io::format_double(res.ref_self_dist)},
                              {"reference_reliable", res.reliable ? "true" : "false"}});
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    if (!res.reliable)
        std::cout << "warning: reference self-distance " << res.ref_self_dist
                  << " is not 4x below the smallest scan statistic; run flagged unreliable\n";
    return kExitOk;
}

int cmd_k_scan(const CommonOpts& opts) {
    auto t0 = std::chrono::steady_clock::now();
    FlatConfig cfg = FlatConfig::load(opts.config_path);
    ScanConfig sc = scan_config_common(cfg, opts);
    sc.n_fixed = cfg.get_size("n");
    sc.k_levels = cfg.get_double_list("k_levels");
    ReportFormat format = format_from(cfg);
    cfg.finish();

    auto rows = run_k_scan(sc, opts.threads);
    auto files = emit_report(rows, opts.out_dir, format, cfg.canonical_text(), sc.seed,
                             seconds_since(t0));
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return kExitOk;
}

int cmd_epsilon_n(const CommonOpts& opts) {
    auto t0 = std::chrono::steady_clock::now();
    FlatConfig cfg = FlatConfig::load(opts.config_path);
    InitialLaw law = law_from_config(cfg);
    auto n_list = cfg.get_size_list("n_list");
    std::size_t replicas = cfg.get_size("replicas", 50);
    std::size_t ref_factor = cfg.get_size("ref_factor", 8);
    uint64_t seed = resolve_seed(opts, cfg);
    ReportFormat format = format_from(cfg);
    cfg.finish();
    if (ref_factor < 8)
        throw input_error("epsilon-n: ref_factor must be >= 8 to control reference bias");

    std::vector<ScanRow> rows;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        std::size_t n = n_list[i];
        MeanSE m = empirical_w2sq_error(law, n, replicas, ref_factor * n,
                                        seed + (i << 32), opts.threads);
        rows.push_back({"epsilonN", n, 0.0, 0.0, m.mean, m.se, replicas, seed});
        std::cout << "epsilonN N=" << n << " M=" << ref_factor * n << ": " << m.mean << " +- "
                  << m.se << "\n";
    }
    auto files = emit_report(rows, opts.out_dir, format, cfg.canonical_text(), seed,
                             seconds_since(t0),
                             {{"reference_factor", std::to_string(ref_factor)}});
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return kExitOk;
}

int cmd_verify(const CommonOpts& opts) {
    FlatConfig cfg =
        opts.config_path.empty() ? FlatConfig::parse("") : FlatConfig::load(opts.config_path);
    VerifyConfig vc = verify_config_from(cfg);
    cfg.finish();
    vc.threads = opts.threads;

    VerifyReport report = run_invariant_suite(vc);
    for (const CheckResult& c : report.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.details << ")\n";

    std::filesystem::create_directories(opts.out_dir);
    std::string path = opts.out_dir + "/verify_report.json";
    io::write_text_file(path, report.to_json());
    std::cout << (report.pass ? "all checks passed" : "CHECK FAILURES") << "; report at " << path
              << "\n";
    return report.pass ? kExitOk : kExitViolation;
}

int cmd_w2(const std::string& a_path, const std::string& b_path) {
    PointCloud a{io::read_cloud_csv(a_path)};
    PointCloud b{io::read_cloud_csv(b_path)};
    TransportResult r =
        (a.size() == b.size()) ? w2sq_exact(a, b) : w2sq_uneven(a, b);
    std::cout << "n = " << a.size() << ", m = " << b.size() << "\n";
    std::cout << "w2_sq = " << io::format_double(r.cost_sq) << "\n";
    std::cout << "w2 = " << io::format_double(r.cost()) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nanbu collision-process simulator and verification suite"};
    app.require_subcommand(1);

    CommonOpts sim_opts, nscan_opts, kscan_opts, eps_opts, verify_opts;
    std::string w2_a, w2_b;

    add_common(app.add_subcommand("simulate", "run the particle process and dump snapshots"),
               sim_opts);
    add_common(app.add_subcommand("n-scan", "convergence scan over particle counts"),
               nscan_opts);
    add_common(app.add_subcommand("k-scan", "coupled convergence scan over cutoff levels"),
               kscan_opts);
    add_common(app.add_subcommand("epsilon-n", "empirical W2^2 sampling-error curve"), eps_opts);
    add_common(app.add_subcommand("verify", "run the invariant and inequality suite"),
               verify_opts, /*config_required=*/false);

    auto* w2 = app.add_subcommand("w2", "exact squared W2 between two cloud CSV files");
    w2->add_option("--a", w2_a, "first cloud CSV")->required();
    w2->add_option("--b", w2_b, "second cloud CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (app.got_subcommand("simulate")) return cmd_simulate(sim_opts);
        if (app.got_subcommand("n-scan")) return cmd_n_scan(nscan_opts);
        if (app.got_subcommand("k-scan")) return cmd_k_scan(kscan_opts);
        if (app.got_subcommand("epsilon-n")) return cmd_epsilon_n(eps_opts);
        if (app.got_subcommand("verify")) return cmd_verify(verify_opts);
        if (app.got_subcommand("w2")) return cmd_w2(w2_a, w2_b);
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const capacity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << " (estimate " << e.estimate
                  << ", error bound " << e.error_bound << ")\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
