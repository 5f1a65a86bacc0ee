#include "nanboltz/harness.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "nanboltz/errors.hpp"
#include "nanboltz/geometry.hpp"
#include "nanboltz/inequality.hpp"
#include "nanboltz/io.hpp"
#include "nanboltz/parallel.hpp"
#include "nanboltz/quadrature.hpp"

namespace nanboltz {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

MeanSE mean_se(std::span<const double> vals) {
    MeanSE out;
    out.replicas = vals.size();
    if (vals.empty()) return out;
    double sum = 0.0;
    for (double v : vals) sum += v;
    out.mean = sum / static_cast<double>(vals.size());
    if (vals.size() < 2) return out;
    double ss = 0.0;
    for (double v : vals) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (static_cast<double>(vals.size() - 1) *
                             static_cast<double>(vals.size())));
    return out;
}

PointCloud cloud_of(const ParticleState& s) { return {s.v}; }

PointCloud head_of(const PointCloud& c, std::size_t m) {
    PointCloud out;
    out.pts.assign(c.pts.begin(), c.pts.begin() + std::min(m, c.pts.size()));
    return out;
}

// Stream/replica ids. Scan replicas, reference runs and auxiliary draws must
// never share a stream for one seed.
constexpr uint64_t kScanReplicaBlock = uint64_t{1} << 20;
constexpr uint64_t kReferenceReplica = uint64_t{1} << 40;
constexpr uint64_t kGaussStreamBase = uint64_t{1} << 41;

}  // namespace

FlatConfig FlatConfig::parse(const std::string& text) {
    FlatConfig cfg;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw input_error("config line " + std::to_string(line_no) +
                              ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw input_error("config line " + std::to_string(line_no) + ": empty key");
        if (!cfg.kv_.emplace(key, value).second)
            throw input_error("config: duplicate key '" + key + "'");
    }
    return cfg;
}

FlatConfig FlatConfig::load(const std::string& path) {
    return parse(io::read_text_file(path));
}

bool FlatConfig::has(const std::string& key) const { return kv_.count(key) != 0; }

std::string FlatConfig::get_string(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw input_error("config: missing required key '" + key + "'");
    used_.insert(key);
    return it->second;
}

std::string FlatConfig::get_string(const std::string& key, const std::string& fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    return it->second;
}

namespace {
double parse_double_value(const std::string& key, const std::string& raw) {
    try {
        size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw input_error("config: key '" + key + "' has bad numeric value '" + raw + "'");
    }
}
}  // namespace

double FlatConfig::get_double(const std::string& key) {
    return parse_double_value(key, get_string(key));
}

double FlatConfig::get_double(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return get_double(key);
}

uint64_t FlatConfig::get_u64(const std::string& key, uint64_t fallback) {
    if (!has(key)) return fallback;
    std::string raw = get_string(key);
    try {
        size_t pos = 0;
        uint64_t v = std::stoull(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw input_error("config: key '" + key + "' has bad integer value '" + raw + "'");
    }
}

std::size_t FlatConfig::get_size(const std::string& key) {
    double v = get_double(key);
    if (v < 0 || v != std::floor(v))
        throw input_error("config: key '" + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

std::size_t FlatConfig::get_size(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    return get_size(key);
}

std::vector<double> FlatConfig::get_double_list(const std::string& key) {
    std::string raw = get_string(key);
    std::vector<double> out;
    std::istringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string t = trim(item);
        if (t.empty()) throw input_error("config: key '" + key + "' has an empty list item");
        out.push_back(parse_double_value(key, t));
    }
    if (out.empty()) throw input_error("config: key '" + key + "' is an empty list");
    return out;
}

std::vector<double> FlatConfig::get_double_list(const std::string& key,
                                                std::vector<double> fallback) {
    if (!has(key)) return fallback;
    return get_double_list(key);
}

std::vector<std::size_t> FlatConfig::get_size_list(const std::string& key) {
    std::vector<std::size_t> out;
    for (double v : get_double_list(key)) {
        if (v < 0 || v != std::floor(v))
            throw input_error("config: key '" + key + "' must list nonnegative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<std::size_t> FlatConfig::get_size_list(const std::string& key,
                                                   std::vector<std::size_t> fallback) {
    if (!has(key)) return fallback;
    return get_size_list(key);
}

void FlatConfig::finish() const {
    std::string unknown;
    for (const auto& [key, value] : kv_) {
        if (!used_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    }
    if (!unknown.empty()) throw input_error("config: unknown keys: " + unknown);
}

std::string FlatConfig::canonical_text() const {
    std::string out;
    for (const auto& [key, value] : kv_) out += key + " = " + value + "\n";
    return out;
}

KernelSpec kernel_from_config(FlatConfig& cfg) {
    std::string name = cfg.get_string("kernel", "maxwell");
    if (name == "maxwell") return KernelSpec::maxwell(cfg.get_double("nu", 0.5));
    if (name == "hard_potential")
        return KernelSpec::hard_potential(cfg.get_double("gamma"), cfg.get_double("nu"));
    if (name == "hard_sphere") return KernelSpec::hard_sphere();
    throw input_error("config: unknown kernel '" + name + "'");
}

InitialLaw law_from_config(FlatConfig& cfg) {
    InitialLaw law;
    std::string name = cfg.get_string("law", "maxwellian");
    if (name == "maxwellian") {
        law.kind = LawKind::maxwellian;
        law.sigma = cfg.get_double("sigma", 1.0);
        if (!(law.sigma > 0.0)) throw input_error("config: sigma must be positive");
    } else if (name == "uniform_ball") {
        law.kind = LawKind::uniform_ball;
        law.radius = cfg.get_double("radius", 1.0);
        if (!(law.radius > 0.0)) throw input_error("config: radius must be positive");
    } else if (name == "two_point") {
        law.kind = LawKind::two_point;
        law.magnitude = cfg.get_double("magnitude", 1.0);
    } else if (name == "file") {
        law.kind = LawKind::file;
        law.path = cfg.get_string("law_file");
    } else {
        throw input_error("config: unknown law '" + name + "'");
    }
    return law;
}

std::vector<std::string> emit_report(std::vector<ScanRow> rows, const std::string& out_dir,
                                     ReportFormat format, const std::string& config_echo,
                                     uint64_t seed, double wall_seconds,
                                     const std::vector<std::pair<std::string, std::string>>& extra) {
    if (rows.empty()) throw input_error("emit_report: no rows to write");
    std::filesystem::create_directories(out_dir);

    std::sort(rows.begin(), rows.end(), [](const ScanRow& a, const ScanRow& b) {
        if (a.statistic != b.statistic) return a.statistic < b.statistic;
        if (a.n != b.n) return a.n < b.n;
        if (a.k != b.k) return a.k < b.k;
        return a.t < b.t;
    });

    std::vector<std::string> written;
    std::string data_path;
    if (format == ReportFormat::csv) {
        std::ostringstream out;
        out << "statistic,N,K,t,value,stderr,replicas,seed\n";
        for (const ScanRow& r : rows)
            out << r.statistic << ',' << r.n << ',' << io::format_double(r.k) << ','
                << io::format_double(r.t) << ',' << io::format_double(r.value) << ','
                << io::format_double(r.stderr_) << ',' << r.replicas << ',' << r.seed << '\n';
        data_path = out_dir + "/results.csv";
        io::write_text_file(data_path, out.str());
    } else {
        std::ostringstream out;
        for (const ScanRow& r : rows)
            out << "statistic = " << r.statistic << "; N = " << r.n
                << "; K = " << io::format_double(r.k) << "; t = " << io::format_double(r.t)
                << "; value = " << io::format_double(r.value)
                << "; stderr = " << io::format_double(r.stderr_) << "; replicas = " << r.replicas
                << "; seed = " << r.seed << "\n";
        data_path = out_dir + "/results.txt";
        io::write_text_file(data_path, out.str());
    }
    written.push_back(data_path);

    nlohmann::json manifest;
    manifest["version"] = kVersionString;
    manifest["seed"] = seed;
    manifest["config"] = config_echo;
    manifest["config_hash"] =
        (std::ostringstream{} << std::hex << io::fnv1a64(config_echo)).str();
    manifest["rows"] = rows.size();
    manifest["wall_time_s"] = wall_seconds;
    for (const auto& [key, value] : extra) manifest[key] = value;
    std::string manifest_path = out_dir + "/manifest.json";
    io::write_text_file(manifest_path, manifest.dump(2) + "\n");
    written.push_back(manifest_path);
    return written;
}

namespace {

void validate_scan_common(const ScanConfig& cfg) {
    cfg.kernel.validate();
    if (cfg.replicas < 30)
        throw input_error("scan statistics require at least 30 replicas");
    if (!(cfg.horizon > 0.0)) throw input_error("scan horizon must be positive");
}

std::vector<double> snapshots_or_horizon(const ScanConfig& cfg) {
    if (cfg.snapshot_times.empty()) return {cfg.horizon};
    return cfg.snapshot_times;
}

}  // namespace

NScanResult run_n_scan(const ScanConfig& cfg, int threads) {
    validate_scan_common(cfg);
    if (cfg.n_list.empty()) throw input_error("n-scan: empty N list");
    std::size_t max_n = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());
    for (std::size_t n : cfg.n_list)
        if (n < 2) throw input_error("n-scan: every N must be >= 2");
    if (cfg.n_ref < 4 * max_n)
        throw input_error("n-scan: reference size must be >= 4 * max(N list)");
    if (!(cfg.k_fixed >= 1.0)) throw input_error("n-scan: cutoff K must be >= 1");
    bool want_particle = cfg.reference != ReferenceKind::gaussian;
    bool want_gaussian = cfg.reference != ReferenceKind::particle;
    if (want_gaussian && cfg.law.kind != LawKind::maxwellian)
        throw input_error(
            "n-scan: gaussian reference is only valid for the stationary maxwellian law");

    const std::vector<double> snaps = snapshots_or_horizon(cfg);
    NScanResult result;

    // Reference clouds per snapshot time, plus an independent copy for the
    // resolution self-check.
    std::vector<PointCloud> ref1(snaps.size()), ref2(snaps.size());
    if (want_particle) {
        SimConfig rc;
        rc.n = cfg.n_ref;
        rc.k_levels = {cfg.k_fixed};
        rc.kernel = cfg.kernel;
        rc.horizon = cfg.horizon;
        rc.seed = cfg.seed;
        rc.law = cfg.law;
        rc.snapshot_times = snaps;
        rc.replica = kReferenceReplica;
        Trajectory t1 = run(rc);
        rc.replica = kReferenceReplica + 1;
        Trajectory t2 = run(rc);
        for (std::size_t s = 0; s < snaps.size(); ++s) {
            ref1[s] = cloud_of(t1.snapshots[s]);
            ref2[s] = cloud_of(t2.snapshots[s]);
        }
    } else {
        for (std::size_t s = 0; s < snaps.size(); ++s) {
            ref1[s] = {sample_initial(cfg.n_ref, cfg.law, cfg.seed, kGaussStreamBase + 2 * s).v};
            ref2[s] = {sample_initial(cfg.n_ref, cfg.law, cfg.seed, kGaussStreamBase + 2 * s + 1).v};
        }
    }

    std::vector<PointCloud> gauss_ref(snaps.size());
    if (want_gaussian && want_particle) {
        for (std::size_t s = 0; s < snaps.size(); ++s)
            gauss_ref[s] = {
                sample_initial(cfg.n_ref, cfg.law, cfg.seed, kGaussStreamBase + 2 * s).v};
    } else if (want_gaussian) {
        gauss_ref = ref1;
    }

    // Resolution self-check on subsampled references (subsampling only raises
    // the distance, so an over-eager flag is the safe direction).
    const std::size_t m_check = std::min<std::size_t>(cfg.n_ref, 4096);
    result.self_check_points = m_check;
    for (std::size_t s = 0; s < snaps.size(); ++s) {
        double d = w2sq_exact(head_of(ref1[s], m_check), head_of(ref2[s], m_check)).cost_sq;
        result.ref_self_dist = std::max(result.ref_self_dist, d);
    }

    double min_scan_statistic = std::numeric_limits<double>::infinity();
    for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
        const std::size_t n = cfg.n_list[ni];
        std::vector<std::vector<double>> to_ref(snaps.size()), to_gauss(snaps.size()),
            energy(snaps.size());
        for (auto& v : to_ref) v.assign(cfg.replicas, 0.0);
        for (auto& v : to_gauss) v.assign(cfg.replicas, 0.0);
        for (auto& v : energy) v.assign(cfg.replicas, 0.0);

        parallel_for(cfg.replicas, threads, [&](std::size_t r) {
            SimConfig sc;
            sc.n = n;
            sc.k_levels = {cfg.k_fixed};
            sc.kernel = cfg.kernel;
            sc.horizon = cfg.horizon;
            sc.seed = cfg.seed;
            sc.law = cfg.law;
            sc.snapshot_times = snaps;
            sc.replica = (ni + 1) * kScanReplicaBlock + r;
            Trajectory traj = run(sc);
            for (std::size_t s = 0; s < snaps.size(); ++s) {
                PointCloud cloud = cloud_of(traj.snapshots[s]);
                if (want_particle) to_ref[s][r] = w2sq_uneven(cloud, ref1[s]).cost_sq;
                if (want_gaussian) to_gauss[s][r] = w2sq_uneven(cloud, gauss_ref[s]).cost_sq;
                energy[s][r] = mean_kinetic_energy(traj.snapshots[s]);
            }
        });

        for (std::size_t s = 0; s < snaps.size(); ++s) {
            if (want_particle) {
                MeanSE m = mean_se(to_ref[s]);
                min_scan_statistic = std::min(min_scan_statistic, m.mean);
                result.rows.push_back({"w2sq_to_ref", n, cfg.k_fixed, snaps[s], m.mean, m.se,
                                       cfg.replicas, cfg.seed});
            }
            if (want_gaussian) {
                MeanSE m = mean_se(to_gauss[s]);
                min_scan_statistic = std::min(min_scan_statistic, m.mean);
                result.rows.push_back({"w2sq_to_gauss", n, cfg.k_fixed, snaps[s], m.mean, m.se,
                                       cfg.replicas, cfg.seed});
            }
            MeanSE e = mean_se(energy[s]);
            result.rows.push_back(
                {"energy_mean", n, cfg.k_fixed, snaps[s], e.mean, e.se, cfg.replicas, cfg.seed});
        }
    }

    result.reliable = 4.0 * result.ref_self_dist <= min_scan_statistic;
    return result;
}

std::vector<ScanRow> run_k_scan(const ScanConfig& cfg, int threads) {
    validate_scan_common(cfg);
    if (cfg.n_fixed < 2) throw input_error("k-scan: N must be >= 2");
    if (cfg.k_levels.size() < 2) throw input_error("k-scan: need at least two cutoff levels");

    const std::vector<double> snaps = snapshots_or_horizon(cfg);
    const std::size_t levels = cfg.k_levels.size();

    std::vector<std::vector<std::vector<double>>> gaps(
        levels - 1, std::vector<std::vector<double>>(snaps.size(),
                                                     std::vector<double>(cfg.replicas, 0.0)));
    std::vector<std::vector<double>> energy(snaps.size(),
                                            std::vector<double>(cfg.replicas, 0.0));

    parallel_for(cfg.replicas, threads, [&](std::size_t r) {
        SimConfig sc;
        sc.n = cfg.n_fixed;
        sc.k_levels = cfg.k_levels;
        sc.kernel = cfg.kernel;
        sc.horizon = cfg.horizon;
        sc.seed = cfg.seed;
        sc.law = cfg.law;
        sc.snapshot_times = snaps;
        sc.replica = r;
        std::vector<Trajectory> trajs = run_coupled(sc);
        for (std::size_t s = 0; s < snaps.size(); ++s) {
            for (std::size_t l = 0; l + 1 < levels; ++l)
                gaps[l][s][r] =
                    mean_sq_displacement(trajs[l].snapshots[s], trajs.back().snapshots[s]);
            energy[s][r] = mean_kinetic_energy(trajs.back().snapshots[s]);
        }
    });

    std::vector<ScanRow> rows;
    for (std::size_t l = 0; l + 1 < levels; ++l) {
        for (std::size_t s = 0; s < snaps.size(); ++s) {
            MeanSE m = mean_se(gaps[l][s]);
            rows.push_back({"coupled_gap", cfg.n_fixed, cfg.k_levels[l], snaps[s], m.mean, m.se,
                            cfg.replicas, cfg.seed});
        }
    }
    for (std::size_t s = 0; s < snaps.size(); ++s) {
        MeanSE e = mean_se(energy[s]);
        rows.push_back({"energy_mean", cfg.n_fixed, cfg.k_levels.back(), snaps[s], e.mean, e.se,
                        cfg.replicas, cfg.seed});
    }
    return rows;
}

VerifyConfig verify_config_from(FlatConfig& cfg) {
    VerifyConfig v;
    v.inequality_samples = cfg.get_size("inequality_samples", v.inequality_samples);
    v.tail_samples = cfg.get_size("tail_samples", v.tail_samples);
    v.piece_samples = cfg.get_size("piece_samples", v.piece_samples);
    v.geometry_samples = cfg.get_size("geometry_samples", v.geometry_samples);
    v.sim_replicas = cfg.get_size("sim_replicas", v.sim_replicas);
    v.transport_instances = cfg.get_size("transport_instances", v.transport_instances);
    v.k_list = cfg.get_double_list("k_list", v.k_list);
    v.seed = cfg.get_u64("seed", v.seed);
    return v;
}

std::string VerifyReport::to_json() const {
    nlohmann::json j;
    j["version"] = kVersionString;
    j["pass"] = pass;
    j["checks"] = nlohmann::json::array();
    for (const CheckResult& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"pass", c.pass},
                               {"worst", c.worst},
                               {"details", c.details}});
    }
    return j.dump(2) + "\n";
}

}  // namespace nanboltz
