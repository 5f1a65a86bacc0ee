#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nanboltz/sim.hpp"
#include "nanboltz/transport.hpp"

namespace nanboltz {

inline constexpr const char* kVersionString = "nanboltz 0.1.0";

/// Flat `key = value` configuration text. '#' starts a comment, blank lines
/// are skipped, no nesting. Every key must be consumed: finish() rejects
/// unknown keys so typos fail fast.
class FlatConfig {
public:
    static FlatConfig parse(const std::string& text);
    static FlatConfig load(const std::string& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key);
    std::string get_string(const std::string& key, const std::string& fallback);
    double get_double(const std::string& key);
    double get_double(const std::string& key, double fallback);
    uint64_t get_u64(const std::string& key, uint64_t fallback);
    std::size_t get_size(const std::string& key);
    std::size_t get_size(const std::string& key, std::size_t fallback);
    std::vector<double> get_double_list(const std::string& key);
    std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback);
    std::vector<std::size_t> get_size_list(const std::string& key);
    std::vector<std::size_t> get_size_list(const std::string& key,
                                           std::vector<std::size_t> fallback);

    /// Throws input_error naming any key that was never consumed.
    void finish() const;

    /// Sorted canonical `key = value` lines; hashed into the run manifest.
    std::string canonical_text() const;

private:
    std::map<std::string, std::string> kv_;
    mutable std::set<std::string> used_;
};

/// Kernel + initial-law keys shared by every subcommand config.
KernelSpec kernel_from_config(FlatConfig& cfg);
InitialLaw law_from_config(FlatConfig& cfg);

struct ScanRow {
    std::string statistic;
    std::size_t n = 0;
    double k = 0.0;
    double t = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t replicas = 0;
    uint64_t seed = 0;
};

enum class ReportFormat { csv, structured_text };

/// Writes results.{csv,txt} (rows sorted by statistic, N, K, t) plus
/// manifest.json with the config echo, seed, version string and wall time.
/// Extra key/value pairs land in the manifest. Returns the paths written.
std::vector<std::string> emit_report(
    std::vector<ScanRow> rows, const std::string& out_dir, ReportFormat format,
    const std::string& config_echo, uint64_t seed, double wall_seconds,
    const std::vector<std::pair<std::string, std::string>>& extra = {});

enum class ReferenceKind { particle, gaussian, both };

struct ScanConfig {
    KernelSpec kernel;
    InitialLaw law;
    std::vector<std::size_t> n_list;  // n-scan
    std::size_t n_fixed = 0;          // k-scan
    std::vector<double> k_levels;     // k-scan levels (top drives the clock)
    double k_fixed = 0.0;             // n-scan cutoff
    double horizon = 1.0;
    std::size_t replicas = 30;
    std::size_t n_ref = 0;
    std::vector<double> snapshot_times;
    uint64_t seed = 0;
    ReferenceKind reference = ReferenceKind::particle;
};

struct NScanResult {
    std::vector<ScanRow> rows;
    bool reliable = true;         // reference resolves the smallest statistic (factor 4)
    double ref_self_dist = 0.0;   // W2^2 between two independent references
    std::size_t self_check_points = 0;
};

/// For each N: `replicas` runs to the horizon at the fixed cutoff, squared W2
/// against a high-resolution reference cloud per snapshot time. The reference
/// is an independent particle run with n_ref particles (and/or fresh Gaussian
/// samples when the initial law is the stationary Maxwellian).
NScanResult run_n_scan(const ScanConfig& cfg, int threads = 1);

/// Common-random-number cutoff scan: mean squared velocity gap between each
/// level and the top level, per snapshot time.
std::vector<ScanRow> run_k_scan(const ScanConfig& cfg, int threads = 1);

struct CheckResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;
    std::string details;
};

struct VerifyConfig {
    std::size_t inequality_samples = 2000;
    std::size_t tail_samples = 400;
    std::size_t piece_samples = 60;
    std::size_t geometry_samples = 20000;
    std::size_t sim_replicas = 60;
    std::size_t transport_instances = 40;
    std::vector<double> k_list = {1.0, 8.0};
    uint64_t seed = 20240901;
    int threads = 1;
};

VerifyConfig verify_config_from(FlatConfig& cfg);

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool pass = true;

    std::string to_json() const;
};

/// Runs every analytic-certification check and the simulator invariants at
/// the configured sample counts; any failure flips the aggregate status.
VerifyReport run_invariant_suite(const VerifyConfig& cfg);

}  // namespace nanboltz
