#include <doctest.h>

#include <filesystem>

#include "nanboltz/errors.hpp"
#include "nanboltz/harness.hpp"
#include "nanboltz/io.hpp"

using namespace nanboltz;

TEST_SUITE_BEGIN("harness");

namespace {
std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("nanboltz_harness_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}
}  // namespace

TEST_CASE("flat config parsing") {
    FlatConfig cfg = FlatConfig::parse("# comment\n a = 1 \n\nlist = 1, 2,3\nname = x\n");
    CHECK(cfg.get_double("a") == 1.0);
    auto list = cfg.get_double_list("list");
    REQUIRE(list.size() == 3);
    CHECK(list[2] == 3.0);
    CHECK(cfg.get_string("name") == "x");
    CHECK(cfg.get_size("missing", 7) == 7);
    cfg.finish();  // all keys consumed

    CHECK_THROWS_AS(FlatConfig::parse("a = 1\na = 2\n"), input_error);
    CHECK_THROWS_AS(FlatConfig::parse("just a line\n"), input_error);

    FlatConfig bad = FlatConfig::parse("known = 1\nmystery = 2\n");
    bad.get_double("known");
    CHECK_THROWS_AS(bad.finish(), input_error);

    FlatConfig nums = FlatConfig::parse("x = abc\n");
    CHECK_THROWS_AS(nums.get_double("x"), input_error);
}

TEST_CASE("kernel and law construction from config") {
    FlatConfig a = FlatConfig::parse("kernel = hard_potential\ngamma = 0.5\nnu = 0.5\n");
    KernelSpec ks = kernel_from_config(a);
    CHECK(ks.family == KernelFamily::hard_potential);
    a.finish();

    FlatConfig b = FlatConfig::parse("kernel = marshmallow\n");
    CHECK_THROWS_AS(kernel_from_config(b), input_error);

    FlatConfig c = FlatConfig::parse("law = two_point\nmagnitude = 2\n");
    InitialLaw law = law_from_config(c);
    CHECK(law.kind == LawKind::two_point);
    CHECK(law.magnitude == 2.0);
    c.finish();

    FlatConfig d = FlatConfig::parse("law = nope\n");
    CHECK_THROWS_AS(law_from_config(d), input_error);
}

TEST_CASE("report emission: format, ordering, determinism") {
    std::vector<ScanRow> rows{
        {"w2sq_to_ref", 128, 8.0, 1.0, 0.25, 0.01, 30, 42},
        {"coupled_gap", 64, 2.0, 1.0, 0.5, 0.02, 30, 42},
        {"w2sq_to_ref", 64, 8.0, 1.0, 0.5, 0.02, 30, 42},
        {"coupled_gap", 64, 2.0, 0.5, 0.7, 0.02, 30, 42},
    };
    std::string dir = temp_dir("emit");
    auto files = emit_report(rows, dir, ReportFormat::csv, "a = 1\n", 42, 0.0);
    REQUIRE(files.size() == 2);

    std::string csv = io::read_text_file(files[0]);
    std::string expected =
        "statistic,N,K,t,value,stderr,replicas,seed\n"
        "coupled_gap,64,2,0.5,0.69999999999999996,0.02,30,42\n"
        "coupled_gap,64,2,1,0.5,0.02,30,42\n"
        "w2sq_to_ref,64,8,1,0.5,0.02,30,42\n"
        "w2sq_to_ref,128,8,1,0.25,0.01,30,42\n";
    CHECK(csv == expected);

    // Re-emitting produces byte-identical output.
    std::string dir2 = temp_dir("emit2");
    auto files2 = emit_report(rows, dir2, ReportFormat::csv, "a = 1\n", 42, 0.0);
    CHECK(io::read_text_file(files2[0]) == csv);

    auto files3 = emit_report(rows, temp_dir("emit3"), ReportFormat::structured_text,
                              "a = 1\n", 42, 0.0);
    std::string txt = io::read_text_file(files3[0]);
    CHECK(txt.find("statistic = coupled_gap; N = 64") != std::string::npos);

    CHECK_THROWS_AS(emit_report({}, dir, ReportFormat::csv, "", 0, 0.0), input_error);
}

TEST_CASE("k-scan: equal levels give a zero gap, rows are complete") {
    ScanConfig cfg;
    cfg.kernel = KernelSpec::maxwell(0.5);
    cfg.n_fixed = 8;
    cfg.k_levels = {2.0, 2.0, 4.0};
    cfg.horizon = 0.3;
    cfg.replicas = 30;
    cfg.seed = 7;
    auto rows = run_k_scan(cfg, 2);

    // Levels: gaps for k = 2 (twice) vs top k = 4, plus one energy row.
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].statistic == "coupled_gap");
    CHECK(rows[0].value >= 0.0);
    // The two identical lower levels have identical gaps to the top.
    CHECK(rows[0].value == rows[1].value);
    CHECK(rows[2].statistic == "energy_mean");
    CHECK(rows[2].value > 0.0);

    ScanConfig bad = cfg;
    bad.replicas = 10;
    CHECK_THROWS_AS(run_k_scan(bad, 1), input_error);
}

TEST_CASE("n-scan: statistics, references, determinism across thread counts") {
    ScanConfig cfg;
    cfg.kernel = KernelSpec::maxwell(0.5);
    cfg.law = InitialLaw{};  // stationary maxwellian
    cfg.n_list = {8, 16};
    cfg.k_fixed = 2.0;
    cfg.horizon = 0.3;
    cfg.replicas = 30;
    cfg.n_ref = 64;
    cfg.seed = 11;
    cfg.reference = ReferenceKind::both;

    NScanResult r1 = run_n_scan(cfg, 1);
    NScanResult r2 = run_n_scan(cfg, 2);
    REQUIRE(r1.rows.size() == r2.rows.size());
    for (size_t i = 0; i < r1.rows.size(); ++i) {
        CHECK(r1.rows[i].statistic == r2.rows[i].statistic);
        CHECK(r1.rows[i].value == r2.rows[i].value);  // bitwise: thread count is speed only
        CHECK(r1.rows[i].stderr_ == r2.rows[i].stderr_);
    }
    CHECK(r1.ref_self_dist == r2.ref_self_dist);

    size_t n_ref_rows = 0, n_gauss_rows = 0, n_energy_rows = 0;
    for (const ScanRow& row : r1.rows) {
        if (row.statistic == "w2sq_to_ref") ++n_ref_rows;
        if (row.statistic == "w2sq_to_gauss") ++n_gauss_rows;
        if (row.statistic == "energy_mean") ++n_energy_rows;
        if (row.statistic != "energy_mean") CHECK(row.value >= 0.0);
    }
    CHECK(n_ref_rows == 2);
    CHECK(n_gauss_rows == 2);
    CHECK(n_energy_rows == 2);

    ScanConfig bad = cfg;
    bad.n_ref = 32;  // below 4 * max(N)
    CHECK_THROWS_AS(run_n_scan(bad, 1), input_error);

    ScanConfig bad2 = cfg;
    bad2.law.kind = LawKind::two_point;
    bad2.reference = ReferenceKind::gaussian;
    CHECK_THROWS_AS(run_n_scan(bad2, 1), input_error);
}

TEST_CASE("verify config and json output") {
    FlatConfig cfg = FlatConfig::parse("inequality_samples = 40\nk_list = 1,4\nseed = 5\n");
    VerifyConfig vc = verify_config_from(cfg);
    cfg.finish();
    CHECK(vc.inequality_samples == 40);
    REQUIRE(vc.k_list.size() == 2);

    VerifyReport rep;
    rep.checks.push_back({"demo/check", true, 0.5, "fine"});
    std::string json = rep.to_json();
    CHECK(json.find("\"demo/check\"") != std::string::npos);
    CHECK(json.find("\"pass\": true") != std::string::npos);
}

TEST_SUITE_END();
