// File formats, the end-to-end driver, and the installed CLI's exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ricciflow/driver.hpp"
#include "ricciflow/io.hpp"

using namespace ricciflow;
namespace fs = std::filesystem;

namespace {

const std::string data_dir = RICCIFLOW_DATA_DIR;
const std::string cli_path = RICCIFLOW_CLI_PATH;

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("ricciflow_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("edge lists parse tokens, comments, and default weights") {
    std::istringstream in("# header\n"
                          "a b 2.5\n"
                          "\n"
                          "b c\n"
                          "c a 1.5\n");
    GraphSource src = read_edge_list(in, "mem");
    CHECK(src.graph.vertex_count() == 3);
    CHECK(src.graph.edge_count() == 3);
    CHECK(src.tokens == std::vector<std::string>{"a", "b", "c"});
    CHECK(src.graph.weight(src.graph.edge_between(1, 2)) == 1.0);
    CHECK(src.graph.weight(src.graph.edge_between(0, 1)) == 2.5);
}

TEST_CASE("edge-list parse errors carry line numbers") {
    std::istringstream bad_weight("a b x\n");
    CHECK_THROWS_WITH_AS(read_edge_list(bad_weight, "f"), "f:1: bad weight 'x'", parse_error);
    std::istringstream one_token("a\n");
    CHECK_THROWS_AS(read_edge_list(one_token, "f"), parse_error);
    std::istringstream trailing("a b 1.0 junk\n");
    CHECK_THROWS_AS(read_edge_list(trailing, "f"), parse_error);
    std::istringstream dup("a b\nb a\n");
    CHECK_THROWS_AS(read_edge_list(dup, "f"), duplicate_edge_error);
    std::istringstream disc("a b\nc d\n");
    CHECK_THROWS_AS(read_edge_list(disc, "f"), disconnected_error);
    std::istringstream empty("# only comments\n\n");
    CHECK_THROWS_AS(read_edge_list(empty, "f"), input_error);
}

TEST_CASE("label files map onto the edge list's token space") {
    std::istringstream edges("a b\nb c\n");
    GraphSource src = read_edge_list(edges, "mem");
    std::istringstream labels("a red\nb red\nc blue\n");
    const Partition p = read_labels(labels, "mem", src);
    CHECK(p.labels == std::vector<int>{0, 0, 1});

    std::istringstream unknown("a red\nb red\nz blue\n");
    CHECK_THROWS_AS(read_labels(unknown, "mem", src), vertex_set_mismatch_error);
    std::istringstream missing("a red\nb red\n");
    CHECK_THROWS_AS(read_labels(missing, "mem", src), vertex_set_mismatch_error);
}

TEST_CASE("run_pipeline writes the full artifact set") {
    const fs::path out = temp_dir("pipeline");
    RunManifest m;
    m.input_path = data_dir + "/two_triangles.edges";
    m.labels_path = data_dir + "/two_triangles.labels";
    m.variant = FlowVariant::qn1_evol;
    m.iterations = 30;
    m.trace = true;
    m.out_dir = out.string();
    const RunOutcome outcome = run_pipeline(m);

    CHECK(fs::exists(out / "run.json"));
    CHECK(fs::exists(out / "sweep.csv"));
    CHECK(fs::exists(out / "final_weights.csv"));
    CHECK(fs::exists(out / "trace.csv"));
    REQUIRE(outcome.best_by_ari.has_value());
    CHECK(*outcome.best_by_ari->ari == doctest::Approx(1.0));

    std::ifstream jf(out / "run.json");
    nlohmann::json j;
    jf >> j;
    CHECK(j["config"]["variant"] == "qn1_evol");
    CHECK(j["config"]["alpha"] == 0.5);
    CHECK(j["config"]["step"] == 0.01);
    CHECK(j["config"]["iters"] == 30);
    CHECK(j["config"]["sweep_resolution"] == 200);
    CHECK(j.contains("wall_ms"));
    CHECK(j.contains("clamp_events"));
    CHECK(j["best"].contains("by_modularity"));
    CHECK(j["best"].contains("by_ari"));
    CHECK(j["best"].contains("by_nmi"));

    std::ifstream sf(out / "sweep.csv");
    std::string header;
    std::getline(sf, header);
    CHECK(header == "cutoff,k,modularity,ari,nmi");
    std::size_t rows = 0;
    for (std::string line; std::getline(sf, line);) ++rows;
    CHECK(rows == 200);
}

TEST_CASE("repeated runs produce byte-identical sweep.csv") {
    const fs::path out1 = temp_dir("det1");
    const fs::path out2 = temp_dir("det2");
    for (const fs::path& out : {out1, out2}) {
        RunManifest m;
        m.input_path = data_dir + "/karate.edges";
        m.labels_path = data_dir + "/karate.labels";
        m.variant = FlowVariant::one_evol;
        m.iterations = 10;
        m.out_dir = out.string();
        run_pipeline(m);
    }
    std::ifstream a(out1 / "sweep.csv"), b(out2 / "sweep.csv");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().size() > 1000);
}

TEST_CASE("numbers are rendered with six significant digits") {
    CHECK(format_number(0.123456789) == "0.123457");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(1234567.0) == "1.23457e+06");
}

TEST_CASE("cli: run exits 0 and honors --out") {
    const fs::path out = temp_dir("cli_run");
    CHECK(run_cli("run --input " + data_dir + "/two_triangles.edges --labels " + data_dir +
                  "/two_triangles.labels --variant qn1_evol --iters 30 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "run.json"));
    CHECK_FALSE(fs::exists(out / "trace.csv")); // trace is opt-in
}

TEST_CASE("cli: missing input exits 2 without partial outputs") {
    const fs::path out = temp_dir("cli_missing");
    CHECK(run_cli("run --input /nonexistent.edges --out " + out.string()) == 2);
    CHECK_FALSE(fs::exists(out / "run.json"));
    CHECK_FALSE(fs::exists(out / "sweep.csv"));
}

TEST_CASE("cli: malformed edge list exits 2") {
    const fs::path out = temp_dir("cli_bad");
    std::ofstream bad(out / "bad.edges");
    bad << "a b\nc d -1\n";
    bad.close();
    CHECK(run_cli("run --input " + (out / "bad.edges").string() + " --out " + out.string()) == 2);
}

TEST_CASE("cli: oracle-check passes at the default step") {
    CHECK(run_cli("oracle-check") == 0);
}

TEST_CASE("cli: alpha = 1 requires the explicit override") {
    const fs::path out = temp_dir("cli_alpha1");
    const std::string base = "run --input " + data_dir + "/two_triangles.edges --iters 2 --out " +
                             out.string() + " --alpha 1.0";
    CHECK(run_cli(base) == 2);
    CHECK(run_cli(base + " --allow-alpha-one") == 0);
}

TEST_CASE("cli: metrics scores identical files as perfect") {
    const fs::path out = temp_dir("cli_metrics");
    const std::string pred = (out / "pred.labels").string();
    {
        std::ofstream f(pred);
        f << "a 0\nb 0\nc 1\nd 1\n";
    }
    const std::string cmd = cli_path + " metrics --pred " + pred + " --truth " + pred + " > " +
                            (out / "m.json").string() + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::ifstream jf(out / "m.json");
    nlohmann::json j;
    jf >> j;
    CHECK(j["ari"] == doctest::Approx(1.0));
    CHECK(j["nmi"] == doctest::Approx(1.0));
    CHECK_FALSE(j.contains("modularity"));
}

TEST_CASE("cli: metrics with an edge list adds modularity") {
    const fs::path out = temp_dir("cli_metrics2");
    const std::string cmd = cli_path + " metrics --pred " + data_dir +
                            "/karate.labels --truth " + data_dir + "/karate.labels --input " +
                            data_dir + "/karate.edges > " + (out / "m.json").string() +
                            " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::ifstream jf(out / "m.json");
    nlohmann::json j;
    jf >> j;
    CHECK(j["ari"] == doctest::Approx(1.0));
    CHECK(j["modularity"] == doctest::Approx(0.3582).epsilon(0.02));
}

TEST_CASE("cli: metrics on mismatched vertex sets exits 2") {
    const fs::path out = temp_dir("cli_metrics3");
    {
        std::ofstream f(out / "a.labels");
        f << "a 0\nb 1\n";
    }
    {
        std::ofstream f(out / "b.labels");
        f << "a 0\nz 1\n";
    }
    CHECK(run_cli("metrics --pred " + (out / "a.labels").string() + " --truth " +
                  (out / "b.labels").string()) == 2);
}
