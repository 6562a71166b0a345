#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include "mlogs/json_codec.hpp"
#include "mlogs/las_io.hpp"
#include "support.hpp"

using namespace mlogs;
using mlogs::test::fixture;
using mlogs::test::TempDir;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(MLOGS_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("stats").code == 1);
    CHECK(run("--help").code == 0);
}

TEST_CASE("data errors exit 2") {
    CHECK(run("stats " + q(fixture("invalid/version3.las")) + " -c GR").code == 2);
    CHECK(run("stats " + q(fixture("minimal.las")) + " -c NOPE").code == 2);
    CHECK(run("stats /no/such/file.las -c GR").code == 2);
}

TEST_CASE("convert writes the merged CSV") {
    TempDir dir;
    const auto out = dir.path() / "m.csv";
    const auto r = run("convert " + q(fixture("minimal.las")) + " " + q(fixture("outlier_spike.las")) + " -o " + q(out));
    REQUIRE(r.code == 0);
    std::vector<WellDataset> sets{las::to_dataset(las::read_las_file(fixture("minimal.las"))),
                                  las::to_dataset(las::read_las_file(fixture("outlier_spike.las")))};
    CHECK(slurp(out) == las::merge_to_csv(sets, curve_union(sets)).csv);

    const auto stdout_run = run("convert " + q(fixture("minimal.las")) + " --curves GR");
    CHECK(stdout_run.out == "WELL,DEPT,GR\nMIN-1,1000,45.25\nMIN-1,1000.5,\nMIN-1,1001,61.5\n");
}

TEST_CASE("stats prints JSON") {
    const auto r = run("stats " + q(fixture("outlier_spike.las")) + " -c GR");
    REQUIRE(r.code == 0);
    const auto j = codec::json::parse(r.out);
    CHECK(j["count"] == 10);
    CHECK(j["max"] == 100.0);
}

TEST_CASE("clean masks the spike") {
    TempDir dir;
    const auto out = dir.path() / "c.las";
    const auto r = run("clean " + q(fixture("outlier_spike.las")) + " -c GR -m iqr -o " + q(out));
    REQUIRE(r.code == 0);
    const auto j = codec::json::parse(r.out);
    CHECK(j["flagged_rows"] == codec::json::array({9}));
    CHECK(j["cells"] == 1);
    const auto ds = las::to_dataset(las::read_las_file(out));
    CHECK(ds.curve("GR").is_missing(9));
    CHECK_FALSE(ds.curve("RHOB").is_missing(9));

    const auto dropped = run("clean " + q(fixture("outlier_spike.las")) + " -c GR --mode drop -o " + q(out));
    REQUIRE(dropped.code == 0);
    CHECK(codec::json::parse(dropped.out)["rows_out"] == 9);
}

TEST_CASE("train then predict") {
    TempDir dir;
    const auto csv = dir.path() / "t.csv";
    const auto model = dir.path() / "m.json";
    const auto out = dir.path() / "p.las";
    REQUIRE(run("convert " + q(fixture("outlier_spike.las")) + " -o " + q(csv)).code == 0);
    const auto t = run("train " + q(csv) + " -f RHOB -t GR --kind knn_regress --k 1 -o " + q(model));
    REQUIRE(t.code == 0);
    CHECK(codec::json::parse(t.out)["train"]["rmse"] == 0.0);
    const auto p = run("predict --model " + q(model) + " " + q(fixture("outlier_spike.las")) + " -o " + q(out));
    REQUIRE(p.code == 0);
    const auto ds = las::to_dataset(las::read_las_file(out));
    CHECK(ds.curve("GR_PRED").present_count() == 10);
    CHECK(run("train " + q(csv) + " -f NOPE -t GR -o " + q(model)).code == 2);
}
