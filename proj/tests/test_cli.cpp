#include <doctest.h>

#include <filesystem>

#include "obench/cli.hpp"
#include "obench/grid_io.hpp"
#include "obench/report.hpp"
#include "support.hpp"

using namespace obench;
namespace fs = std::filesystem;

namespace {

int run(const std::vector<std::string>& args) { return cli_dispatch(args); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"pipeline"}) == 2);
    CHECK(run({"frobnicate"}) == 2);
    CHECK(run({"eval", "--ref", "a.obg"}) == 2);
    CHECK(run({"eval", "--ref", "a.obg", "--study", "b.obg", "--out", "-", "--format", "html"}) == 2);
}

TEST_CASE("missing files exit with 1") {
    CHECK(run({"derive", "--var", "u", "--in", "/nonexistent/x.obg", "--out", "/tmp/y.obg"}) == 1);
}

TEST_CASE("synth, eval and merge") {
    const auto dir = testing::temp_dir("cli_eval");
    const auto truth = (dir / "truth.obg").string();
    REQUIRE(run({"synth", "--out", truth, "--nt", "8", "--ny", "32", "--nx", "32", "--seed", "2"}) == 0);
    const auto json_out = (dir / "r.json").string();
    REQUIRE(run({"eval", "--ref", truth, "--study", truth, "--out", json_out, "--format", "json", "--algorithm", "identity"}) == 0);
    const auto reps = reports_from_json(read_file(json_out));
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].algorithm == "identity");
    CHECK(*reps[0].nrmse_mean == doctest::Approx(1.0));
    const auto md = (dir / "r.md").string();
    REQUIRE(run({"eval", "--ref", truth, "--study", truth, "--out", md}) == 0);
    CHECK(read_file(md).find("1.00 ± 0.00") != std::string::npos);
    const auto merged = (dir / "all.csv").string();
    REQUIRE(run({"report", "merge", json_out, json_out, "--out", merged, "--format", "csv"}) == 0);
    CHECK(read_file(merged).find("identity") != std::string::npos);
}

TEST_CASE("derive writes the requested variable") {
    const auto dir = testing::temp_dir("cli_derive");
    const auto in = (dir / "ssh.obg").string(), out = (dir / "vort.obg").string();
    REQUIRE(run({"synth", "--out", in, "--nt", "2", "--ny", "16", "--nx", "16"}) == 0);
    REQUIRE(run({"derive", "--var", "vort", "--in", in, "--out", out}) == 0);
    CHECK(read_grid(out).var() == "vort");
    CHECK(run({"derive", "--var", "div", "--in", in, "--out", out}) == 1);
}

TEST_CASE("patch extract and reconstruct round trip") {
    const auto dir = testing::temp_dir("cli_patch");
    const auto in = (dir / "ssh.obg").string();
    REQUIRE(run({"synth", "--out", in, "--nt", "4", "--ny", "12", "--nx", "12"}) == 0);
    const std::string spec = R"({"dims": {"time": {"patch": 2, "stride": 1}, "lat": {"patch": 4, "stride": 2}, "lon": {"patch": 4, "stride": 2}}})";
    REQUIRE(run({"patch", "info", "--in", in, "--spec", spec}) == 0);
    REQUIRE(run({"patch", "extract", "--in", in, "--spec", spec, "--out-dir", (dir / "p").string()}) == 0);
    CHECK(fs::exists(dir / "p" / "patch_000000.obg"));
    const auto out = (dir / "back.obg").string();
    REQUIRE(run({"patch", "reconstruct", "--like", in, "--spec", spec, "--patches", (dir / "p").string(), "--out", out}) == 0);
    const auto a = read_grid(in), b = read_grid(out);
    REQUIRE(a.data().size() == b.data().size());
    for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(b.data()[i] == doctest::Approx(a.data()[i]).epsilon(1e-12));
}

TEST_CASE("simulate then run the along-track preset") {
    const auto dir = testing::temp_dir("cli_ose");
    const auto truth = (dir / "truth.obg").string(), obs = (dir / "obs.csv").string();
    REQUIRE(run({"synth", "--out", truth, "--nt", "10", "--ny", "32", "--nx", "32"}) == 0);
    REQUIRE(run({"simulate", "--ref", truth, "--pattern", "nadir-4sat", "--noise-std", "0.01", "--seed", "4", "--out", obs}) == 0);
    CHECK(read_file(obs).rfind("time,lat,lon,ssh\n", 0) == 0);
    CHECK(run({"simulate", "--ref", truth, "--pattern", "nope", "--out", obs}) == 1);
}

TEST_CASE("the OSSE preset runs end to end") {
    const auto dir = testing::temp_dir("cli_pipeline");
    const auto truth = (dir / "truth.obg").string(), out = (dir / "report.json").string();
    REQUIRE(run({"synth", "--out", truth, "--nt", "30", "--ny", "40", "--nx", "40", "--seed", "6"}) == 0);
    const auto preset = (fs::path(OBENCH_SOURCE_DIR) / "presets" / "gulfstream-osse.yaml").string();
    REQUIRE(run({"pipeline", "--config", preset, "--var", "study=" + truth, "--var", "truth=" + truth, "--var", "out=" + out}) == 0);
    const auto reps = reports_from_json(read_file(out));
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].lambda_r_km);
    CHECK(fs::exists(out + ".manifest.json"));
    CHECK(run({"pipeline", "--config", (dir / "missing.yaml").string()}) == 1);
}

}
