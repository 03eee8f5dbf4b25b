#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "permean/cli.hpp"
#include "permean/errors.hpp"
#include "permean/theta_binom.hpp"

using namespace permean;
using namespace permean::cli;

namespace {

struct RunOutput {
    std::string text;
    int exit_code = -1;
};

RunOutput run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd =
        env + (env.empty() ? "" : " ") + PERMEAN_CLI_PATH + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunOutput out;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.text.append(buf, got);
    const int status = pclose(pipe);
    out.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

std::string strip_wall_clock(const std::string& json_text) {
    auto j = Json::parse(json_text);
    j.erase("wall_clock_ms");
    return j.dump();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

} // namespace

TEST_CASE("spec documents resolve families to explicit arrays") {
    const auto doc = Json::parse(
        R"({"n": 4, "theta": 1.0, "fhat": {"family": "zero_on", "lengths": [1]}})");
    const auto resolved = resolve_spec_document(doc, std::nullopt, std::nullopt, true);
    CHECK(resolved["n"] == 4);
    CHECK(resolved["fhat"].size() == 4);
    CHECK(resolved["fhat"][0][0] == 0.0);
    CHECK(resolved["fhat"][1][0] == 1.0);
    CHECK(resolved["family"]["family"] == "zero_on");

    const auto spec = spec_from_document(resolved);
    CHECK(spec.n == 4);
    CHECK(spec.fhat[0] == ewens::Complex(0.0));
}

TEST_CASE("spec document validation") {
    using Catch = validation_error;
    CHECK_THROWS_AS(resolve_spec_document(Json::parse(R"({"theta":1})"), std::nullopt,
                                          std::nullopt, false),
                    Catch);
    CHECK_THROWS_AS(resolve_spec_document(
                        Json::parse(R"({"n":3,"theta":1,"fhat":[[1,0]]})"), std::nullopt,
                        std::nullopt, false),
                    Catch);
    CHECK_THROWS_AS(resolve_spec_document(
                        Json::parse(R"({"n":3,"theta":1,"fhat":{"family":"nope"}})"),
                        std::nullopt, std::nullopt, false),
                    Catch);
    // 1.5 is outside the unit disk
    CHECK_THROWS_AS(resolve_spec_document(
                        Json::parse(R"({"n":2,"theta":1,"fhat":[[1.5,0],[1,0]]})"),
                        std::nullopt, std::nullopt, true),
                    Catch);
    // explicit entries in all three accepted shapes
    const auto ok = resolve_spec_document(
        Json::parse(R"({"n":3,"theta":1,"fhat":[0.5,[0.1,-0.2],{"re":0,"im":1}]})"),
        std::nullopt, std::nullopt, true);
    CHECK(ok["fhat"][2][1] == 1.0);
}

TEST_CASE("run_mean reports the closed-form mean") {
    MeanOptions opt;
    opt.spec_doc = Json::parse(
        R"({"n": 100, "theta": 1.0, "fhat": {"family": "constant", "u": 0.5}})");
    const auto res = run_mean(opt);
    CHECK(res.exit_code == 0);
    const double got = res.report["rows"][0]["mean_re"].get<double>();
    CHECK(std::abs(got - theta_binom::pochhammer_ratio(0.5, 1.0, 100)) <= 1e-12);
}

TEST_CASE("run_mean with oracle and exact routes") {
    MeanOptions opt;
    opt.spec_doc = Json::parse(
        R"({"n": 4, "theta": 1.0, "fhat": {"family": "zero_on", "lengths": [1]}})");
    opt.oracle = true;
    opt.exact = true;
    const auto res = run_mean(opt);
    const auto& row = res.report["rows"][0];
    CHECK(row["oracle_discrepancy"].get<double>() < 1e-12);
    CHECK(row["exact_re"].get<std::string>() == "3/8");
    CHECK(row["exact_discrepancy"].get<double>() < 1e-12);
}

TEST_CASE("run_verify thm3 passes on a family grid") {
    VerifyOptions opt;
    opt.theorem = "thm3";
    opt.spec_doc = Json::parse(R"({"fhat": {"family": "constant", "u": 0.5}})");
    opt.theta = 1.0;
    opt.p = 2.0;
    opt.grid = {50, 200, 2.0};
    const auto res = run_verify(opt);
    CHECK(res.exit_code == 0);
    CHECK(res.report["pass"].get<bool>());
    CHECK(res.report["rows"].size() == 3);
}

TEST_CASE("run_verify thm2 verdicts") {
    VerifyOptions opt;
    opt.theorem = "thm2";
    opt.series = "alternating";
    opt.p = 1.0;
    opt.grid.stop = 20000;
    const auto res = run_verify(opt);
    CHECK(res.exit_code == 0);
    CHECK(res.report["verdict"].get<std::string>().substr(0, 8) == "summable");

    opt.series = "alternating-linear";
    opt.p = 0.0;
    const auto res2 = run_verify(opt);
    CHECK(res2.exit_code == 0);
    CHECK(res2.report["verdict"] == "not summable");
}

TEST_CASE("run_verify rejects unknown subjects and bad grids") {
    VerifyOptions opt;
    opt.theorem = "thm9";
    CHECK_THROWS_AS(run_verify(opt), validation_error);
    CHECK_THROWS_AS(parse_grid("50:10:2"), validation_error);
    CHECK_THROWS_AS(parse_grid("oops"), validation_error);
    CHECK(parse_grid("100:1600:4").points() == std::vector<long>{100, 400, 1600});
}

TEST_CASE("run_sample determinism and z-score") {
    SampleOptions opt;
    opt.n = 3;
    opt.theta = 1.0;
    opt.samples = 20000;
    opt.seed = 42;
    opt.spec_doc = Json::parse(R"({"fhat": {"family": "zero_on", "lengths": [1]}})");
    const auto a = run_sample(opt);
    const auto b = run_sample(opt);
    CHECK(a.report["rows"] == b.report["rows"]);
    CHECK(a.report["rows"][0]["z_score"].get<double>() <= 3.0);

    SampleOptions tiny;
    tiny.n = 1;
    tiny.theta = 2.0;
    tiny.samples = 200;
    tiny.seed = 1;
    tiny.spec_doc = Json::parse(R"({"fhat": [[0.25, 0.5]]})");
    const auto c = run_sample(tiny);
    CHECK(c.report["rows"][0]["estimate_re"].get<double>() == 0.25);
    CHECK(c.report["rows"][0]["estimate_im"].get<double>() == 0.5);
    CHECK(c.report["rows"][0]["stderr"].get<double>() == 0.0);
}

TEST_CASE("failure_result maps exception kinds to documented exit codes") {
    CHECK(failure_result(validation_error("x")).exit_code == 2);
    CHECK(failure_result(cross_check_error("x")).exit_code == 3);
    CHECK(failure_result(invariant_violation("x")).exit_code == 4);
    CHECK(failure_result(std::runtime_error("x")).exit_code == 3);
}

TEST_CASE("csv rendering is self-describing") {
    MeanOptions opt;
    opt.spec_doc = Json::parse(
        R"({"n": 2, "theta": 2.0, "fhat": {"family": "constant", "u": 1.0}})");
    const auto res = run_mean(opt);
    const auto csv = render(res.report, Format::csv);
    CHECK(csv.find("n,theta,mean_re,mean_im") != std::string::npos);
    CHECK(csv.find("# pass: true") != std::string::npos);
    CHECK_THROWS_AS(parse_format("xml"), validation_error);
}

TEST_CASE("binary: byte-identical reports modulo wall clock") {
    write_file("/tmp/permean_cli_spec.json",
               R"({"n": 6, "theta": 1.0, "fhat": {"family": "random_disk", "seed": 9}})");
    const std::string args =
        "sample --n 6 --theta 1.0 --samples 5000 --seed 31 --spec /tmp/permean_cli_spec.json";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(strip_wall_clock(a.text) == strip_wall_clock(b.text));
}

TEST_CASE("binary: reports do not depend on the thread count") {
    write_file("/tmp/permean_cli_spec.json",
               R"({"n": 6, "theta": 1.0, "fhat": {"family": "random_disk", "seed": 9}})");
    const std::string args =
        "sample --n 6 --theta 1.0 --samples 20000 --seed 31 --spec /tmp/permean_cli_spec.json";
    const auto one = run_cli(args, "OMP_NUM_THREADS=1");
    const auto two = run_cli(args, "OMP_NUM_THREADS=2");
    CHECK(one.exit_code == 0);
    CHECK(strip_wall_clock(one.text) == strip_wall_clock(two.text));

    const std::string verify_args = "verify thm1 --series alternating --grid 50:200:2";
    const auto v1 = run_cli(verify_args, "OMP_NUM_THREADS=1");
    const auto v2 = run_cli(verify_args, "OMP_NUM_THREADS=2");
    CHECK(v1.exit_code == 0);
    CHECK(strip_wall_clock(v1.text) == strip_wall_clock(v2.text));
}

TEST_CASE("run_verify thm3 seed override and explicit-fhat documents") {
    VerifyOptions opt;
    opt.theorem = "thm3";
    opt.spec_doc = Json::parse(R"({"fhat": {"family": "random_disk", "seed": 1}})");
    opt.theta = 1.0;
    opt.p = 2.0;
    opt.grid = {50, 100, 2.0};
    const auto with_doc_seed = run_verify(opt);
    opt.seed = 123;
    const auto with_flag_seed = run_verify(opt);
    CHECK(with_doc_seed.report["parameters"]["spec"]["family"]["seed"] == 1);
    CHECK(with_flag_seed.report["parameters"]["spec"]["family"]["seed"] == 123);
    CHECK(with_doc_seed.report["rows"][0]["residual"] !=
          with_flag_seed.report["rows"][0]["residual"]);

    // explicit arrays run at the document's n only
    VerifyOptions ex;
    ex.theorem = "thm3";
    ex.spec_doc = Json::parse(R"({"n": 4, "fhat": [[0,0],[1,0],[1,0],[1,0]]})");
    ex.theta = 1.0;
    ex.p = 2.0;
    const auto res = run_verify(ex);
    CHECK(res.report["rows"].size() == 1);
    CHECK(res.report["rows"][0]["n"] == 4);
}

TEST_CASE("binary: spec round-trips into the report") {
    write_file("/tmp/permean_cli_mean.json",
               R"({"n": 3, "theta": 1.0, "fhat": {"family": "zero_on", "lengths": [1]}})");
    const auto out = run_cli("mean --spec /tmp/permean_cli_mean.json --oracle");
    CHECK(out.exit_code == 0);
    const auto j = Json::parse(out.text);
    CHECK(j["parameters"]["spec"]["fhat"].size() == 3);
    CHECK(std::abs(j["rows"][0]["mean_re"].get<double>() - 1.0 / 3) < 1e-12);
}

TEST_CASE("binary: validation failures exit 2") {
    const auto missing = run_cli("mean --spec /tmp/does_not_exist.json");
    CHECK(missing.exit_code == 2);
    // the enumeration oracle refuses n past the desk-scale bound
    write_file("/tmp/permean_cli_big.json",
               R"({"n": 61, "theta": 1.0, "fhat": {"family": "constant", "u": 0.5}})");
    const auto big = run_cli("mean --spec /tmp/permean_cli_big.json --oracle");
    CHECK(big.exit_code == 2);
    write_file("/tmp/permean_cli_bad.json", "{not json");
    const auto bad = run_cli("mean --spec /tmp/permean_cli_bad.json");
    CHECK(bad.exit_code == 2);
    const auto badflag = run_cli("mean");
    CHECK(badflag.exit_code == 2);
}

TEST_CASE("binary: truncation witness failure exits 3") {
    const auto out =
        run_cli("verify thm1 --series alternating --grid 1:1:2 --theta 1 --j-cap-factor 10");
    CHECK(out.exit_code == 3);
    const auto j = Json::parse(out.text);
    CHECK(j["error"]["kind"] == "cross-check");
}
