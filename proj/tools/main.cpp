#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "permean/cli.hpp"
#include "permean/errors.hpp"

namespace {

using permean::cli::Json;

Json load_spec(const std::string& path) {
    std::string text;
    if (path == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(path);
        if (!in) throw permean::validation_error("cannot open spec file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw permean::validation_error("spec file is not valid JSON: " +
                                        std::string(e.what()));
    }
}

} // namespace

int main(int argc, char** argv) {
    using namespace permean::cli;

    CLI::App app{"Ewens-measure means of multiplicative functions and "
                 "Cesaro/Abel summability checks"};
    app.set_version_flag("--version", "permean 0.1.0");
    app.require_subcommand(1);

    std::string format = "json";
    app.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));

    // mean
    auto* cmd_mean = app.add_subcommand("mean", "M_n(f) via coefficient extraction");
    cmd_mean->fallthrough();
    std::string mean_spec;
    double mean_theta = 0;
    int mean_n = 0;
    bool mean_oracle = false, mean_exact = false;
    cmd_mean->add_option("--spec", mean_spec, "JSON spec document ('-' for stdin)")
        ->required();
    auto* mean_theta_opt = cmd_mean->add_option("--theta", mean_theta, "Ewens parameter");
    auto* mean_n_opt = cmd_mean->add_option("--n", mean_n, "Override n");
    cmd_mean->add_flag("--oracle", mean_oracle, "Also run the enumeration oracle");
    cmd_mean->add_flag("--exact", mean_exact, "Also run the exact-rational oracle");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "Numeric theorem verification");
    cmd_verify->fallthrough();
    std::string v_theorem, v_series = "alternating", v_grid = "50:1600:2", v_spec;
    std::vector<int> v_lengths = {1};
    double v_theta = 1.0, v_p = 2.0, v_jcap = 40.0;
    int v_m = 300, v_j = 100;
    std::uint64_t v_seed = 0;
    Thresholds th;
    cmd_verify->add_option("theorem", v_theorem, "thm1|thm2|thm3|lemma2")->required();
    cmd_verify->add_option("--series", v_series,
                           "thm1/thm2 input: alternating|alternating-linear|delta|exp-poly");
    cmd_verify->add_option("--lengths", v_lengths, "exp-poly: avoided cycle lengths");
    cmd_verify->add_option("--spec", v_spec, "thm3: JSON spec document");
    cmd_verify->add_option("--theta", v_theta, "Ewens parameter");
    cmd_verify->add_option("--p", v_p, "Cesaro/thm3 parameter");
    cmd_verify->add_option("--grid", v_grid, "n grid as start:stop:factor");
    cmd_verify->add_option("--j-cap-factor", v_jcap, "thm1 majorant truncation J/n");
    cmd_verify->add_option("--M", v_m, "lemma2 m range");
    cmd_verify->add_option("--J", v_j, "lemma2 j range");
    auto* v_seed_opt = cmd_verify->add_option("--seed", v_seed, "random_disk seed override");
    cmd_verify->add_option("--ratio-cap", th.thm1_ratio_cap, "thm1 ratio bound");
    cmd_verify->add_option("--growth-cap", th.thm1_growth_cap, "thm1 ratio growth cap");
    cmd_verify->add_option("--thm3-growth-cap", th.thm3_growth_cap, "thm3 ratio growth cap");
    cmd_verify->add_option("--mono-slack", th.thm3_mono_slack, "thm3 residual decay slack");
    cmd_verify->add_option("--noise-floor", th.noise_floor, "absolute residual noise floor");
    cmd_verify->add_option("--cauchy-tol", th.thm2_cauchy_tol, "thm2 limit tolerance");
    cmd_verify->add_option("--route-tol", th.lemma2_route_tol, "lemma2 route agreement");
    cmd_verify->add_option("--spread-cap", th.lemma2_spread_cap, "lemma2 (ii) stability cap");

    // sample
    auto* cmd_sample = app.add_subcommand("sample", "Monte-Carlo CRP estimate");
    cmd_sample->fallthrough();
    int s_n = 0;
    double s_theta = 1.0;
    long s_samples = 0;
    std::uint64_t s_seed = 0;
    std::string s_spec;
    cmd_sample->add_option("--n", s_n, "Permutation size")->required();
    cmd_sample->add_option("--theta", s_theta, "Ewens parameter")->required();
    cmd_sample->add_option("--samples", s_samples, "Sample count (>= 100)")->required();
    cmd_sample->add_option("--seed", s_seed, "RNG seed")->required();
    cmd_sample->add_option("--spec", s_spec, "Optional JSON spec document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    RunResult result;
    try {
        if (cmd_mean->parsed()) {
            MeanOptions opt;
            opt.spec_doc = load_spec(mean_spec);
            if (mean_theta_opt->count() > 0) opt.theta = mean_theta;
            if (mean_n_opt->count() > 0) opt.n = mean_n;
            opt.oracle = mean_oracle;
            opt.exact = mean_exact;
            result = run_mean(opt);
        } else if (cmd_verify->parsed()) {
            VerifyOptions opt;
            opt.theorem = v_theorem;
            opt.series = v_series;
            opt.lengths = v_lengths;
            if (!v_spec.empty()) opt.spec_doc = load_spec(v_spec);
            opt.theta = v_theta;
            opt.p = v_p;
            opt.grid = parse_grid(v_grid);
            opt.j_cap_factor = v_jcap;
            opt.M = v_m;
            opt.J = v_j;
            if (v_seed_opt->count() > 0) opt.seed = v_seed;
            opt.thresholds = th;
            result = run_verify(opt);
        } else {
            SampleOptions opt;
            opt.n = s_n;
            opt.theta = s_theta;
            opt.samples = s_samples;
            opt.seed = s_seed;
            if (!s_spec.empty()) opt.spec_doc = load_spec(s_spec);
            result = run_sample(opt);
        }
    } catch (const std::exception& e) {
        result = failure_result(e);
    }

    std::cout << render(result.report, parse_format(format));
    return result.exit_code;
}
