#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "permean/ewens.hpp"

namespace permean::cli {

using Json = nlohmann::ordered_json;

enum class Format { json, csv };

// Versioned PASS/FAIL defaults for the bounded-ratio verdicts. The
// paper-style bounds carry unknown constants; these are the constants
// this tool pins, fitted during acceptance calibration and disclosed in
// every report. Overridable by flag.
struct Thresholds {
    std::string version = "defaults-v1";

    double thm1_ratio_cap = 10.0;   // lhs/majorant at every grid point
    double thm1_growth_cap = 4.0;   // vs the first grid point
    double thm1_witness_cap = 1e-12;

    double thm3_growth_cap = 8.0;   // ratio vs first grid point
    double thm3_mono_slack = 2.0;   // residual decay slack
    double noise_floor = 1e-13;     // residuals below this count as converged

    double thm2_cauchy_tol = 1e-3;

    double lemma2_slack = 1e-12;      // estimate (i) chain
    double lemma2_route_tol = 1e-12;  // recurrence vs convolution
    double lemma2_spread_cap = 8.0;   // estimate (ii) dyadic stability
};

struct GridSpec {
    long start = 50;
    long stop = 1600;
    double factor = 2.0;

    std::vector<long> points() const;
};

struct MeanOptions {
    Json spec_doc;
    std::optional<double> theta;
    std::optional<int> n;
    bool oracle = false;
    bool exact = false;
};

struct VerifyOptions {
    std::string theorem; // thm1 | thm2 | thm3 | lemma2
    std::string series = "alternating"; // thm1/thm2: alternating | alternating-linear | delta | exp-poly
    std::vector<int> lengths = {1};     // exp-poly: zero_on lengths defining L
    std::optional<Json> spec_doc;       // thm3 family document
    double theta = 1.0;
    double p = 2.0;
    GridSpec grid;
    double j_cap_factor = 40.0;
    int M = 300; // lemma2
    int J = 100; // lemma2
    std::optional<std::uint64_t> seed;
    Thresholds thresholds;
};

struct SampleOptions {
    int n = 0;
    double theta = 1.0;
    long samples = 0;
    std::uint64_t seed = 0;
    std::optional<Json> spec_doc;
};

struct RunResult {
    Json report;
    int exit_code = 0; // 0 ok, 1 verdict FAIL, 2 validation, 3 cross-check, 4 invariant
};

// Resolves a SpecDocument: applies overrides, expands family builders
// to explicit fhat arrays, validates lengths (and the unit disk when
// required). Throws validation_error.
Json resolve_spec_document(const Json& doc, std::optional<double> theta_override,
                           std::optional<int> n_override, bool enforce_unit_disk);
ewens::MultiplicativeSpec spec_from_document(const Json& resolved);

RunResult run_mean(const MeanOptions& opt);
RunResult run_verify(const VerifyOptions& opt);
RunResult run_sample(const SampleOptions& opt);

Format parse_format(const std::string& s);
GridSpec parse_grid(const std::string& s);
std::string render(const Json& report, Format fmt);

// Maps the active exception to the documented exit code and a report
// stub describing it.
RunResult failure_result(const std::exception& e);

} // namespace permean::cli
