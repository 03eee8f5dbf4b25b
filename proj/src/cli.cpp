#include "permean/cli.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "permean/cesaro.hpp"
#include "permean/errors.hpp"
#include "permean/kernel.hpp"
#include "permean/oracle.hpp"
#include "permean/theta_binom.hpp"

namespace permean::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

using Clock = std::chrono::steady_clock;
using ewens::Complex;
using ewens::MultiplicativeSpec;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Json envelope(const std::string& command, const std::string& subject) {
    Json j;
    j["tool"] = "permean";
    j["version"] = kVersion;
    j["command"] = command;
    if (!subject.empty()) j["subject"] = subject;
    return j;
}

void put_complex(Json& row, const std::string& key, Complex z) {
    row[key + "_re"] = z.real();
    row[key + "_im"] = z.imag();
}

Json verdict(const std::string& name, bool pass, const std::string& detail) {
    Json v;
    v["name"] = name;
    v["pass"] = pass;
    v["detail"] = detail;
    return v;
}

Json thresholds_json(const Thresholds& t) {
    Json j;
    j["version"] = t.version;
    j["thm1_ratio_cap"] = t.thm1_ratio_cap;
    j["thm1_growth_cap"] = t.thm1_growth_cap;
    j["thm1_witness_cap"] = t.thm1_witness_cap;
    j["thm3_growth_cap"] = t.thm3_growth_cap;
    j["thm3_mono_slack"] = t.thm3_mono_slack;
    j["noise_floor"] = t.noise_floor;
    j["thm2_cauchy_tol"] = t.thm2_cauchy_tol;
    j["lemma2_slack"] = t.lemma2_slack;
    j["lemma2_route_tol"] = t.lemma2_route_tol;
    j["lemma2_spread_cap"] = t.lemma2_spread_cap;
    return j;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

} // namespace

std::vector<long> GridSpec::points() const {
    if (start < 1 || stop < start || !(factor > 1.0))
        throw validation_error("grid requires 1 <= start <= stop and factor > 1");
    std::vector<long> pts;
    for (long n = start; n <= stop;) {
        pts.push_back(n);
        long next = static_cast<long>(std::ceil(n * factor));
        if (next <= n) next = n + 1;
        n = next;
    }
    return pts;
}

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> g.start >> c1 >> g.stop >> c2 >> g.factor) || c1 != ':' || c2 != ':' ||
        !is.eof())
        throw validation_error("grid must have the form start:stop:factor, got '" + s + "'");
    (void)g.points(); // validates
    return g;
}

Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw validation_error("unknown format '" + s + "' (json|csv)");
}

namespace {

Complex parse_complex_entry(const Json& v) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2)
        return Complex(v[0].get<double>(), v[1].get<double>());
    if (v.is_object() && v.contains("re"))
        return Complex(v["re"].get<double>(), v.value("im", 0.0));
    throw validation_error("fhat entries must be numbers, [re,im] pairs or {re,im} objects");
}

std::vector<Complex> resolve_family(const Json& fam, int n) {
    const std::string name = fam.value("family", "");
    if (name == "constant") {
        if (!fam.contains("u")) throw validation_error("constant family needs 'u'");
        return MultiplicativeSpec::constant(n, parse_complex_entry(fam["u"])).fhat;
    }
    if (name == "unimodular") {
        if (!fam.contains("tau")) throw validation_error("unimodular family needs 'tau'");
        return MultiplicativeSpec::unimodular(n, fam["tau"].get<double>()).fhat;
    }
    if (name == "zero_on") {
        if (!fam.contains("lengths")) throw validation_error("zero_on family needs 'lengths'");
        return MultiplicativeSpec::zero_on(n, fam["lengths"].get<std::vector<int>>()).fhat;
    }
    if (name == "random_disk") {
        if (!fam.contains("seed")) throw validation_error("random_disk family needs 'seed'");
        return MultiplicativeSpec::random_disk(n, fam["seed"].get<std::uint64_t>()).fhat;
    }
    throw validation_error("unknown family '" + name +
                           "' (constant|unimodular|zero_on|random_disk)");
}

} // namespace

Json resolve_spec_document(const Json& doc, std::optional<double> theta_override,
                           std::optional<int> n_override, bool enforce_unit_disk) {
    if (!doc.is_object()) throw validation_error("spec document must be a JSON object");

    int n = 0;
    if (n_override)
        n = *n_override;
    else if (doc.contains("n"))
        n = doc["n"].get<int>();
    else
        throw validation_error("spec document needs 'n' (or pass --n)");
    if (n < 1) throw validation_error("spec requires n >= 1");

    double theta = 0;
    if (theta_override)
        theta = *theta_override;
    else if (doc.contains("theta"))
        theta = doc["theta"].get<double>();
    else
        throw validation_error("spec document needs 'theta' (or pass --theta)");

    if (!doc.contains("fhat")) throw validation_error("spec document needs 'fhat'");
    const Json& f = doc["fhat"];

    std::vector<Complex> fhat;
    Json family;
    if (f.is_array()) {
        for (const auto& v : f) fhat.push_back(parse_complex_entry(v));
        if (static_cast<int>(fhat.size()) != n)
            throw validation_error("explicit fhat must have length n = " + std::to_string(n));
    } else if (f.is_object()) {
        family = f;
        fhat = resolve_family(f, n);
    } else {
        throw validation_error("fhat must be an array or a family object");
    }

    MultiplicativeSpec spec(n, fhat);
    if (enforce_unit_disk && !spec.in_unit_disk())
        throw validation_error("this command requires |fhat(j)| <= 1 for all j");

    Json out;
    out["n"] = n;
    out["theta"] = theta;
    if (!family.is_null()) out["family"] = family;
    Json arr = Json::array();
    for (const auto& z : fhat) arr.push_back(Json::array({z.real(), z.imag()}));
    out["fhat"] = std::move(arr);
    return out;
}

MultiplicativeSpec spec_from_document(const Json& resolved) {
    std::vector<Complex> fhat;
    for (const auto& v : resolved["fhat"])
        fhat.emplace_back(v[0].get<double>(), v[1].get<double>());
    return {resolved["n"].get<int>(), std::move(fhat)};
}

RunResult run_mean(const MeanOptions& opt) {
    const auto t0 = Clock::now();
    const Json resolved = resolve_spec_document(opt.spec_doc, opt.theta, opt.n, false);
    const auto spec = spec_from_document(resolved);
    const double theta = resolved["theta"].get<double>();

    Json rep = envelope("mean", "");
    rep["parameters"] = Json{{"spec", resolved},
                             {"oracle", opt.oracle},
                             {"exact", opt.exact}};

    const auto n_coeffs = ewens::big_n_coeffs(spec, theta, spec.n);
    const Complex n_coeff = n_coeffs.coeffs[spec.n];
    const double weight = theta_binom::coeff_plus(theta, spec.n);
    const Complex mean = n_coeff / weight;

    Json row;
    row["n"] = spec.n;
    row["theta"] = theta;
    put_complex(row, "mean", mean);
    put_complex(row, "n_coeff", n_coeff);
    row["weight"] = weight;
    if (opt.oracle) {
        const Complex brute = oracle::brute_mean(spec, theta);
        put_complex(row, "oracle", brute);
        row["oracle_discrepancy"] = std::abs(mean - brute);
    }
    if (opt.exact) {
        const auto exact =
            oracle::brute_mean_exact(spec, exact_rational(theta));
        row["exact_re"] = exact.re.str();
        row["exact_im"] = exact.im.str();
        row["exact_discrepancy"] = std::abs(mean - exact.to_complex());
    }
    rep["rows"] = Json::array({row});
    rep["pass"] = true;
    rep["wall_clock_ms"] = ms_since(t0);
    return {rep, 0};
}

namespace {

cesaro::SummabilityInput make_series_input(const std::string& series_name,
                                           const std::vector<int>& lengths,
                                           double theta, long max_order) {
    using cesaro::SummabilityInput;
    if (series_name == "alternating") return SummabilityInput::alternating_unit();
    if (series_name == "alternating-linear") return SummabilityInput::alternating_linear();
    if (series_name == "delta") return SummabilityInput::delta();
    if (series_name == "exp-poly") {
        if (lengths.empty()) throw validation_error("exp-poly needs --lengths");
        int lmax = 0;
        for (int j : lengths) {
            if (j < 1) throw validation_error("lengths must be >= 1");
            lmax = std::max(lmax, j);
        }
        auto l = series::TruncatedSeries::zero(lmax);
        for (int j : lengths) l.coeffs[j] = -1.0 / j;
        // exp of a polynomial: coefficients decay super-exponentially, so a
        // capped truncation padded with zeros is exact at double precision.
        const int order = static_cast<int>(std::min<long>(max_order, 4096));
        auto in = SummabilityInput::exp_poly(l, theta, order, "exp-poly zero_on");
        if (std::abs(in.coeff(static_cast<std::size_t>(order))) > 1e-250)
            throw cross_check_error("exp-poly truncation is not negligible at this order");
        return in;
    }
    throw validation_error("unknown series '" + series_name +
                           "' (alternating|alternating-linear|delta|exp-poly)");
}

RunResult verify_thm1(const VerifyOptions& opt) {
    const auto t0 = Clock::now();
    const auto grid = opt.grid.points();
    const long max_j = static_cast<long>(std::ceil(opt.j_cap_factor * grid.back()));
    const auto input = make_series_input(opt.series, opt.lengths, opt.theta, max_j);

    Json rep = envelope("verify", "thm1");
    rep["parameters"] = Json{{"series", input.label},
                             {"lengths", opt.lengths},
                             {"theta", opt.theta},
                             {"grid", Json(grid)},
                             {"j_cap_factor", opt.j_cap_factor},
                             {"thresholds", thresholds_json(opt.thresholds)}};

    Json rows = Json::array();
    std::vector<double> ratios, witnesses;
    for (long n : grid) {
        const auto r = cesaro::thm1_residual(input, opt.theta, static_cast<int>(n),
                                             opt.j_cap_factor);
        Json row;
        row["n"] = r.n;
        put_complex(row, "cesaro", r.cesaro);
        put_complex(row, "abel", r.abel);
        put_complex(row, "drift", r.drift);
        row["lhs"] = r.lhs;
        row["majorant"] = r.majorant;
        row["ratio"] = r.ratio;
        row["j_cap"] = r.j_cap;
        row["witness"] = r.witness;
        rows.push_back(row);
        // a 0/0 row (both sides vanish) satisfies the bound trivially
        ratios.push_back(r.majorant == 0.0 && r.lhs == 0.0 ? 0.0 : r.ratio);
        witnesses.push_back(r.witness);
    }
    rep["rows"] = rows;

    const auto& th = opt.thresholds;
    bool witness_ok = true, bounded_ok = true, growth_ok = true;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        witness_ok = witness_ok && witnesses[i] <= th.thm1_witness_cap;
        bounded_ok = bounded_ok && std::isfinite(ratios[i]) && ratios[i] <= th.thm1_ratio_cap;
        if (i > 0) growth_ok = growth_ok && ratios[i] <= th.thm1_growth_cap * ratios[0];
    }
    Json verdicts = Json::array();
    verdicts.push_back(verdict("truncation witness", witness_ok,
                               "every last term <= " + fmt(th.thm1_witness_cap) +
                                   " of the accumulated majorant"));
    verdicts.push_back(verdict("ratio bounded", bounded_ok,
                               "lhs/majorant <= " + fmt(th.thm1_ratio_cap) +
                                   " at every grid point"));
    verdicts.push_back(verdict("ratio does not grow", growth_ok,
                               "each ratio <= " + fmt(th.thm1_growth_cap) +
                                   " x the first grid point"));
    rep["verdicts"] = verdicts;
    const bool pass = witness_ok && bounded_ok && growth_ok;
    rep["pass"] = pass;
    rep["wall_clock_ms"] = ms_since(t0);
    return {rep, pass ? 0 : 1};
}

RunResult verify_thm2(const VerifyOptions& opt) {
    const auto t0 = Clock::now();
    const auto input = make_series_input(opt.series, opt.lengths, opt.p + 1.0,
                                         opt.grid.stop);
    const auto rr =
        cesaro::tauber_conditions(input, opt.p, opt.grid.stop, opt.thresholds.thm2_cauchy_tol);

    Json rep = envelope("verify", "thm2");
    rep["parameters"] = Json{{"series", input.label},
                             {"p", opt.p},
                             {"n_max", opt.grid.stop},
                             {"thresholds", thresholds_json(opt.thresholds)}};
    Json rows = Json::array();
    for (std::size_t i = 0; i < rr.grid.size(); ++i) {
        Json row;
        row["n"] = rr.grid[i];
        put_complex(row, "abel", rr.abel[i]);
        put_complex(row, "cesaro", rr.cesaro[i]);
        row["second"] = rr.second[i];
        rows.push_back(row);
    }
    rep["rows"] = rows;

    bool consistent = rr.summable == rr.cesaro_converged;
    if (rr.summable && rr.cesaro_converged)
        consistent = consistent && std::abs(rr.limit - rr.cesaro.back()) <=
                                       10.0 * opt.thresholds.thm2_cauchy_tol;

    Json verdicts = Json::array();
    verdicts.push_back(verdict("abel limit exists", rr.abel_converged,
                               "last three Abel values Cauchy-close"));
    verdicts.push_back(verdict("second condition vanishes", rr.second_vanishes,
                               "S_{p+1}(f;n)/n^{p+1} below tolerance at the last point"));
    verdicts.push_back(verdict("cesaro means converge", rr.cesaro_converged,
                               "last three (C,p) means Cauchy-close"));
    verdicts.push_back(verdict("equivalence consistent", consistent,
                               "conditions hold iff (C,p) summable to the same A"));
    rep["verdicts"] = verdicts;
    std::string v = rr.verdict;
    if (rr.summable)
        v += ", A = " + fmt(rr.limit.real()) +
             (std::abs(rr.limit.imag()) > 0 ? " + " + fmt(rr.limit.imag()) + "i" : "");
    rep["verdict"] = v;
    rep["pass"] = consistent;
    rep["wall_clock_ms"] = ms_since(t0);
    return {rep, consistent ? 0 : 1};
}

RunResult verify_thm3(const VerifyOptions& opt) {
    const auto t0 = Clock::now();
    if (!opt.spec_doc)
        throw validation_error("verify thm3 needs a spec document (--spec)");

    Json doc = *opt.spec_doc;
    if (opt.seed && doc.contains("fhat") && doc["fhat"].is_object() &&
        doc["fhat"].value("family", "") == "random_disk")
        doc["fhat"]["seed"] = *opt.seed;

    std::vector<long> grid;
    const bool explicit_fhat = doc.contains("fhat") && doc["fhat"].is_array();
    if (explicit_fhat) {
        // explicit arrays cannot be extended along a grid
        grid = {doc.contains("n") ? doc["n"].get<long>() : 0};
        if (grid[0] < 1) throw validation_error("explicit fhat document needs 'n'");
    } else {
        grid = opt.grid.points();
    }

    Json rep = envelope("verify", "thm3");
    Json rows = Json::array();
    std::vector<double> residuals, ratios;
    Json resolved_echo;
    for (long n : grid) {
        const Json resolved =
            resolve_spec_document(doc, opt.theta, static_cast<int>(n), true);
        if (resolved_echo.is_null())
            resolved_echo = resolved.contains("family")
                                ? Json{{"family", resolved["family"]}, {"theta", resolved["theta"]}}
                                : resolved;
        const auto spec = spec_from_document(resolved);
        const auto r = ewens::thm3_residual(spec, opt.theta, opt.p);
        Json row;
        row["n"] = r.n;
        put_complex(row, "mean", r.mean);
        put_complex(row, "asymptotic", r.asymptotic);
        row["mu"] = r.mu;
        row["residual"] = r.residual;
        row["ratio"] = r.ratio;
        rows.push_back(row);
        residuals.push_back(r.residual);
        ratios.push_back(r.ratio);
    }
    rep["parameters"] = Json{{"spec", resolved_echo},
                             {"theta", opt.theta},
                             {"p", opt.p},
                             {"grid", Json(grid)},
                             {"thresholds", thresholds_json(opt.thresholds)}};
    rep["rows"] = rows;

    // bounded-ratio checks with a noise floor: residuals at double
    // precision's floor count as converged
    const auto& th = opt.thresholds;
    const double floor = th.noise_floor;
    bool growth_ok = true, mono_ok = true;
    for (std::size_t i = 1; i < ratios.size(); ++i) {
        growth_ok = growth_ok && (residuals[i] <= floor ||
                                  ratios[i] <= th.thm3_growth_cap * ratios[0]);
        mono_ok = mono_ok &&
                  residuals[i] <= th.thm3_mono_slack * residuals[i - 1] + floor;
    }
    const bool final_ok =
        residuals.empty() ||
        residuals.back() <= std::max(residuals.front(), floor);

    Json verdicts = Json::array();
    verdicts.push_back(verdict("ratio growth bounded", growth_ok,
                               "residual/mu <= " + fmt(th.thm3_growth_cap) +
                                   " x its first-grid value (noise floor " +
                                   fmt(floor) + ")"));
    verdicts.push_back(verdict("residual decays", mono_ok,
                               "residual falls monotonically up to factor " +
                                   fmt(th.thm3_mono_slack) + " slack"));
    verdicts.push_back(verdict("residual ends below start", final_ok, ""));
    rep["verdicts"] = verdicts;
    const bool pass = growth_ok && mono_ok && final_ok;
    rep["pass"] = pass;
    rep["wall_clock_ms"] = ms_since(t0);
    return {rep, pass ? 0 : 1};
}

RunResult verify_lemma2(const VerifyOptions& opt) {
    const auto t0 = Clock::now();
    const auto rr = kernel::check_lemma2(opt.theta, opt.M, opt.J);

    Json rep = envelope("verify", "lemma2");
    rep["parameters"] = Json{{"theta", opt.theta},
                             {"M", opt.M},
                             {"J", opt.J},
                             {"thresholds", thresholds_json(opt.thresholds)}};
    Json rows = Json::array();
    for (const auto& c : rr.dyadic) {
        Json row;
        row["j"] = c.j;
        row["m"] = c.m;
        row["normalized_error"] = c.normalized_error;
        row["below_noise_floor"] = c.below_noise_floor;
        rows.push_back(row);
    }
    rep["rows"] = rows;
    rep["cells_checked"] = rr.cells_checked;
    rep["worst_chain_slack"] = rr.worst_chain_slack;
    rep["max_route_error"] = rr.max_route_error;
    rep["max_normalized_error"] = rr.max_normalized_error;

    const auto& th = opt.thresholds;
    const bool route_ok = rr.max_route_error <= th.lemma2_route_tol;
    bool stable_ok = true;
    for (int j : {10, 20, 40}) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& c : rr.dyadic)
            if (c.j == j && !c.below_noise_floor) {
                lo = std::min(lo, c.normalized_error);
                hi = std::max(hi, c.normalized_error);
            }
        if (hi > 0.0 && lo > 0.0 && hi / lo > th.lemma2_spread_cap) stable_ok = false;
    }
    Json verdicts = Json::array();
    verdicts.push_back(verdict("estimate (i) chain", true,
                               "0 <= c <= b <= (theta/j^2)e^{theta m/j} on the full grid, "
                               "worst slack " + fmt(rr.worst_chain_slack)));
    verdicts.push_back(verdict("route agreement", route_ok,
                               "recurrence vs convolution within " + fmt(th.lemma2_route_tol)));
    verdicts.push_back(verdict("estimate (ii) dyadic stability", stable_ok,
                               "normalized error spread <= " + fmt(th.lemma2_spread_cap) +
                                   " along dyadic m (cells at the noise floor count as exact)"));
    rep["verdicts"] = verdicts;
    const bool pass = route_ok && stable_ok;
    rep["pass"] = pass;
    rep["wall_clock_ms"] = ms_since(t0);
    return {rep, pass ? 0 : 1};
}

} // namespace

RunResult run_verify(const VerifyOptions& opt) {
    if (opt.theorem == "thm1") return verify_thm1(opt);
    if (opt.theorem == "thm2") return verify_thm2(opt);
    if (opt.theorem == "thm3") return verify_thm3(opt);
    if (opt.theorem == "lemma2") return verify_lemma2(opt);
    throw validation_error("unknown theorem '" + opt.theorem +
                           "' (thm1|thm2|thm3|lemma2)");
}

RunResult run_sample(const SampleOptions& opt) {
    const auto t0 = Clock::now();
    Json doc;
    if (opt.spec_doc)
        doc = *opt.spec_doc;
    else
        doc = Json{{"fhat", Json{{"family", "constant"}, {"u", 1.0}}}};

    const Json resolved = resolve_spec_document(doc, opt.theta, opt.n, false);
    const auto spec = spec_from_document(resolved);
    const double theta = resolved["theta"].get<double>();

    const auto mc = oracle::mc_mean(spec, theta, opt.samples, opt.seed);

    Json rep = envelope("sample", "");
    rep["parameters"] = Json{{"spec", resolved},
                             {"samples", opt.samples},
                             {"seed", opt.seed}};
    Json row;
    row["n"] = spec.n;
    row["theta"] = theta;
    row["samples"] = mc.samples;
    put_complex(row, "estimate", mc.estimate);
    row["stderr"] = mc.stderr_;
    if (opt.spec_doc) {
        const Complex exact = ewens::mean_value(spec, theta);
        put_complex(row, "series_mean", exact);
        const double diff = std::abs(mc.estimate - exact);
        row["z_score"] = mc.stderr_ > 0.0
                             ? diff / mc.stderr_
                             : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    rep["rows"] = Json::array({row});
    rep["pass"] = true;
    rep["wall_clock_ms"] = ms_since(t0);
    return {rep, 0};
}

std::string render(const Json& report, Format f) {
    if (f == Format::json) return report.dump(2) + "\n";

    std::ostringstream os;
    os << "# permean " << report.value("command", "");
    if (report.contains("subject")) os << " " << report["subject"].get<std::string>();
    os << "\n";
    if (report.contains("parameters"))
        os << "# parameters: " << report["parameters"].dump() << "\n";
    if (report.contains("error")) {
        os << "# error: " << report["error"].dump() << "\n";
        return os.str();
    }
    if (report.contains("rows") && !report["rows"].empty()) {
        const auto& rows = report["rows"];
        bool first = true;
        for (const auto& [key, value] : rows[0].items()) {
            (void)value;
            os << (first ? "" : ",") << key;
            first = false;
        }
        os << "\n";
        for (const auto& row : rows) {
            first = true;
            for (const auto& [key, value] : row.items()) {
                (void)key;
                os << (first ? "" : ",")
                   << (value.is_string() ? value.get<std::string>() : value.dump());
                first = false;
            }
            os << "\n";
        }
    }
    if (report.contains("verdicts"))
        for (const auto& v : report["verdicts"])
            os << "# verdict: " << v["name"].get<std::string>() << " = "
               << (v["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
    if (report.contains("verdict"))
        os << "# " << report["verdict"].get<std::string>() << "\n";
    if (report.contains("pass"))
        os << "# pass: " << (report["pass"].get<bool>() ? "true" : "false") << "\n";
    return os.str();
}

RunResult failure_result(const std::exception& e) {
    int code = 3;
    std::string kind = "internal";
    if (dynamic_cast<const validation_error*>(&e) != nullptr) {
        code = 2;
        kind = "validation";
    } else if (dynamic_cast<const invariant_violation*>(&e) != nullptr) {
        code = 4;
        kind = "invariant";
    } else if (dynamic_cast<const cross_check_error*>(&e) != nullptr) {
        code = 3;
        kind = "cross-check";
    } else if (dynamic_cast<const nlohmann::json::exception*>(&e) != nullptr) {
        code = 2;
        kind = "validation";
    }
    Json rep = envelope("error", "");
    rep["error"] = Json{{"kind", kind}, {"message", e.what()}};
    rep["exit_code"] = code;
    return {rep, code};
}

} // namespace permean::cli
