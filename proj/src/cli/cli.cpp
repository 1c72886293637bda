// Copyright 2026 The qadsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qadsim/cli/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qadsim/error.hpp"

namespace qadsim::cli {

namespace {

bool needs_query(const std::string& cmd) { return cmd == "detect" || cmd == "kpca" || cmd == "flaws"; }
bool needs_precision(const std::string& cmd) { return cmd == "fit" || cmd == "detect" || cmd == "kpca"; }

adde::Route parse_route(const std::string& s) {
    if (s == "fused") return adde::Route::fused;
    if (s == "explicit") return adde::Route::explicit_gates;
    throw ConfigError("unknown route '" + s + "' (expected fused|explicit)");
}

template <typename T>
ordered_json opt(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string fmt_num(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

void summarize(const std::string& cmd, const ordered_json& r, std::ostream& os) {
    if (cmd == "fit") {
        const auto& mu = r["mu_hat"];
        const auto& s2 = r["sigma2_hat"];
        for (std::size_t j = 0; j < mu.size(); ++j)
            os << "feature " << j << ": mu_hat " << fmt_num(mu[j]) << "  sigma2_hat " << fmt_num(s2[j]) << "\n";
    } else if (cmd == "detect") {
        os << "lnP_hat " << fmt_num(r["lnP_hat"]) << "  lnP_classical " << fmt_num(r["lnP_classical"]) << "  ln delta "
           << fmt_num(std::log(r["delta"].get<double>())) << "\n"
           << (r["flag"].get<bool>() ? "anomaly" : "normal") << " (classical: "
           << (r["flag_classical"].get<bool>() ? "anomaly" : "normal") << ")\n";
    } else if (cmd == "kpca") {
        os << "f_hat " << fmt_num(r["f_hat"]) << "  f_classical " << fmt_num(r["f_classical"]) << "  error "
           << fmt_num(r["observed_errors"]["proximity"]) << "\n";
    } else if (cmd == "flaws") {
        for (const auto& s : r["encoding"]) os << s["name"].get<std::string>() << ": " << s["encoding"].get<std::string>() << "\n";
        os << "post-selection discrepancy " << fmt_num(r["normalization"]["discrepancy"]) << "\n";
        const auto& m2 = r["expectation"]["m2"];
        os << "M2 claimed " << fmt_num(m2["claimed"]) << "  actual " << fmt_num(m2["actual"]) << "  gap "
           << fmt_num(m2["gap_claimed"]) << "\n";
    } else if (cmd == "verify") {
        os << "suite " << r["suite"].get<std::string>() << ": " << r["passed"] << "/"
           << r["passed"].get<int>() + r["failed"].get<int>() << " passed\n";
    }
}

}  // namespace

void RunConfig::validate() const {
    if (subcommand != "verify" && data_path.empty()) throw ConfigError(subcommand + " needs --data");
    if (needs_query(subcommand) && query_path.empty()) throw ConfigError(subcommand + " needs --query");
    if (epsilon && t_bits) throw ConfigError("--epsilon and --t-bits are mutually exclusive");
    if (needs_precision(subcommand) && !epsilon && !t_bits) throw ConfigError(subcommand + " needs --epsilon or --t-bits");
    if (epsilon && !(*epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
    if (t_bits && *t_bits < 1) throw ConfigError("--t-bits must be at least 1");
    if (!(delta > 0.0)) throw ConfigError("--delta must be positive");
    if (mode == ae::AEMode::circuit && !seed && subcommand != "flaws") throw ConfigError("circuit mode needs --seed");
    if (subcommand == "verify" && seeds < 1) throw ConfigError("--seeds must be at least 1");
    format.validate();
}

adde::EstimatorSettings RunConfig::settings() const {
    adde::EstimatorSettings s;
    s.mode = mode;
    s.seed = seed;
    s.format = format;
    s.route = route;
    return s;
}

ordered_json RunConfig::to_json() const {
    ordered_json j;
    j["subcommand"] = subcommand;
    j["data"] = data_path.empty() ? ordered_json(nullptr) : ordered_json(data_path);
    j["query"] = query_path.empty() ? ordered_json(nullptr) : ordered_json(query_path);
    j["header"] = header;
    j["epsilon"] = opt(epsilon);
    j["t_bits"] = opt(t_bits);
    j["delta"] = delta;
    j["mode"] = ae::to_string(mode);
    j["seed"] = opt(seed);
    j["format"] = cli::to_json(format);
    j["policy"] = data::to_string(policy);
    j["route"] = adde::to_string(route);
    j["chi_reading"] = flawlab::to_string(chi);
    if (subcommand == "verify") {
        j["suite"] = suite;
        j["seeds"] = seeds;
    }
    return j;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Statevector simulation of amplitude-estimation anomaly detection", "qadsim"};
    app.require_subcommand(1);

    RunConfig c;
    std::string mode = "ideal", policy = "error", route = "fused", chi = "norm";
    double epsilon = 0.0;
    int t_bits = 0;
    std::uint64_t seed = 0;

    auto common = [&](CLI::App* sub, bool query) {
        sub->add_option("--data", c.data_path, "training CSV, one point per row")->check(CLI::ExistingFile);
        if (query) sub->add_option("--query", c.query_path, "query CSV, one row")->check(CLI::ExistingFile);
        sub->add_flag("--header", c.header, "CSV files start with a header row");
        sub->add_option("--seed", seed, "seed for circuit-mode sampling");
        sub->add_option("--fp-int-bits", c.format.int_bits, "fixed-point integer bits")->capture_default_str();
        sub->add_option("--fp-frac-bits", c.format.frac_bits, "fixed-point fraction bits")->capture_default_str();
        sub->add_option("--out", c.out_path, "report path (default: standard output)");
    };
    auto estimation = [&](CLI::App* sub) {
        auto* e = sub->add_option("--epsilon", epsilon, "target precision; sizes every phase register");
        auto* t = sub->add_option("--t-bits", t_bits, "phase bits for every amplitude estimation");
        e->excludes(t);
        sub->add_option("--mode", mode, "ideal | circuit")->capture_default_str();
        sub->add_option("--policy", policy, "zero variances: error | epsilon-floor")->capture_default_str();
        sub->add_option("--route", route, "fused | explicit")->capture_default_str();
    };

    auto* fit = app.add_subcommand("fit", "estimate per-feature means and variances");
    common(fit, false);
    estimation(fit);
    auto* detect = app.add_subcommand("detect", "Gaussian density anomaly test of one query point");
    common(detect, true);
    estimation(detect);
    detect->add_option("--delta", c.delta, "flag when ln P < ln delta")->capture_default_str();
    auto* kpca = app.add_subcommand("kpca", "linear-kernel proximity measure of one query point");
    common(kpca, true);
    estimation(kpca);
    auto* flaws = app.add_subcommand("flaws", "audit the amplitude-encoded construction");
    common(flaws, true);
    flaws->add_option("--chi", chi, "reading of chi: norm | sum")->capture_default_str();
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", c.suite, "bounds | equivalence | scaling | flaws")->required();
    verify->add_option("--seeds", c.seeds, "number of seeded instances")->capture_default_str();
    verify->add_option("--t-bits", t_bits, "phase bits (bounds: 10, equivalence: 3)");
    verify->add_option("--mode", mode, "ideal | circuit")->capture_default_str();
    verify->add_option("--seed", seed, "base seed for circuit mode");
    verify->add_option("--policy", policy, "zero variances: error | epsilon-floor")->capture_default_str();
    verify->add_option("--out", c.out_path, "report path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string(e.what()) + "\n\n" + app.help("", CLI::AppFormatMode::All));
    }

    for (auto* sub : app.get_subcommands()) {
        c.subcommand = sub->get_name();
        auto given = [sub](const char* name) {
            const auto* o = sub->get_option_no_throw(name);
            return o != nullptr && o->count() > 0;
        };
        if (given("--epsilon")) c.epsilon = epsilon;
        if (given("--t-bits")) c.t_bits = t_bits;
        if (given("--seed")) c.seed = seed;
    }
    c.mode = ae::parse_mode(mode);
    c.policy = data::parse_policy(policy);
    c.route = parse_route(route);
    c.chi = flawlab::parse_chi_reading(chi);
    c.validate();
    return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        auto parsed = parse_args(argc, argv, out);
        if (!parsed) return static_cast<int>(ExitCode::ok);
        const RunConfig& c = *parsed;
        const auto& cmd = c.subcommand;

        data::DataMatrix X;
        data::QueryPoint x0;
        if (!c.data_path.empty()) X = data::load_csv(c.data_path, c.header);
        if (!c.query_path.empty()) x0 = data::load_query_csv(c.query_path, c.header);

        ordered_json body;
        int code = static_cast<int>(ExitCode::ok);
        if (cmd == "fit") {
            body = fit_json(fit_model(X, c));
        } else if (cmd == "detect") {
            adde::DensityConfig dc;
            dc.settings = c.settings();
            dc.epsilon = c.epsilon;
            dc.t_bits = c.t_bits;
            dc.delta = c.delta;
            dc.policy = c.policy;
            auto rep = adde::run_adde(X, x0, dc);
            body = adde_json(rep);
            if (rep.flag) code = static_cast<int>(ExitCode::anomaly);
        } else if (cmd == "kpca") {
            adkpca::KpcaConfig kc;
            kc.settings = c.settings();
            kc.epsilon = c.epsilon;
            kc.t_bits = c.t_bits;
            body = adkpca_json(adkpca::run_adkpca(X, x0, kc));
        } else if (cmd == "flaws") {
            body = flaws_json(flawlab::run_flaws(X, x0, c.seed.value_or(0), c.chi));
        } else {
            body = verify_suite(c.suite, c.seeds, c);
        }

        ordered_json report = envelope(cmd, {{"config", c.to_json()}});
        for (const auto& [k, v] : body.items()) report[k] = v;
        const std::string text = report.dump(2) + "\n";
        if (c.out_path.empty()) {
            out << text;
            summarize(cmd, report, err);
        } else {
            std::ofstream f(c.out_path, std::ios::binary);
            if (!f) throw ConfigError("cannot write " + c.out_path);
            f << text;
            summarize(cmd, report, out);
        }
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::error);
    }
}

}  // namespace qadsim::cli
