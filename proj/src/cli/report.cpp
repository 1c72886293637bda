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

#include "qadsim/cli/report.hpp"

#include <chrono>
#include <ctime>

namespace qadsim::cli {

namespace {

ordered_json runs_json(const std::vector<ae::AEResult>& runs) {
    auto out = ordered_json::array();
    for (const auto& r : runs) out.push_back(to_json(r));
    return out;
}

ordered_json adde_bounds(const adde::DensityBounds& b) {
    return {{"mean", b.mean}, {"variance", b.variance}, {"p", b.p}, {"q", b.q}, {"log_density", b.log_density}};
}

ordered_json kpca_bounds(const adkpca::KpcaBounds& b) {
    return {{"distance", b.distance}, {"b", b.b}, {"proximity", b.proximity}};
}

ordered_json audit_json(const flawlab::ObservableAudit& a) {
    return {{"actual", a.actual},
            {"actual_normalized", a.actual_normalized},
            {"written_norm", a.written_norm},
            {"claimed", a.claimed},
            {"target", a.target},
            {"gap_claimed", a.gap_claimed},
            {"gap_target", a.gap_target},
            {"norm_defect", a.norm_defect},
            {"unphysical", a.unphysical}};
}

}  // namespace

ordered_json to_json(const ae::AEResult& r) {
    return {{"t", r.t},
            {"mode", ae::to_string(r.mode)},
            {"y", r.y},
            {"theta", r.theta},
            {"a", r.a},
            {"grid_step", r.grid_step},
            {"grover_applications", r.grover_applications},
            {"error_bound", r.error_bound},
            {"outcome_probability", r.outcome_probability}};
}

ordered_json to_json(const data::LedgerSnapshot& l) {
    return {{"data_oracle", l.data_oracle},
            {"query_oracle", l.query_oracle},
            {"grover", l.grover},
            {"arithmetic", l.arithmetic}};
}

ordered_json to_json(const arith::Format& f) {
    return {{"int_bits", f.int_bits}, {"frac_bits", f.frac_bits}, {"signed", f.is_signed}};
}

ordered_json adde_json(const adde::ADDEReport& r) {
    auto consts = [](const data::Constants& k) { return ordered_json{{"C", k.C}, {"D", k.D}, {"T", k.T}, {"E", k.E}}; };
    ordered_json budget = nullptr;
    if (r.budget) {
        const auto& b = *r.budget;
        budget = {{"epsilon", b.epsilon},
                  {"eps_mean", b.eps_mean},
                  {"eps_variance", b.eps_variance},
                  {"eps_density", b.eps_density},
                  {"needs_ideal", b.needs_ideal},
                  {"planned_grover", b.planned_grover}};
    }
    ordered_json j;
    j["rows"] = r.rows;
    j["cols"] = r.cols;
    j["constants"] = {{"classical", consts(r.constants)},
                      {"used", consts(r.constants_used)},
                      {"floored", r.constants.floored}};
    j["retries"] = r.retries;
    j["t_bits"] = {{"mean", r.t_mean}, {"variance", r.t_variance}, {"density", r.t_density}};
    j["budget"] = budget;
    j["mu_hat"] = r.estimated.mu;
    j["sigma2_hat"] = r.estimated.sigma2;
    j["sigma2_floored"] = r.estimated.floored;
    j["mu_classical"] = r.classical.mu;
    j["sigma2_classical"] = r.classical.sigma2;
    j["p_hat"] = r.p.value;
    j["q_hat"] = r.q.value;
    j["p_formula"] = r.p_formula;
    j["q_formula"] = r.q_formula;
    j["lnP_hat"] = r.log_density;
    j["lnP_classical"] = r.log_density_classical;
    j["delta"] = r.delta;
    j["flag"] = r.flag;
    j["flag_classical"] = r.flag_classical;
    j["bounds"] = {{"published", adde_bounds(r.published_bounds)},
                   {"run", adde_bounds(r.bounds)},
                   {"chain",
                    {{"log_variance_term", r.chain.log_variance_term},
                     {"quadratic_term", r.chain.quadratic_term},
                     {"composed", r.chain.composed}}}};
    j["observed_errors"] = adde_bounds(r.observed);
    j["ae_runs"] = {{"mean", runs_json(r.means.runs)},
                    {"variance", runs_json(r.variances.runs)},
                    {"p", to_json(r.p.run)},
                    {"q", to_json(r.q.run)}};
    j["ledger"] = to_json(r.ledger);
    return j;
}

ordered_json adkpca_json(const adkpca::ADKPCAReport& r) {
    auto consts = [](const adkpca::Constants& k) {
        return ordered_json{{"C", k.C}, {"C_prime", k.C_prime}, {"C_dprime", k.C_dprime}};
    };
    ordered_json budget = nullptr;
    if (r.budget) {
        const auto& b = *r.budget;
        budget = {{"epsilon", b.epsilon},
                  {"eps_mean", b.eps_mean},
                  {"eps_a", b.eps_a},
                  {"eps_a_published", b.eps_a_published},
                  {"eps_omega", b.eps_omega},
                  {"eps_b", b.eps_b},
                  {"needs_ideal", b.needs_ideal},
                  {"target", b.target},
                  {"planned_grover", b.planned_grover}};
    }
    ordered_json j;
    j["rows"] = r.rows;
    j["cols"] = r.cols;
    j["constants"] = {{"classical", consts(r.constants)}, {"used", consts(r.constants_used)}};
    j["retries"] = r.retries;
    j["t_bits"] = {{"mean", r.t_mean}, {"a", r.t_a}, {"omega", r.t_omega}, {"b", r.t_b}};
    j["budget"] = budget;
    j["mu_hat"] = r.means.values;
    j["mu_classical"] = r.classical.mu;
    j["a_hat"] = r.a.value;
    j["a_formula"] = r.a_formula;
    j["omega_hat"] = r.omegas.values;
    j["omega_formula"] = r.omega_formula;
    j["b_hat"] = r.b.value;
    j["distance"] = r.distance;
    j["distance_classical"] = r.distance_classical;
    j["quadratic"] = r.quadratic;
    j["quadratic_classical"] = r.quadratic_classical;
    j["f_hat"] = r.proximity;
    j["f_classical"] = r.proximity_classical;
    j["bounds"] = {{"published", kpca_bounds(r.published_bounds)}, {"run", kpca_bounds(r.bounds)}};
    j["observed_errors"] = kpca_bounds(r.observed);
    j["ae_runs"] = {{"mean", runs_json(r.means.runs)},
                    {"a", to_json(r.a.run)},
                    {"omega", runs_json(r.omegas.runs)},
                    {"b", to_json(r.b.run)}};
    j["ledger"] = to_json(r.ledger);
    return j;
}

ordered_json flaws_json(const flawlab::FlawReport& r) {
    auto sites = ordered_json::array();
    for (const auto& s : r.encoding) {
        sites.push_back({{"name", s.name},
                         {"encoding", flawlab::to_string(s.encoding)},
                         {"precondition_met", s.precondition_met},
                         {"labels_per_branch", s.labels_per_branch}});
    }
    const auto& p = r.normalization;
    auto actual = ordered_json::array();
    for (const auto& a : p.actual) actual.push_back({a.real(), a.imag()});
    const auto& e = r.expectation;
    ordered_json j;
    j["encoding"] = sites;
    j["superposition"] = {{"unit_rows", r.superposition.rows},
                          {"mu", r.superposition.mu},
                          {"N_mu", r.superposition.N_mu},
                          {"written_norm", r.superposition.written_norm},
                          {"norm_squared", r.superposition.state.norm_squared()}};
    j["normalization"] = {{"sampled_outcome", p.sampled_outcome},
                          {"probability", p.probability},
                          {"actual", actual},
                          {"claimed", p.claimed},
                          {"discrepancy", p.discrepancy}};
    j["expectation"] = {{"chi_reading", flawlab::to_string(e.reading)},
                        {"chi", e.chi.chi},
                        {"chi0", e.chi.chi0},
                        {"undefined", e.undefined},
                        {"m1", audit_json(e.m1)},
                        {"m2", audit_json(e.m2)},
                        {"lnP_claimed", e.log_density_claimed},
                        {"lnP", e.log_density},
                        {"notes", e.notes}};
    return j;
}

ordered_json envelope(const std::string& command, const ordered_json& body) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["generated_at"] = timestamp_now();
    j["command"] = command;
    for (const auto& [k, v] : body.items()) j[k] = v;
    return j;
}

std::string timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

}  // namespace qadsim::cli
