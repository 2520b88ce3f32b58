#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "steinlab/blaschke_analytics.hpp"
#include "steinlab/criteria_suite.hpp"
#include "steinlab/harmonic_majorants.hpp"
#include "steinlab/numerics.hpp"
#include "steinlab/random_sequences.hpp"
#include "steinlab/stochastic_lab.hpp"

namespace steinlab {

// %.17g round-trips doubles exactly, which keeps file digests stable.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct EmittedFile {
    std::string path;
    std::uint64_t digest = 0;
};

inline std::uint64_t write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
    return fnv1a64(content.data(), content.size());
}

inline std::string battery_csv(const std::vector<BatteryRow>& rows) {
    std::string s = "lemma,p,r,s,method,estimate,error,bound_ref,ratio,pass\n";
    for (const auto& row : rows) {
        s += csv_field(row.lemma) + ',' + format_full(row.p) + ',' + format_full(row.r) + ',' +
             format_full(row.s) + ',' + row.method + ',' + format_full(row.estimate) + ',' +
             format_full(row.error) + ',' + format_full(row.bound_ref) + ',' +
             format_full(row.ratio) + ',' + (row.pass ? "1" : "0") + '\n';
    }
    return s;
}

inline std::string phi_csv(const PhiLambdaTable& table) {
    std::string s = "n,r,theta,log_inv_B\n";
    for (const auto& e : table.entries) {
        s += std::to_string(e.n) + ',' + format_full(e.radius) + ',' + format_full(e.theta) +
             ',' + format_full(e.value) + '\n';
    }
    return s;
}

inline std::string sample_csv(const SequenceSample& sample) {
    std::string s = "n,r,gap,theta\n";
    for (std::size_t i = 0; i < sample.size(); ++i) {
        s += std::to_string(i) + ',' + format_full(sample.radius[i]) + ',' +
             format_full(sample.gap[i]) + ',' + format_full(sample.theta[i]) + '\n';
    }
    return s;
}

inline std::string carleson_csv(const std::vector<CarlesonRow>& rows) {
    std::string s = "n,r,s_log_gap,logB_lower,harnack_ceiling,naftalevic_product\n";
    for (const auto& row : rows) {
        s += std::to_string(row.n) + ',' + format_full(row.r) + ',' +
             format_full(row.s_log_gap) + ',' + format_full(row.logB_lower) + ',' +
             format_full(row.harnack_ceiling) + ',' + format_full(row.naftalevic_product) + '\n';
    }
    return s;
}

// JSON adapters (nlohmann ADL).
inline void to_json(nlohmann::json& j, const EstimatorResult& e) {
    j = {{"mean", e.mean},
         {"std_error", e.std_error},
         {"n_samples", e.n_samples},
         {"method", e.method == EstimatorResult::Method::monte_carlo ? "monte_carlo"
                                                                     : "quadrature"},
         {"achieved_error", e.achieved_error},
         {"converged", e.converged}};
}

inline void to_json(nlohmann::json& j, const BatteryRow& r) {
    j = {{"lemma", r.lemma},       {"p", r.p},
         {"r", r.r},               {"s", r.s},
         {"method", r.method},     {"estimate", r.estimate},
         {"error", r.error},       {"bound_ref", r.bound_ref},
         {"ratio", r.ratio},       {"pass", r.pass}};
}

inline void to_json(nlohmann::json& j, const LemmaVerdict& v) {
    j = {{"lemma_id", v.lemma_id}, {"grid", v.grid},
         {"rows", v.rows},         {"ratios", v.ratios},
         {"bound_constant", v.bound_constant}, {"pass", v.pass}};
}

inline void to_json(nlohmann::json& j, const MajorantCertificate& c) {
    j = {{"p", c.p},           {"margins", c.margins}, {"psi_l1", c.psi_l1},
         {"psi_lp", c.psi_lp}, {"sup_K", c.sup_k},     {"min_margin", c.min_margin},
         {"valid", c.valid}};
}

inline void to_json(nlohmann::json& j, const BlaschkeSummary& b) {
    j = {{"sum", b.sum}, {"tail_convergent", b.tail_convergent}};
}

inline void to_json(nlohmann::json& j, const SeparationReport& s) {
    j = {{"weak", s.weak}, {"strong", s.strong}};
}

inline void to_json(nlohmann::json& j, const CriterionReport& r) {
    nlohmann::json sums = nlohmann::json::object();
    for (const auto& [p, x] : r.criterion_sums) sums[format_full(p)] = x;
    nlohmann::json incs = nlohmann::json::object();
    for (const auto& [p, v] : r.prefix_increments) incs[format_full(p)] = v;
    nlohmann::json decay = nlohmann::json::object();
    for (const auto& [p, b] : r.increments_decaying) decay[format_full(p)] = b;
    nlohmann::json hp = nlohmann::json::object();
    for (const auto& [p, b] : r.hp_certified) hp[format_full(p)] = b;
    j = {{"blaschke", r.blaschke},
         {"criterion_sums", sums},
         {"naftalevic_sup", r.naftalevic_sup_value},
         {"separation", r.sep},
         {"certificates", r.certificates},
         {"has_duplicates", r.has_duplicates},
         {"prefix_checkpoints", r.prefix_checkpoints},
         {"prefix_increments", incs},
         {"increments_decaying", decay},
         {"blaschke_verdict", r.blaschke_verdict},
         {"hp_certified", hp},
         {"smirnov_certified", r.smirnov_certified}};
}

inline void to_json(nlohmann::json& j, const StolzCoverReport& r) {
    j = {{"k", r.k},
         {"alpha", r.alpha},
         {"candidates", r.candidates},
         {"vertices", r.vertices},
         {"covered", r.covered},
         {"total", r.total},
         {"covered_fraction", r.covered_fraction}};
}

inline void to_json(nlohmann::json& j, const CarlesonRow& r) {
    j = {{"n", r.n},
         {"r", r.r},
         {"s_log_gap", r.s_log_gap},
         {"log_rho_target", r.log_rho_target},
         {"log_rho_reproduced", r.log_rho_reproduced},
         {"logB_lower", r.logB_lower},
         {"harnack_ceiling", r.harnack_ceiling},
         {"naftalevic_product", r.naftalevic_product},
         {"ratio", r.ratio}};
}

inline void to_json(nlohmann::json& j, const CriterionWindow& w) {
    j = {{"checkpoint", w.checkpoint},
         {"driver_own", w.driver_own},
         {"tail_weight", w.tail_weight},
         {"median_sum", w.median_sum},
         {"median_increment", w.median_increment},
         {"min_increment", w.min_increment},
         {"max_increment", w.max_increment}};
}

inline void to_json(nlohmann::json& j, const CriterionDistribution& d) {
    j = {{"p", d.p},
         {"checkpoints", d.checkpoints},
         {"sums", d.sums},
         {"increments", d.increments},
         {"windows", d.windows},
         {"median_increments_decreasing", d.median_increments_decreasing},
         {"increments_positive", d.increments_positive}};
}

inline void to_json(nlohmann::json& j, const AlphaLambdaCheck& c) {
    j = {{"balayage_norm", c.balayage_norm},
         {"weighted_sum", c.weighted_sum},
         {"norm_within_unit", c.norm_within_unit},
         {"quadrature_error", c.quadrature_error}};
}

inline void to_json(nlohmann::json& j, const AlphaLambdaBattery& b) {
    j = {{"checks", b.checks},
         {"max_weighted_sum", b.max_weighted_sum},
         {"all_normalized", b.all_normalized}};
}

struct RunManifest {
    std::string version = "0.1.0";
    nlohmann::json config_echo;
    double wall_clock_seconds = 0.0;
    std::vector<std::pair<std::string, double>> achieved_errors;
    std::vector<EmittedFile> outputs;
    bool pass = true;
};

inline nlohmann::json manifest_json(const RunManifest& m) {
    nlohmann::json errs = nlohmann::json::array();
    for (const auto& [task, err] : m.achieved_errors)
        errs.push_back({{"task", task}, {"achieved_error", err}});
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& f : m.outputs) {
        char digest[20];
        std::snprintf(digest, sizeof(digest), "%016llx",
                      static_cast<unsigned long long>(f.digest));
        outs.push_back({{"path", f.path}, {"fnv1a64", std::string(digest)}});
    }
    return {{"version", m.version},
            {"config", m.config_echo},
            {"wall_clock_seconds", m.wall_clock_seconds},
            {"achieved_errors", errs},
            {"outputs", outs},
            {"pass", m.pass}};
}

}  // namespace steinlab
