#ifndef BERGLAB_COMMANDS_HPP
#define BERGLAB_COMMANDS_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "berglab/checks.hpp"
#include "berglab/config.hpp"
#include "berglab/corrector.hpp"
#include "berglab/equivariant.hpp"
#include "berglab/expansion.hpp"
#include "berglab/io.hpp"
#include "berglab/manifest.hpp"

namespace berglab {

// Command drivers behind the CLI.  Each one validates its configuration,
// computes, writes CSV outputs plus a manifest into the output directory, and
// returns the process exit code: 0 pass, 1 computation/validation error,
// 2 invariant failure.  Validation errors are thrown; the CLI maps them to
// exit code 1.

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInvariantFailure = 2;

namespace detail {

inline std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Lift lift_from_config(const RunConfig& cfg) {
    if (cfg.lift_at.empty()) return Lift::constant(cfg.lift);
    std::map<int, Rational> table = cfg.lift_at;
    for (int m : cfg.m_list)
        if (!table.count(m)) table[m] = cfg.lift;
    return Lift::table(std::move(table));
}

} // namespace detail

// Bergman density profiles and gram diagonals for every configured power.
inline int cmd_density(const RunConfig& cfg) {
    validate_config(cfg);
    const auto out = detail::prepare_out_dir(cfg);
    RunManifest manifest("density", cfg);
    const InvariantMetric g = metric_from_config(cfg);

    CsvBuilder density_csv({"m", "x", "K", "C_q", "K_minus_Cq"});
    CsvBuilder gram_csv({"m", "i", "G_i"});
    nlohmann::ordered_json sup_dev;
    for (int m : cfg.m_list) {
        const SectionGram gr = gram(m, g);
        if (gr.underresolved)
            std::cerr << "warning: power " << m << " exceeds the grid's design maximum ("
                      << g.grid().design_max_power() << "); refine with --nodes\n";
        for (int i = 0; i <= m; ++i)
            gram_csv.row({std::to_string(m), std::to_string(i), format_number(gr.diag[i])});
        const DensityProfile profile = density(gr, g);
        const double cq = c_q(m).to_double();
        double sup = 0.0;
        for (int j = 0; j < g.grid().node_count(); ++j) {
            const double dev = profile.values[j] - cq;
            sup = std::max(sup, std::fabs(dev));
            density_csv.row({std::to_string(m), format_number(g.grid().nodes()[j]),
                             format_number(profile.values[j]), format_number(cq),
                             format_number(dev)});
        }
        sup_dev[std::to_string(m)] = sup;
    }
    manifest.emit(out, "density.csv", density_csv.content());
    manifest.emit(out, "gram.csv", gram_csv.content());
    manifest.summary("sup_deviation", sup_dev);
    manifest.write(out);
    return kExitPass;
}

// Expansion-coefficient fit and the a1 = sigma/2 comparison.
inline int cmd_fit(const RunConfig& cfg) {
    validate_config(cfg);
    const auto out = detail::prepare_out_dir(cfg);
    RunManifest manifest("fit", cfg);
    const InvariantMetric g = metric_from_config(cfg);

    const ExpansionFit fit = fit_expansion(g, cfg.m_list, {.order = cfg.fit_order});
    const std::vector<double> sigma = scalar_curvature(g);

    CsvBuilder csv({"x", "a1", "a2", "sigma_half", "abs_error"});
    double sup_gap = 0.0;
    for (int j = 0; j < g.grid().node_count(); ++j) {
        const double gap = std::fabs(fit.a1[j] - 0.5 * sigma[j]);
        sup_gap = std::max(sup_gap, gap);
        csv.row({format_number(g.grid().nodes()[j]), format_number(fit.a1[j]),
                 format_number(fit.a2[j]), format_number(0.5 * sigma[j]), format_number(gap)});
    }
    manifest.emit(out, "fit.csv", csv.content());
    manifest.summary("a1_sup_gap", sup_gap);
    manifest.summary("residual_norm", fit.residual_norm);
    manifest.summary("condition", fit.condition);
    const bool reliable = fit.residual_norm <= cfg.tol_fit_residual;
    manifest.summary("reliable", reliable);
    manifest.set_pass(reliable && sup_gap <= cfg.tol_a1);
    manifest.write(out);
    return manifest.pass() ? kExitPass : kExitInvariantFailure;
}

// Character integrals, the per-power identities, and the constant-lift
// consistency report.
inline int cmd_obstruction(const RunConfig& cfg) {
    validate_config(cfg);
    const auto out = detail::prepare_out_dir(cfg);
    RunManifest manifest("obstruction", cfg);
    const InvariantMetric g = metric_from_config(cfg);
    const Lift lift = detail::lift_from_config(cfg);

    CsvBuilder csv(
        {"m", "lift_constant", "chi", "obstruction", "weight_identity_gap", "character_integral"});
    for (int m : cfg.m_list) {
        const double chi_m = chi(lift, m, g);
        csv.row({std::to_string(m), lift.at(m).str(), format_number(chi_m),
                 format_number(static_cast<double>(m) * m * chi_m),
                 format_number(weight_identity_gap(m, g)),
                 format_number(character_residual(lift, std::vector<int>{m}, g))});
    }
    manifest.emit(out, "obstruction.csv", csv.content());

    // constant-lift hypothesis check across the whole list
    const CharacterReport report = character_report(lift, cfg.m_list, g, cfg.tol_identity);
    manifest.summary("chi_spread", report.max_chi_spread);
    manifest.summary("sl_normalized", report.sl_normalized);
    if (!report.reason.empty()) manifest.summary("reason", report.reason);
    manifest.set_pass(report.pass);
    manifest.write(out);
    return report.pass ? kExitPass : kExitInvariantFailure;
}

// Corrector run: optional injected spoiler, a number of steps, and the order
// trace.
inline int cmd_correct(const RunConfig& cfg) {
    validate_config(cfg);
    const auto out = detail::prepare_out_dir(cfg);
    RunManifest manifest("correct", cfg);

    ApproxState state = make_state(metric_from_config(cfg));
    InvariantFunction psi = potential_from_pairs(cfg.inject);
    const bool injected = psi.max_abs_coefficient() > 0.0;
    if (injected) inject(state, psi, cfg.inject_order);

    CsvBuilder trace({"level", "m", "sup_deviation", "slope", "v_residual"});
    const auto trace_level = [&](const ApproxState& s, double v_residual) -> OrderReport {
        const OrderReport report = verify_order(s, cfg.m_list);
        const std::string slope =
            report.exact ? std::string("exact") : format_number(report.slope);
        for (std::size_t r = 0; r < report.m_list.size(); ++r)
            trace.row({std::to_string(s.level), std::to_string(report.m_list[r]),
                       format_number(report.sup_deviations[r]), slope,
                       format_number(v_residual)});
        return report;
    };

    OrderReport current = trace_level(state, 0.0);
    nlohmann::ordered_json per_step = nlohmann::ordered_json::array();
    bool pass = true;
    for (int s = 1; s <= cfg.steps; ++s) {
        const StepResult result = step(state, cfg.m_list, cfg.tol_kernel_residual * 10);
        state = result.state;
        current = trace_level(state, result.v_residual);
        nlohmann::ordered_json entry;
        entry["level"] = state.level;
        entry["v_residual"] = result.v_residual;
        entry["u_sup"] = result.u_sup;
        if (injected && s == 1) {
            const double recovery = (result.recovered + psi).sup_norm(state.base.grid()) /
                                    std::max(psi.sup_norm(state.base.grid()), 1e-300);
            entry["recovery_error"] = recovery;
            pass = pass && recovery <= 0.1;
        }
        entry["slope"] = current.exact ? nlohmann::ordered_json("exact")
                                       : nlohmann::ordered_json(current.slope);
        per_step.push_back(entry);
        const double target = state.level + 2 - cfg.slope_slack;
        pass = pass && (current.exact || current.slope >= target);
    }
    manifest.emit(out, "trace.csv", trace.content());
    manifest.emit(out, "state.txt", state_to_kv(state));
    manifest.summary("steps", per_step);
    manifest.set_pass(pass);
    manifest.write(out);
    return pass ? kExitPass : kExitInvariantFailure;
}

// Full invariant battery; one line per invariant on stdout.
inline int cmd_check(const RunConfig& cfg) {
    const auto out = detail::prepare_out_dir(cfg);
    RunManifest manifest("check", cfg);
    const std::vector<CheckResult> results = run_invariant_checks(cfg);

    CsvBuilder csv({"name", "value", "threshold", "pass", "detail"});
    bool all_pass = true;
    for (const CheckResult& r : results) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " (val=" << format_number(r.value)
                  << ", thr=" << format_number(r.threshold) << ")\n";
        csv.row({r.name, format_number(r.value), format_number(r.threshold),
                 r.pass ? "1" : "0", r.detail});
    }
    manifest.emit(out, "check.csv", csv.content());
    manifest.summary("checks_total", results.size());
    manifest.summary("checks_failed",
                     static_cast<int>(std::count_if(results.begin(), results.end(),
                                                    [](const CheckResult& r) { return !r.pass; })));
    manifest.set_pass(all_pass);
    manifest.write(out);
    return all_pass ? kExitPass : kExitInvariantFailure;
}

} // namespace berglab

#endif
