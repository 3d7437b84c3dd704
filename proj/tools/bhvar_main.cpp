// bhvar — batch front-end: verify / evolve / cat / weights / dual.

#include "bhvar/cli_config.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

bhvar::json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config \"" + path + "\"");
    try {
        return bhvar::json::parse(in);
    } catch (const bhvar::json::parse_error& err) {
        throw std::invalid_argument(std::string("config parse error: ") + err.what());
    }
}

std::string output_report_path(const bhvar::json& doc, const std::string& fallback) {
    if (doc.contains("output") && doc.at("output").contains("report")) {
        return doc.at("output").at("report").get<std::string>();
    }
    return fallback;
}

void write_json_file(const std::string& path, const bhvar::json& body) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << body.dump(2) << "\n";
}

int cmd_verify(const std::string& scope, const std::string& out_path) {
    const auto results = bhvar::run_identity_suite(scope);
    for (const auto& r : results) {
        std::printf("%s %-42s residual=%.3e tol=%.3e  %s\n", r.pass ? "PASS" : "FAIL",
                    r.anchor.c_str(), r.residual, r.tolerance, r.name.c_str());
    }
    if (!out_path.empty()) {
        write_json_file(out_path, bhvar::report_to_json(results));
    }
    return bhvar::all_passed(results) ? 0 : 1;
}

int cmd_evolve(const std::string& config_path) {
    const bhvar::RunConfig config = bhvar::parse_config(load_document(config_path));
    const bhvar::EvolveSummary result = bhvar::run_evolution(config);
    std::printf("wrote %s and %s (final_time=%s)\n", config.csv_path.c_str(),
                config.summary_path.c_str(),
                bhvar::format_csv_double(result.summary.at("final_time").get<double>()).c_str());
    if (!result.ok) {
        std::fprintf(stderr, "evolve: run aborted on a non-finite state at t=%g\n",
                     result.summary.at("aborted_at").get<double>());
        return 1;
    }
    return 0;
}

int cmd_report(const std::string& config_path, const std::string& kind,
               const std::string& fallback_name) {
    const bhvar::json doc = load_document(config_path);
    bhvar::json report;
    if (kind == "weights") report = bhvar::run_weights(doc);
    if (kind == "dual") report = bhvar::run_dual(doc);
    if (kind == "cat") report = bhvar::run_cat(doc);
    const std::string path = output_report_path(doc, fallback_name);
    write_json_file(path, report);
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent-state schemes for boson lattices: verification and batch runs"};
    app.require_subcommand(1);

    std::string scope = "all";
    std::string verify_out;
    CLI::App* verify = app.add_subcommand("verify", "run the identity suite");
    verify->add_option("--scope", scope, "all|algebra|dynamics|duality|cats");
    verify->add_option("--out", verify_out, "write the JSON report here");

    std::string evolve_config;
    CLI::App* evolve = app.add_subcommand("evolve", "integrate a configured trajectory");
    evolve->add_option("--config", evolve_config, "JSON config file")->required();

    std::string cat_config;
    CLI::App* cat = app.add_subcommand("cat", "localized families and their superpositions");
    cat->add_option("--config", cat_config, "JSON config file")->required();

    std::string weights_config;
    CLI::App* weights = app.add_subcommand("weights", "fixed-N weights of a coherent state");
    weights->add_option("--config", weights_config, "JSON config file")->required();

    std::string dual_config;
    CLI::App* dual = app.add_subcommand("dual", "site<->momentum duality report");
    dual->add_option("--config", dual_config, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(scope, verify_out);
        if (evolve->parsed()) return cmd_evolve(evolve_config);
        if (cat->parsed()) return cmd_report(cat_config, "cat", "cat.json");
        if (weights->parsed()) return cmd_report(weights_config, "weights", "weights.json");
        if (dual->parsed()) return cmd_report(dual_config, "dual", "dual.json");
    } catch (const std::exception& err) {
        std::fprintf(stderr, "bhvar: %s\n", err.what());
        return 2;
    }
    return 0;
}
