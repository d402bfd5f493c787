// Batch driver for the bi-fidelity wildfire surrogate pipeline: offline
// training, online prediction, Monte-Carlo UQ, and cost reporting.

#include "pyro/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Geometry-aligned bi-fidelity surrogate pipeline for wildfire spread"};
    app.require_subcommand(1);

    std::string config_path;
    auto* offline = app.add_subcommand("offline", "Train and persist a surrogate model");
    offline->add_option("config", config_path, "JSON run configuration")->required();

    pyro::PredictOptions popts;
    auto* predict = app.add_subcommand("predict", "Evaluate surrogates at query points");
    predict->add_option("model", popts.model_dir, "Trained model directory")->required();
    predict->add_option("--z", popts.z_literals,
                        "Query point as comma-separated values (repeatable)");
    predict->add_option("--z-csv", popts.z_csv, "CSV of query points (header = parameter names)");
    predict->add_option("--method", popts.methods, "Methods to evaluate: mf, cf, lf")
        ->default_val(std::vector<std::string>{"mf"});
    predict->add_option("--hf-reference", popts.hf_reference,
                        "HF snapshot file used as the error reference");
    predict->add_flag("--run-hf", popts.run_hf,
                      "Simulate an HF reference per query (expensive)");

    std::string uq_model;
    int uq_count = 50;
    uint64_t uq_seed = 0;
    bool uq_seed_given = false;
    bool with_hf = false;
    auto* uq = app.add_subcommand("uq", "Propagate uncertainty and emit QoI densities");
    uq->add_option("model", uq_model, "Trained model directory")->required();
    uq->add_option("--n", uq_count, "Number of LHS test samples")->required();
    auto* seed_opt = uq->add_option("--seed", uq_seed, "Test-set seed");
    uq->add_flag("--with-hf", with_hf, "Also run the HF tier (expensive)");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "Summarize costs and break-even point");
    report->add_option("dir", report_dir, "Output directory to scan")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    uq_seed_given = seed_opt->count() > 0;

    if (offline->parsed()) return pyro::cmd_offline(config_path, std::cout);
    if (predict->parsed()) return pyro::cmd_predict(popts, std::cout);
    if (uq->parsed()) {
        if (!uq_seed_given) {
            // Fall back to the uq_seed recorded in the model's configuration.
            std::cout << "note: --seed not given; using the configured uq_seed\n";
        }
        return pyro::cmd_uq_with_default_seed(uq_model, uq_count,
                                              uq_seed_given ? std::optional<uint64_t>(uq_seed)
                                                            : std::nullopt,
                                              with_hf, std::cout);
    }
    if (report->parsed()) return pyro::cmd_report(report_dir, std::cout);
    return 1;
}
