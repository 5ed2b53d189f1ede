#include "refmeasure/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"refmeasure: reference-measure and risk-parameter elicitation on finite spaces"};
    app.require_subcommand(1);

    refmeasure::cli::Args args;

    const std::pair<const char*, const char*> commands[] = {
        {"analyze", "Properties, support-set extrema, and candidate measure for a target"},
        {"elicit-var", "Two-branch dyadic elicitation for 0/1 capacities"},
        {"converge", "Singleton-total series across uniform refinements (CSV)"},
        {"demo", "Named desk-scale scenario with golden-file comparison"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", args.config_path, "JSON run configuration")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", args.out_path, "output report path")->required();
        CLI::Option* s = sub->add_option("--seed", args.seed, "override the config seed");
        sub->add_flag("--golden-update", args.golden_update,
                      "rewrite the demo golden file instead of comparing");
        sub->callback([&args, name = std::string(name)] { args.command = name; });
        sub->parse_complete_callback([&args, s] { args.seed_given = s->count() > 0; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return refmeasure::cli::run(args);
}
