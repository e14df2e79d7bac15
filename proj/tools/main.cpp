#include "mabhet/cli/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int
main(int argc, char** argv)
{
    using namespace mabhet::cli;

    CLI::App app{"Throughput model and Monte Carlo oracle for cache-enabled mmWave HetNets with in-band backhaul"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";

    auto* run = app.add_subcommand("run", "Evaluate the sweep described by a config file");
    run->add_option("config", config, "YAML config")->required();
    run->add_option("-o,--out-dir", out_dir, "Directory for relative output paths");

    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    validate->add_option("config", config, "YAML config")->required();

    auto* compare = app.add_subcommand("mc-compare", "Monte Carlo association and coverage against the analysis");
    compare->add_option("config", config, "YAML config")->required();
    compare->add_option("-o,--out-dir", out_dir, "Directory for relative output paths");

    FigureOptions fig;
    auto* figures = app.add_subcommand("figures", "Write the figure data sets (fig2.csv ... fig5.csv)");
    figures->add_option("-o,--out-dir", fig.out_dir, "Output directory")->capture_default_str();
    figures->add_option("--cache-step", fig.cache_step, "Cache grid step for fig4")->capture_default_str();
    figures->add_option("--eta-points", fig.eta_points, "Access-share grid points")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
        {
            return RunCommand(config, out_dir, std::cerr);
        }
        if (*validate)
        {
            return ValidateCommand(config, std::cerr);
        }
        if (*compare)
        {
            return McCompareCommand(config, out_dir, std::cout);
        }
        return FiguresCommand(fig, std::cerr);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
