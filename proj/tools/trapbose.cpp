#include <optional>
#include <string>

#include <CLI11.hpp>

#include "trapbose/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Two trapped bosons with a weak central interaction: perturbed "
                 "energies and radial wavefunctions via a secular-determinant solver "
                 "cross-checked by direct diagonalization."};
    app.set_version_flag("--version", trapbose::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    int jobs = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (sectioned text or JSON)")
            ->required();
        sub->add_option("--out", out_dir, "output directory (overrides [output] directory)");
        sub->add_option("--jobs", jobs, "concurrent workers for sweep points")
            ->check(CLI::PositiveNumber);
    };
    CLI::App* solve = app.add_subcommand("solve", "levels, diagnostics, wavefunctions");
    CLI::App* sweep = app.add_subcommand("sweep", "scan one parameter (g, sigma, V0, a, N)");
    CLI::App* conv = app.add_subcommand("converge", "basis-size ladder with plateau detection");
    add_common(solve);
    add_common(sweep);
    add_common(conv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // command-line problems are configuration errors
    }

    trapbose::Command cmd = trapbose::Command::solve;
    if (sweep->parsed()) cmd = trapbose::Command::sweep;
    else if (conv->parsed()) cmd = trapbose::Command::converge;

    return trapbose::run_command(cmd, config_path, out_dir, jobs);
}
