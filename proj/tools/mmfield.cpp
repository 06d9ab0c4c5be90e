#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mmfield/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mmfield: multizone mode-matching sound field reproduction"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    double frequency = 0.0;
    double lambda_factor = 0.0;
    double sigma_floor = 0.0;
    double speed_of_sound = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--frequency", frequency, "override frequency_hz");
        cmd->add_option("--lambda-factor", lambda_factor, "override lambda_factor");
        cmd->add_option("--sigma-floor", sigma_floor, "override sigma_floor");
        cmd->add_option("--speed-of-sound", speed_of_sound, "override speed_of_sound");
    };

    for (const char* name : {"validate", "solve", "sweep", "binaural"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();

    mmfield::Scenario scenario;
    try {
        scenario = mmfield::load_scenario(scenario_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return mmfield::kExitValidation;
    }
    if (frequency > 0.0) scenario.frequency_hz = frequency;
    if (lambda_factor > 0.0) scenario.lambda_factor = lambda_factor;
    if (sigma_floor > 0.0) scenario.sigma_floor = sigma_floor;
    if (speed_of_sound > 0.0) scenario.speed_of_sound = speed_of_sound;

    return mmfield::run_command(command, scenario, out_dir, std::cout);
}
