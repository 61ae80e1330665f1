// Command-line front end: run a scenario from a config file, or sweep one
// key over a list of values and emit one CSV row per value.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qkdnet/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qkdnet::Error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw qkdnet::Error("cannot open output file: " + out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-memory key distribution network simulator"};
    app.require_subcommand(1);

    std::string config_path, format = "text", out_path;
    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--format", format, "text or csv_row")
        ->check(CLI::IsMember({"text", "csv_row"}));
    run->add_option("--out", out_path, "output path (default stdout)");

    std::string sweep_config, sweep_key, sweep_values;
    auto* sweep = app.add_subcommand("sweep", "run a scenario once per value of one key");
    sweep->add_option("--config", sweep_config, "scenario config file")->required();
    sweep->add_option("--key", sweep_key, "config key to vary")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep->add_option("--out", out_path, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = qkdnet::parse_config(read_file(config_path));
            const auto report = qkdnet::run_scenario(cfg);
            std::string text;
            if (format == "csv_row") {
                text = qkdnet::csv_header() + "\n" +
                       qkdnet::emit_report(report, qkdnet::ReportFormat::CsvRow) + "\n";
            } else {
                text = qkdnet::emit_report(report, qkdnet::ReportFormat::Text);
            }
            write_output(out_path, text);
        } else {
            const std::string text = read_file(sweep_config);
            std::ostringstream out;
            out << qkdnet::csv_header() << '\n';
            std::stringstream values(sweep_values);
            std::string value;
            while (std::getline(values, value, ',')) {
                const auto cfg = qkdnet::parse_config(text, {{sweep_key, value}});
                out << qkdnet::emit_report(qkdnet::run_scenario(cfg),
                                           qkdnet::ReportFormat::CsvRow)
                    << '\n';
            }
            write_output(out_path, out.str());
        }
    } catch (const qkdnet::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const qkdnet::RangeError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
