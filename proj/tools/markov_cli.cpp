#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "markov/markov.hpp"

int main(int argc, char** argv)
{
    using namespace markov;

    CLI::App app{"Markov numbers, Lagrange sums and uniqueness checks"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    RunConfig config;
    std::optional<std::uint64_t> limit_n;
    std::optional<std::string> limit_value;
    std::optional<unsigned> precision;
    std::optional<std::string> checkpoint;
    std::optional<std::string> output;
    std::optional<unsigned> digits;
    std::string format;
    std::vector<std::uint64_t> samples;

    struct CommandInfo {
        char const* name;
        char const* help;
    };
    CommandInfo const commands[] = {
        {"enumerate", "Markov numbers in increasing order with their triples"},
        {"sum", "remainders R_n of the Lagrange series against the tail model"},
        {"check-muc", "verify uniqueness of Markov triples up to a bound (JSON)"},
        {"mcshane", "McShane identity partial sums over slope boxes"},
        {"orbits", "slopes with Markov number, trace and dihedral orbit size"},
    };
    for (auto const& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--limit-n", limit_n, "count limit (distinct values, or slope height)");
        sub->add_option("--limit-value", limit_value, "value bound, e.g. 1000000, 1e6 or 10^1000");
        sub->add_option("--precision", precision, "working precision in decimal digits");
        sub->add_option("--checkpoint", checkpoint, "checkpoint file to resume from and save to");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", output, "output file (default: stdout)");
        sub->add_option("--sample", samples, "extra sample points for sum")->delimiter(',');
        sub->add_option("--digits", digits, "significant digits printed for reals");
        sub->callback([&config, name = std::string(c.name)] { config.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::CallForVersion const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        config.limit_n = limit_n;
        if (limit_value)
            config.limit_value = parse_integer_bound(*limit_value);
        config.precision = precision;
        config.checkpoint = checkpoint;
        config.output = output;
        config.digits = digits;
        config.samples = samples;
        if (format.empty())
            config.format = config.command == "check-muc" ? OutputFormat::json : OutputFormat::csv;
        else
            config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    } catch (usage_error const& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    return run_command(config, std::cout, std::cerr);
}
