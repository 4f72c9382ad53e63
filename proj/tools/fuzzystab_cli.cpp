#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fuzzystab/harness.hpp"

namespace hs = fuzzystab::harness;

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy stability experiments: axioms, extraction, bound verification"};
    app.require_subcommand(1);

    hs::RunOptions opts;
    std::string format = "json";

    struct Sub {
        const char* name;
        const char* help;
        hs::Command command;
    };
    const Sub subs[] = {
        {"check-axioms", "Check fuzzy norm axioms on sampled grids", hs::Command::check_axioms},
        {"extract", "Extract limit components at sample points", hs::Command::extract},
        {"verify", "Check hypotheses and verify the stability bound", hs::Command::verify},
        {"run", "Full pipeline", hs::Command::run},
    };
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", opts.config_path, "Experiment config (JSON)")->required();
        sub->add_option("--out-dir", opts.out_dir, "Report directory")->capture_default_str();
        sub->add_option("--format", format, "Report format")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        const hs::Command cmd = s.command;
        sub->callback([&opts, cmd] { opts.command = cmd; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : hs::kExitBadConfig;
    }
    opts.format = hs::parse_format(format);
    return hs::run(opts, std::cerr);
}
