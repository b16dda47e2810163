#include "linetherm/cli.hpp"

#include "commands.hpp"
#include "report.hpp"

#include "linetherm/error.hpp"

#include <CLI11.hpp>

#include <exception>

#ifndef LINETHERM_VERSION
#define LINETHERM_VERSION "0.0.0"
#endif

namespace linetherm::cli {

const char* tool_version() noexcept { return LINETHERM_VERSION; }

namespace {

int report_error(std::ostream& err, int exit_code, std::string_view code, std::string_view message) {
    ordered_json doc;
    doc["error"] = {{"code", code}, {"message", message}, {"exit_code", exit_code}};
    err << doc.dump() << "\n";
    return exit_code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx;
    ctx.args = args;
    ctx.out = &out;

    CLI::App app{"Qubit-decoherence thermometry of cryogenic microwave lines", "linetherm"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));
    app.add_flag("--no-timestamp", ctx.no_timestamp, "Omit the timestamp from the run manifest (byte-stable output)");
    app.add_option("-o,--output", ctx.output_path, "Write the report to this file instead of stdout");
    app.add_option("--system-params", ctx.system_params_path,
                   std::string("SystemParams JSON (default: $") + kSystemParamsEnv + ", else device defaults)")
        ->check(CLI::ExistingFile);
    app.add_option("--format", ctx.format, "Report format for tabular commands")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    add_shotnoise(app, ctx);
    add_decay(app, ctx);
    add_heatpulse(app, ctx);
    add_fin(app, ctx);
    add_iqtemp(app, ctx);
    add_resonator(app, ctx);
    add_synth(app, ctx);

    // CLI11 parses in reverse order of a plain argv (program name first).
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::Success& e) {
        // --help / --version: CLI11 prints the right subcommand's text.
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return report_error(err, kExitValidation, "UsageError", e.what());
    } catch (const Error& e) {
        const int code = is_numerical_failure(e.code()) ? kExitNumerical : kExitValidation;
        return report_error(err, code, to_string(e.code()), e.what());
    } catch (const std::exception& e) {
        return report_error(err, kExitNumerical, "InternalError", e.what());
    }
    return kExitOk;
}

}  // namespace linetherm::cli
