#include <exception>
#include <iostream>

#include "cli_common.hpp"
#include "exhawkes/errors.hpp"
#include "exhawkes/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exhawkes: transition-intensity estimation and forecasting for daily "
                 "event counts driven by a loosely defined exposure process"};
    app.set_version_flag("--version", exhawkes::version_string);
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "Read options from a key = value file (manifest format)");

    excli::register_simulate(app);
    excli::register_estimate(app);
    excli::register_forecast(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message
        return 2;
    } catch (const exhawkes::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const exhawkes::data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
