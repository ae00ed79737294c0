#include <CLI11.hpp>

#include "isc/api.hpp"

int main(int argc, char** argv) {
    isc::ServerConfig config;
    std::string rules_file;

    CLI::App app{"Indicator specification card server"};
    app.add_option("--host", config.host, "Listen address")->envname("ISC_HOST")->capture_default_str();
    app.add_option("--port", config.port, "Listen port (0 picks a free one)")
        ->envname("ISC_PORT")
        ->check(CLI::Range(0, 65535))
        ->capture_default_str();
    app.add_option("--data-dir", config.data_dir, "Directory for cards and drafts")
        ->envname("ISC_DATA_DIR")
        ->capture_default_str();
    app.add_option("--rules-file", rules_file, "JSON rules table replacing the built-in one")
        ->envname("ISC_RULES_FILE");
    CLI11_PARSE(app, argc, argv);

    if (!rules_file.empty()) config.rules_file = rules_file;
    return isc::serve(config);
}
