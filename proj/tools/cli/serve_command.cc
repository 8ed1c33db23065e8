#include <iostream>

#include "cli/commands.h"
#include "cli/common.h"
#include "fem/service/service.h"

namespace fem::cli {

int ServeMain(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"HTTP service for projection, recommendation and judgment capture"};
  std::string config_path;
  int port = -1;
  bool quiet = false;
  app.add_option("--config", config_path, "Service configuration (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--port", port, "Override the configured port");
  AddVerbosity(app, quiet);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  return Report(err, [&] {
    auto config = service::ServiceConfig::Load(config_path);
    if (port >= 0) config.port = port;
    service::Serve(config);
  });
}

}  // namespace fem::cli
