#include <iostream>
#include <string>
#include <vector>

#include "kornlab/cli/dispatch.hpp"

int main(int argc, char** argv) {
  using namespace kornlab;
  cli::RunConfig cfg;
  try {
    cfg = cli::parse_config(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const cli::HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const Error& e) {
    std::cerr << "kornlab: " << e.what() << "\n";
    return 2;
  }

  try {
    const cli::Report report = cli::dispatch(cfg);
    cli::emit_report(report, cfg.format, cfg.output_path);
    return report.exit_code();
  } catch (const Error& e) {
    std::cerr << "kornlab: " << e.what() << "\n";
    return e.code() == ErrorCode::UsageError ? 2 : 1;
  }
}
