#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "qevo/manifest.hpp"
#include "qevo/report.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const qevo::ParsedCommand parsed = qevo::parse_args(args);
  if (!parsed.error.empty()) {
    std::cerr << parsed.error << '\n';
    return parsed.exit_code;
  }
  if (parsed.show_help) {
    std::cout << parsed.help_text;
    return 0;
  }
  try {
    return qevo::execute(parsed.manifest, std::cout);
  } catch (const std::exception& failure) {
    std::cerr << "error: " << failure.what() << '\n';
    return 1;
  }
}
