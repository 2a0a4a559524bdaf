#include <iostream>
#include <string>

#include "cavgeo_cli/app.hpp"

extern char** environ;

int main(int argc, char** argv) {
  cavgeo::cli::EnvList env;
  for (char** e = environ; e && *e; ++e) {
    const std::string entry(*e);
    const auto eq = entry.find('=');
    if (eq != std::string::npos) env.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
  }
  return cavgeo::cli::run_app(argc, argv, std::cout, std::cerr, env);
}
