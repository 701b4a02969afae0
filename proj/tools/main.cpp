#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "geoctx/cli.hpp"

int main(int argc, char** argv) {
  using namespace geoctx::cli;
  Request req;
  std::string format = "json";

  CLI::App app{"Check sites, sheaves and schemes described in .geo files"};
  std::string command_list;
  for (const auto& c : commands()) command_list += (command_list.empty() ? "" : ", ") + c;
  app.add_option("command", req.command, "One of: " + command_list)->required()->check(CLI::IsMember(commands()));
  app.add_option("file", req.file, "Context document")->required();
  app.add_option("names", req.names, "Presheaf, morphism or glue block ids; h(U) names a representable");
  app.add_option("--budget", req.budget, "Candidate chart tests allowed per atlas search")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--witnesses", req.witnesses, "Also print the evidence behind passing verdicts");
  bool no_timing = false;
  app.add_flag("--no-timing", no_timing, "Report elapsed_ms as null so reports are byte-identical");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }
  req.format = format == "text" ? Format::text : Format::json;
  req.timing = !no_timing;

  Outcome o = run(req);
  std::cout << o.out;
  std::cerr << o.err;
  return o.exit_code;
}
