#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "runner.hpp"

namespace {

const char* kCommands[] = {"run",   "validate", "cohomology", "charclass", "curvature",
                           "index", "groupoid", "thom-check", "modular",   "roots"};

const char* describe(const std::string& cmd) {
  if (cmd == "run") return "Run every computation in the document";
  if (cmd == "validate") return "Check algebroid axioms (all algebroids when none is requested)";
  if (cmd == "cohomology") return "Betti numbers, cocycle and exactness tests";
  if (cmd == "charclass") return "Characteristic forms of a connection";
  if (cmd == "curvature") return "Curvature, Bianchi identity and Levi-Civita residuals";
  if (cmd == "index") return "Index integrals over a chart";
  if (cmd == "groupoid") return "Finite groupoid cohomology, convolution and traces";
  if (cmd == "thom-check") return "Compare base and Thom-mapped integrals";
  if (cmd == "modular") return "Modular cocycle of a density";
  return "Check a roots identity";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie algebroid characteristic classes and index computations"};
  app.require_subcommand(1);

  std::string input = "-";
  std::string format = "text";
  lalg::cli::RunOptions opts;
  double tolerance = 0;
  std::size_t budget = 0, truncate = 0;

  for (const char* name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, describe(name));
    sub->add_option("document", input, "Job document path, or - for stdin")->capture_default_str();
    sub->add_option("--truncate", truncate, "Form degree cut for series");
    sub->add_option("--tolerance", tolerance, "Absolute cubature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--budget", budget, "Cubature evaluation budget")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    sub->add_flag("--parallel", opts.parallel, "Evaluate cubature boxes concurrently");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  opts.command = chosen->get_name();
  opts.json = format == "json";
  if (chosen->count("--truncate")) opts.truncate = truncate;
  if (chosen->count("--tolerance")) opts.tolerance = tolerance;
  if (chosen->count("--budget")) opts.budget = budget;

  std::string text;
  if (input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open " << input << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  lalg::cli::RunOutput out = lalg::cli::run(text, opts);
  std::cout << out.out;
  std::cerr << out.err;
  return out.exit_code;
}
