#include <zeroext/cli.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace zeroext;
using cli::CommandResult;

namespace {

ProblemSpec load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

int emit_result(const CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalised minimum 0-extension: classification, solving and property checks"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "records"}));

  app.fallthrough();
  std::string file;
  auto* classify_cmd = app.add_subcommand("classify", "Decide tractability; print an orientation or a hardness certificate");
  classify_cmd->add_option("file", file, "Instance file")->required();

  auto* solve_cmd = app.add_subcommand("solve", "Minimise the instance");
  solve_cmd->add_option("file", file, "Instance file")->required();
  std::string method, local, start;
  cli::SolveFlags flags;
  solve_cmd->add_option("--method", method, "dsda, sda or brute")->check(CLI::IsMember({"dsda", "sda", "brute"}));
  solve_cmd->add_option("--local", local, "Local minimiser: blp or brute")->check(CLI::IsMember({"blp", "brute"}));
  solve_cmd->add_option("--start", start, "Comma-separated start labels, one per variable");
  solve_cmd->add_flag("--trace", flags.trace, "Print every iteration");
  solve_cmd->add_flag("--verify", flags.verify, "Cross-check against brute force");

  auto* check_cmd = app.add_subcommand("check", "Run property suites on the instance's complex");
  check_cmd->add_option("file", file, "Instance file")->required();
  std::string suite = "all";
  check_cmd->add_option("--suite", suite, "structure, semilattice, solver or all")
      ->check(CLI::IsMember({"structure", "semilattice", "solver", "all"}));

  auto* envelope_cmd = app.add_subcommand("envelope", "Envelope of a pair in a principal semilattice");
  std::string p, q, at, sigma = "up";
  envelope_cmd->add_option("file", file, "Instance file")->required();
  envelope_cmd->add_option("p", p, "First element")->required();
  envelope_cmd->add_option("q", q, "Second element")->required();
  envelope_cmd->add_option("--at", at, "Center of the principal semilattice (default: meet of p and q)");
  envelope_cmd->add_option("--sigma", sigma, "up, down, plus or minus")->check(CLI::IsMember({"up", "down", "plus", "minus"}));

  auto* subdivide_cmd = app.add_subcommand("subdivide", "Print the 2-subdivision");
  subdivide_cmd->add_option("file", file, "Instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kInput;
  }
  const auto fmt = format == "records" ? cli::Format::records : cli::Format::text;

  return emit_result(cli::guarded([&]() -> CommandResult {
    const auto spec = load(file);
    if (*classify_cmd) return cli::run_classify(spec, fmt);
    if (*solve_cmd) {
      if (!method.empty()) flags.method = method;
      if (!local.empty()) flags.local = local;
      std::stringstream ss(start);
      for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) flags.start.push_back(tok);
      return cli::run_solve(spec, flags, fmt);
    }
    if (*check_cmd) return cli::run_check(spec, suite, fmt);
    if (*envelope_cmd) {
      const Principal s = sigma == "down" ? Principal::down
                          : sigma == "plus" ? Principal::plus
                          : sigma == "minus" ? Principal::minus
                                             : Principal::up;
      return cli::run_envelope(spec, p, q, at.empty() ? std::nullopt : std::optional<std::string>(at), s, fmt);
    }
    return cli::run_subdivide(spec);
  }));
}
