#include "rowsub/cli.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "rowsub/coalesce.hpp"
#include "rowsub/infer.hpp"
#include "rowsub/syntax.hpp"
#include "rowsub/trace.hpp"

namespace rowsub {

namespace {

const char* kUsage =
    "usage: rowsub <command>\n"
    "\n"
    "commands:\n"
    "  infer [--trace] (-e EXPR | FILE)   infer the type of one term\n"
    "  repl                               read one term per line; :q exits\n";

int usage_error(std::ostream& err, const std::string& message) {
  err << "error: " << message << "\n" << kUsage;
  return 3;
}

void report_parse_error(std::ostream& err, const ParseError& e) {
  err << "parse error: " << e.line() << ":" << e.column() << ": " << e.what() << "\n";
}

void report_type_error(std::ostream& err, const TypeError& e) {
  err << "type error: " << e.what() << "\n";
}

int infer_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  bool trace = false;
  std::optional<std::string> expr;
  std::optional<std::string> file;
  for (size_t i = 1; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg == "--trace") {
      trace = true;
    } else if (arg == "-e") {
      if (i + 1 >= args.size()) return usage_error(err, "-e expects an expression");
      if (expr) return usage_error(err, "-e given twice");
      expr = args[++i];
    } else if (!arg.empty() && arg[0] == '-') {
      return usage_error(err, "unknown option '" + arg + "'");
    } else {
      if (file) return usage_error(err, "more than one input file");
      file = arg;
    }
  }
  if (expr && file) return usage_error(err, "give either -e EXPR or a file, not both");
  if (!expr && !file) return usage_error(err, "nothing to infer; give -e EXPR or a file");

  std::string source;
  if (expr) {
    source = *expr;
  } else {
    std::ifstream stream(*file);
    if (!stream) return usage_error(err, "cannot read file '" + *file + "'");
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    source = buffer.str();
  }

  Term term;
  try {
    term = parse(source);
  } catch (const ParseError& e) {
    report_parse_error(err, e);
    return 2;
  }

  TraceLog log;
  Inferencer inferencer(trace ? &log : nullptr);
  SimpleType type;
  try {
    type = inferencer.infer_program(term);
  } catch (const TypeError& e) {
    if (trace) out << format_trace(log.events());
    report_type_error(err, e);
    return 1;
  }

  std::string printed = print_type(coalesce(type, inferencer.supply()));
  if (trace) {
    log.result_text(printed);
    out << format_trace(log.events());
  }
  out << "inferred: " << printed << "\n";
  return 0;
}

int repl_command(std::istream& in, std::ostream& out, std::ostream& err) {
  std::string line;
  while (std::getline(in, line)) {
    if (line == ":q") break;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Term term = parse(line);
      Inferencer inferencer;  // one engine per request
      SimpleType type = inferencer.infer_program(term);
      out << "inferred: " << print_type(coalesce(type, inferencer.supply())) << "\n";
    } catch (const ParseError& e) {
      report_parse_error(err, e);
    } catch (const TypeError& e) {
      report_type_error(err, e);
    }
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  if (args.empty()) return usage_error(err, "missing command");
  if (args[0] == "infer") return infer_command(args, out, err);
  if (args[0] == "repl") {
    if (args.size() > 1) return usage_error(err, "repl takes no arguments");
    return repl_command(in, out, err);
  }
  return usage_error(err, "unknown command '" + args[0] + "'");
}

}  // namespace rowsub
