#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rowsub {

// Command-line driver. Subcommands:
//
//   infer [--trace] (-e EXPR | FILE)   type one term, print "inferred: <type>"
//   repl                               one term per line; ":q" exits
//
// Exit codes: 0 success, 1 type error, 2 parse error, 3 usage error.
// Errors go to `err` as "type error: <message>" or
// "parse error: <line>:<col>: <message>".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace rowsub
