// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Command-line front end: argument parsing, file I/O, and text or JSON
// output for the answering pipelines and the instance generators.

#ifndef NRPQ_CLI_HPP
#define NRPQ_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace nrpq {

enum class EngineKind { Rewrite, Reduction, Graph };

enum class OutputMode { Text, Json };

// One parsed invocation. Paths are used by the subcommand that needs them;
// the engine selector applies to `answer` only.
struct RunConfig {
  std::string subcommand;
  std::string kb_path;
  std::string query_path;
  std::string input_path;      // generator source file
  std::string out_kb_path;     // generator KB output
  std::string out_query_path;  // generator query output
  std::string out_graph_path;  // optional materialization dump
  EngineKind engine = EngineKind::Rewrite;
  std::string fragment = "dl-lite-core";  // gen atm target fragment
  int depth = -1;                         // materialization depth, -1 unset
  OutputMode output = OutputMode::Text;
  bool timings = false;
  unsigned seed = 0;
  bool have_seed = false;
  int horn_vars = 4;   // random theory size for gen horn
  int horn_rules = 6;
};

// Parses argv and runs one subcommand, writing results to `out` and
// diagnostics to `err`. Returns the process exit status: 0 on success, 1 on
// a user error (bad flags, unreadable files, parse errors, engine and query
// mismatch), 2 on an internal invariant breach. Subcommands: answer,
// check-sat, rewrite, translate, gen horn, gen atm, eval-graph, dump-loops.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace nrpq

#endif  // NRPQ_CLI_HPP
