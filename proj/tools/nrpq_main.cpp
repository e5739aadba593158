// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include <iostream>
#include <string>
#include <vector>

#include "nrpq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nrpq::run_cli(args, std::cout, std::cerr);
}
