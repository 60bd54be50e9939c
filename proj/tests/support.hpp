#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "nomhoas/hoas/parser.hpp"
#include "nomhoas/nominal/parser.hpp"

namespace testsupport {

inline std::string corpus_file(const std::string& name) {
  std::ifstream f(std::string(NOMHOAS_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline nomhoas::nominal::Program corpus_program(const std::string& name) {
  return nomhoas::nominal::parse_program(corpus_file(name));
}

// One name type, two base types, three constructors.
inline const char* kSmallSig =
    "nametype nm.\n"
    "kind d.\n"
    "kind e.\n"
    "func z : d.\n"
    "func v : nm -> d.\n"
    "func lam : <nm>d -> e.\n";

}  // namespace testsupport
