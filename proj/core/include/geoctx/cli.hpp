#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "geoctx/geometry.hpp"

namespace geoctx::cli {

enum class Format { json, text };

struct Request {
  std::string command;
  std::string file;
  std::vector<std::string> names;  // presheaf, morphism or glue block ids
  std::size_t budget = kDefaultBudget;
  Format format = Format::json;
  bool witnesses = false;  // also report the evidence behind passing verdicts
  bool timing = true;      // false: elapsed_ms is null, for byte-identical output
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitInputError = 3;

struct Outcome {
  int exit_code = kExitPass;
  std::string out;  // the report
  std::string err;  // diagnostics for input errors
};

const std::vector<std::string>& commands();

// Reads request.file and runs the command. Never throws.
Outcome run(const Request& request);
// As run, with the document supplied as text.
Outcome run_text(const Request& request, std::string_view text);

}  // namespace geoctx::cli
