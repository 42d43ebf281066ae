#pragma once

#include <string>
#include <vector>

#include "elx/dsl.hpp"

namespace elx {

// Outcome of one problem run. `error` is empty on a completed run; when set,
// `error_exit` records whether the failure was an engine error (2) or a
// parse/type error (3), matching the process exit codes.
struct RunReport {
  std::string problem;
  bool has_expectations = false;
  bool matched = false;
  std::vector<Reading> readings;
  SolveCounts counts;
  std::vector<BranchFailure> failures;
  bool budget_exhausted = false;
  std::vector<TermPtr> expected;
  std::vector<TermPtr> missing;    // expected readings the run did not produce
  std::vector<TermPtr> unexpected; // produced readings the file did not expect

  std::string error;
  int error_exit = 0;

  // "pass" | "mismatch" | "ran" (no expectations) | "error"
  std::string status() const;
  // 0 pass/ran, 1 mismatch, otherwise error_exit
  int exit_code() const;
};

// Runs the problem and compares against its expectations (set equality up to
// alpha). Engine errors are captured in the report, not thrown.
RunReport run_problem(const ProblemFile& file);

// Parses and runs one file's text; parse/type errors are captured with
// error_exit 3.
RunReport run_text(const std::string& name, const std::string& text);

std::string report_json(const RunReport& report);
std::string report_text(const RunReport& report);

// Aggregates in the given order (the corpus runner passes filename order).
std::string corpus_json(const std::vector<RunReport>& runs);
std::string corpus_text(const std::vector<RunReport>& runs);

// Worst exit code over the runs: 3 beats 2 beats 1 beats 0.
int corpus_exit(const std::vector<RunReport>& runs);

} // namespace elx
