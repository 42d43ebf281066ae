#include "elx/report.hpp"

#include <algorithm>

#include <json.hpp>

#include "elx/render.hpp"

namespace elx {

namespace {

using ordered_json = nlohmann::ordered_json;

bool contains_alpha(const std::vector<TermPtr>& set, const TermPtr& t) {
  return std::any_of(set.begin(), set.end(),
                     [&](const TermPtr& s) { return alpha_equal(s, t); });
}

ordered_json reading_json(const Reading& r) {
  ordered_json bindings = ordered_json::object();
  for (const auto& [unknown, term] : r.provenance) bindings[unknown] = render_term(term);
  return ordered_json{{"term", render_term(r.term)}, {"bindings", std::move(bindings)}};
}

ordered_json run_json(const RunReport& r) {
  ordered_json j;
  j["problem"] = r.problem;
  j["status"] = r.status();
  if (!r.error.empty()) {
    j["error"] = r.error;
    return j;
  }
  ordered_json readings = ordered_json::array();
  for (const auto& reading : r.readings) readings.push_back(reading_json(reading));
  j["readings"] = std::move(readings);
  j["counts"] = ordered_json{{"raw", r.counts.raw},
                             {"primary", r.counts.after_primary},
                             {"linking", r.counts.after_linking}};
  ordered_json failures = ordered_json::array();
  for (const auto& f : r.failures)
    failures.push_back(ordered_json{
        {"stage", failure_stage_name(f.stage)}, {"where", f.where}, {"detail", f.detail}});
  j["failures"] = std::move(failures);
  j["budget_exhausted"] = r.budget_exhausted;
  if (r.has_expectations) {
    auto terms = [](const std::vector<TermPtr>& ts) {
      ordered_json a = ordered_json::array();
      for (const auto& t : ts) a.push_back(render_term(t));
      return a;
    };
    j["expected"] = terms(r.expected);
    if (!r.matched) {
      j["missing"] = terms(r.missing);
      j["unexpected"] = terms(r.unexpected);
    }
  }
  return j;
}

} // namespace

std::string RunReport::status() const {
  if (!error.empty()) return "error";
  if (!has_expectations) return "ran";
  return matched ? "pass" : "mismatch";
}

int RunReport::exit_code() const {
  if (!error.empty()) return error_exit;
  if (has_expectations && !matched) return 1;
  return 0;
}

RunReport run_problem(const ProblemFile& file) {
  RunReport r;
  r.problem = file.name;
  r.has_expectations = file.has_expectations;
  r.expected = file.expected;
  try {
    SearchBudget budget{file.flags.budget_depth, file.flags.max_solutions};
    DerivationResult result = enumerate_derivations(file.plan, budget, file.flags.linking);
    r.readings = std::move(result.readings);
    r.counts = result.counts;
    r.failures = std::move(result.failures);
    r.budget_exhausted = result.budget_exhausted;
  } catch (const Error& e) {
    r.error = e.what();
    r.error_exit = 2;
    return r;
  }
  if (r.has_expectations) {
    for (const auto& want : r.expected) {
      bool found = false;
      for (const auto& got : r.readings)
        if (alpha_equal(got.term, want)) found = true;
      if (!found) r.missing.push_back(want);
    }
    for (const auto& got : r.readings)
      if (!contains_alpha(r.expected, got.term)) r.unexpected.push_back(got.term);
    r.matched = r.missing.empty() && r.unexpected.empty();
  }
  return r;
}

RunReport run_text(const std::string& name, const std::string& text) {
  ProblemFile file;
  try {
    file = parse_problem(text);
  } catch (const Error& e) {
    RunReport r;
    r.problem = name;
    r.error = e.what();
    r.error_exit = 3;
    return r;
  }
  return run_problem(file);
}

std::string report_json(const RunReport& report) { return run_json(report).dump(2) + "\n"; }

std::string report_text(const RunReport& report) {
  std::string out = "problem " + report.problem + ": " + report.status() + "\n";
  if (!report.error.empty()) return out + "  " + report.error + "\n";
  out += "  readings (" + std::to_string(report.readings.size()) + "):\n";
  for (const auto& r : report.readings) {
    out += "    " + render_term(r.term) + "\n";
    for (const auto& [unknown, term] : r.provenance)
      out += "      " + unknown + " = " + render_term(term) + "\n";
  }
  out += "  counts: raw " + std::to_string(report.counts.raw) + ", primary " +
         std::to_string(report.counts.after_primary) + ", linking " +
         std::to_string(report.counts.after_linking) + "\n";
  if (report.budget_exhausted) out += "  budget exhausted\n";
  for (const auto& f : report.failures) {
    out += std::string("  failure ") + failure_stage_name(f.stage);
    if (!f.where.empty()) out += " [" + f.where + "]";
    if (!f.detail.empty()) out += ": " + f.detail;
    out += "\n";
  }
  for (const auto& t : report.missing) out += "  missing: " + render_term(t) + "\n";
  for (const auto& t : report.unexpected) out += "  unexpected: " + render_term(t) + "\n";
  return out;
}

std::string corpus_json(const std::vector<RunReport>& runs) {
  ordered_json j;
  ordered_json entries = ordered_json::array();
  int passed = 0;
  for (const auto& r : runs) {
    entries.push_back(run_json(r));
    if (r.exit_code() == 0) ++passed;
  }
  j["corpus"] = std::move(entries);
  j["total"] = runs.size();
  j["passed"] = passed;
  j["status"] = corpus_exit(runs) == 0 ? "pass" : "fail";
  return j.dump(2) + "\n";
}

std::string corpus_text(const std::vector<RunReport>& runs) {
  std::string out;
  int passed = 0;
  for (const auto& r : runs) {
    out += report_text(r);
    if (r.exit_code() == 0) ++passed;
  }
  out += std::to_string(passed) + "/" + std::to_string(runs.size()) + " problems pass\n";
  return out;
}

int corpus_exit(const std::vector<RunReport>& runs) {
  int worst = 0;
  for (const auto& r : runs) worst = std::max(worst, r.exit_code());
  return worst;
}

} // namespace elx
