#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elx/report.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Overrides {
  std::string linking;   // "", "on" or "off"
  int budget_depth = 0;  // 0 = keep the file's value
  int max_solutions = 0;
};

elx::RunReport run_file(const fs::path& path, const Overrides& over) {
  std::string text;
  try {
    text = slurp(path);
  } catch (const std::exception& e) {
    elx::RunReport r;
    r.problem = path.stem().string();
    r.error = e.what();
    r.error_exit = 3;
    return r;
  }
  elx::ProblemFile file;
  try {
    file = elx::parse_problem(text);
  } catch (const elx::Error& e) {
    elx::RunReport r;
    r.problem = path.stem().string();
    r.error = e.what();
    r.error_exit = 3;
    return r;
  }
  if (!over.linking.empty()) file.flags.linking = over.linking == "on";
  if (over.budget_depth > 0) file.flags.budget_depth = over.budget_depth;
  if (over.max_solutions > 0) file.flags.max_solutions = over.max_solutions;
  return elx::run_problem(file);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ellipsis and scope derivation runner"};

  std::string file;
  std::string corpus_dir;
  std::string report_mode = "text";
  Overrides over;

  app.add_option("file", file, "problem file to run")->type_name("FILE");
  app.add_option("--corpus", corpus_dir, "run every .elx file in a directory")
      ->type_name("DIR");
  app.add_option("--linking", over.linking, "override the linking filter")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--budget-depth", over.budget_depth, "override the unification depth budget")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-solutions", over.max_solutions, "override the solution cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--report", report_mode, "report format")
      ->check(CLI::IsMember({"json", "text"}));

  CLI11_PARSE(app, argc, argv);

  if (file.empty() == corpus_dir.empty()) {
    std::cerr << "give exactly one of FILE or --corpus DIR\n";
    return 3;
  }

  if (!corpus_dir.empty()) {
    std::vector<fs::path> paths;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(corpus_dir, ec))
      if (entry.is_regular_file() && entry.path().extension() == ".elx")
        paths.push_back(entry.path());
    if (ec) {
      std::cerr << "cannot read directory " << corpus_dir << ": " << ec.message() << "\n";
      return 3;
    }
    std::sort(paths.begin(), paths.end());
    std::vector<elx::RunReport> runs;
    for (const auto& p : paths) runs.push_back(run_file(p, over));
    std::cout << (report_mode == "json" ? elx::corpus_json(runs) : elx::corpus_text(runs));
    return elx::corpus_exit(runs);
  }

  elx::RunReport r = run_file(file, over);
  std::cout << (report_mode == "json" ? elx::report_json(r) : elx::report_text(r));
  return r.exit_code();
}
