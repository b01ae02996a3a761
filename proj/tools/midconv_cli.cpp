// midconv command-line tool. Talks to the library through the C API only.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "midconv.h"

namespace {

struct Job {
  std::string source;
  mc_status status = MC_OK;
  std::string json;
  std::string text;
};

std::string json_escape(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

std::string error_json(const char* code, const std::string& message) {
  return "{\n  \"error\": {\n    \"code\": \"" + std::string(code) + "\",\n    \"message\": \"" +
         json_escape(message) + "\"\n  }\n}";
}

bool read_source(const std::string& source, std::string& content) {
  if (source == "-") {
    content.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    return true;
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) return false;
  content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return true;
}

void run_job(Job& job, const std::string& content, mc_verb verb, const mc_options& options) {
  mc_problem* problem = nullptr;
  mc_status st = mc_problem_parse(content.data(), content.size(), &problem);
  if (st != MC_OK) {
    job.status = st;
    job.text = mc_last_error();
    job.json = error_json("ParseError", job.text);
    return;
  }
  mc_result* result = nullptr;
  st = mc_run(problem, verb, &options, &result);
  job.status = st;
  if (result) {
    job.json = mc_result_json(result);
    job.text = mc_result_text(result);
    mc_result_destroy(result);
  } else {
    job.text = mc_last_error();
    job.json = error_json("InternalError", job.text);
  }
  mc_problem_destroy(problem);
}

int exit_code(const std::vector<Job>& jobs) {
  auto any = [&](mc_status s) {
    return std::any_of(jobs.begin(), jobs.end(), [s](const Job& j) { return j.status == s; });
  };
  if (any(MC_INTERNAL_ERROR)) return 3;
  if (any(MC_INPUT_ERROR)) return 1;
  if (any(MC_NEGATIVE)) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Katz middle convolution on local monodromy data"};
  app.set_version_flag("--version", std::string(mc_version()));
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string output = "-";
  std::uint64_t seed = 0;
  double tol = 0.0;
  int max_steps = 0;
  std::string beta_v;
  int jobs = 1;
  bool text = false;

  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"defect", "Defect of a convoluter on a monodromy vector"},
      {"transform", "Katz transformation"},
      {"run", "Rank-reduction algorithm"},
      {"classify", "Dimension count and dimension-two families"},
      {"verify", "Numeric check through the homology representation"},
      {"higgs", "Degree-zero cyclotomic Higgs bundle"}};
  std::vector<CLI::Option*> seed_options;
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-i,--input", inputs, "Input documents (file or -)")->expected(1, -1);
    sub->add_option("-o,--output", output, "Output file or -");
    seed_options.push_back(sub->add_option("--seed", seed, "Random seed for generated instances"));
    sub->add_option("--tol", tol, "Numeric tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-steps", max_steps, "Step limit for run")->check(CLI::PositiveNumber);
    sub->add_option("--beta-v", beta_v, "beta^V policy")->check(CLI::IsMember({"same", "fresh", "explicit"}));
    sub->add_option("-j,--jobs", jobs, "Documents processed in parallel")->check(CLI::PositiveNumber);
    sub->add_flag("--text", text, "Print a text summary instead of JSON");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  mc_verb verb;
  if (mc_verb_from_name(chosen->get_name().c_str(), &verb) != MC_OK) {
    std::cerr << mc_last_error() << "\n";
    return 1;
  }
  mc_options options;
  mc_options_init(&options);
  for (auto* opt : seed_options) {
    if (opt->count() > 0) {
      options.has_seed = 1;
      options.seed = seed;
    }
  }
  options.tol = tol;
  options.max_steps = max_steps;
  if (beta_v == "same") options.beta_v = MC_BETA_V_SAME;
  if (beta_v == "fresh") options.beta_v = MC_BETA_V_FRESH;
  if (beta_v == "explicit") options.beta_v = MC_BETA_V_EXPLICIT;
  if (inputs.empty()) inputs.push_back("-");

  std::vector<Job> results(inputs.size());
  std::vector<std::string> contents(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    results[i].source = inputs[i];
    if (!read_source(inputs[i], contents[i])) {
      results[i].status = MC_INPUT_ERROR;
      results[i].text = "cannot read " + inputs[i];
      results[i].json = error_json("InvalidInput", results[i].text);
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      if (results[i].json.empty()) run_job(results[i], contents[i], verb, options);
    }
  };
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(jobs), inputs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream out;
  if (text) {
    for (const auto& job : results) {
      if (results.size() > 1) out << "== " << job.source << "\n";
      out << job.text;
      if (!job.text.empty() && job.text.back() != '\n') out << "\n";
    }
  } else if (results.size() == 1) {
    out << results.front().json << "\n";
  } else {
    out << "[\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      out << results[i].json << (i + 1 < results.size() ? ",\n" : "\n");
    }
    out << "]\n";
  }
  for (const auto& job : results) {
    if (job.status == MC_INPUT_ERROR || job.status == MC_INTERNAL_ERROR) {
      std::cerr << job.source << ": " << job.text << (job.text.empty() || job.text.back() == '\n' ? "" : "\n");
    }
  }

  if (output == "-") {
    std::cout << out.str();
  } else {
    std::ofstream file(output, std::ios::binary);
    if (!file) {
      std::cerr << "cannot write " << output << "\n";
      return 1;
    }
    file << out.str();
  }
  return exit_code(results);
}
