// Copyright 2026 The nlq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// nlq: command-line front end over the C API.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlq/nlq.h"

namespace {

struct Common {
  std::string workspace = ".";
  double fuzzy = -1;
  std::string parser = "builtin";
  bool explain = false;
};

int Report(nlq_status status) {
  std::cerr << "nlq: " << nlq_last_error() << "\n";
  return status;
}

void PrintDiagnostics(const nlq_result *r) {
  for (size_t i = 0; i < nlq_result_diagnostic_count(r); ++i) {
    std::cerr << "note: " << nlq_result_diagnostic(r, i) << "\n";
  }
}

std::string Join(const std::vector<std::string> &words) {
  std::string out;
  for (const std::string &w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// Opens the workspace and applies --fuzzy / --parser.
int Open(const Common &c, nlq_workspace **ws) {
  nlq_status s = nlq_workspace_open(c.workspace.c_str(), ws);
  if (s != NLQ_OK) return Report(s);
  if (c.fuzzy >= 0 && (s = nlq_workspace_set_fuzzy(*ws, c.fuzzy)) != NLQ_OK) {
    return Report(s);
  }
  if (c.parser != "builtin") {
    const std::string prefix = "conllu:";
    if (c.parser.rfind(prefix, 0) != 0 || c.parser.size() == prefix.size()) {
      std::cerr << "nlq: --parser must be builtin or conllu:<path>\n";
      return NLQ_USAGE;
    }
    s = nlq_workspace_set_tree(*ws, c.parser.c_str() + prefix.size());
    if (s != NLQ_OK) return Report(s);
  }
  return NLQ_OK;
}

void AddCommon(CLI::App *cmd, Common *c, bool parser) {
  const char *env = std::getenv("NLQ_WORKSPACE");
  if (env && *env) c->workspace = env;
  cmd->add_option("-w,--workspace", c->workspace,
                  "workspace directory or workspace.json")
      ->capture_default_str();
  cmd->add_option("--fuzzy", c->fuzzy, "fuzzy lexeme threshold in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  if (parser) {
    cmd->add_option("--parser", c->parser, "builtin or conllu:<path>")
        ->capture_default_str();
    cmd->add_flag("--explain", c->explain,
                  "print the pipeline trace as JSON on stderr");
  }
}

int Compile(const Common &c, const std::string &query, const std::string &format) {
  nlq_workspace *ws = nullptr;
  if (int rc = Open(c, &ws)) {
    nlq_workspace_free(ws);
    return rc;
  }
  nlq_result *r = nullptr;
  nlq_status s = nlq_compile(ws, query.c_str(), format.c_str(), &r);
  int rc = 0;
  if (s != NLQ_OK) {
    rc = Report(s);
  } else {
    std::cout << nlq_result_text(r);
    if (c.explain) std::cerr << nlq_result_explain(r) << "\n";
    PrintDiagnostics(r);
  }
  nlq_result_free(r);
  nlq_workspace_free(ws);
  return rc;
}

int Query(const Common &c, const std::string &query) {
  nlq_workspace *ws = nullptr;
  if (int rc = Open(c, &ws)) {
    nlq_workspace_free(ws);
    return rc;
  }
  nlq_result *r = nullptr;
  nlq_status s = nlq_query(ws, query.c_str(), &r);
  int rc = 0;
  if (s != NLQ_OK) {
    rc = Report(s);
  } else {
    std::cout << nlq_result_text(r);
    if (c.explain) std::cerr << nlq_result_explain(r) << "\n";
    PrintDiagnostics(r);
  }
  nlq_result_free(r);
  nlq_workspace_free(ws);
  return rc;
}

int Eval(const Common &c, const std::string &corpus, bool one_value, bool json) {
  nlq_workspace *ws = nullptr;
  if (int rc = Open(c, &ws)) {
    nlq_workspace_free(ws);
    return rc;
  }
  nlq_result *r = nullptr;
  nlq_status s = nlq_eval(ws, corpus.c_str(), one_value ? 1 : 0, &r);
  int rc = 0;
  if (s != NLQ_OK) {
    rc = Report(s);
  } else {
    std::cout << (json ? nlq_result_json(r) : nlq_result_text(r));
    PrintDiagnostics(r);
  }
  nlq_result_free(r);
  nlq_workspace_free(ws);
  return rc;
}

int BuildLexicon(const std::string &facts, const std::string &config,
                 const std::string &out) {
  nlq_result *r = nullptr;
  nlq_status s = nlq_build_lexicon(facts.c_str(), config.c_str(), out.c_str(), &r);
  int rc = 0;
  if (s != NLQ_OK) {
    rc = Report(s);
  } else {
    std::istringstream paths(nlq_result_text(r));
    for (std::string p; std::getline(paths, p);) std::cerr << "wrote " << p << "\n";
  }
  nlq_result_free(r);
  return rc;
}

int Repl(const Common &c) {
  nlq_workspace *ws = nullptr;
  if (int rc = Open(c, &ws)) {
    nlq_workspace_free(ws);
    return rc;
  }
  bool explain = c.explain;
  std::string line;
  for (;;) {
    std::cerr << "nlq> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    if (line == ":quit" || line == ":q") break;
    if (line == ":explain") {
      explain = !explain;
      std::cerr << "explain " << (explain ? "on" : "off") << "\n";
      continue;
    }
    nlq_result *r = nullptr;
    nlq_status s = nlq_query(ws, line.c_str(), &r);
    if (s != NLQ_OK) {
      std::cerr << "nlq: " << nlq_last_error() << "\n";
    } else {
      std::cout << nlq_result_query(r) << nlq_result_text(r) << std::flush;
      if (explain) {
        std::cerr << nlq_result_explain(r) << "\n";
        PrintDiagnostics(r);
      }
    }
    nlq_result_free(r);
  }
  nlq_workspace_free(ws);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Natural-language queries to conjunctive database queries"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nlq_version());

  std::string facts, config, out_dir;
  CLI::App *build = app.add_subcommand(
      "build-lexicon", "generate lexicon.tsv and index.json from facts");
  build->add_option("--facts", facts, "facts file")->required();
  build->add_option("--config", config, "lexicon generation config")->required();
  build->add_option("--out", out_dir, "output directory")->required();

  Common compile_opts;
  std::vector<std::string> compile_words;
  std::string format = "datalog";
  CLI::App *compile = app.add_subcommand("compile", "print the DB-query");
  AddCommon(compile, &compile_opts, true);
  compile->add_option("--format", format, "datalog, sparql or json")
      ->check(CLI::IsMember({"datalog", "sparql", "json"}))
      ->capture_default_str();
  compile->add_option("query", compile_words, "query text")->required();

  Common query_opts;
  std::vector<std::string> query_words;
  CLI::App *query = app.add_subcommand("query", "compile and print answers");
  AddCommon(query, &query_opts, true);
  query->add_option("query", query_words, "query text")->required();

  Common eval_opts;
  std::string corpus;
  bool one_value = false, json = false;
  CLI::App *eval = app.add_subcommand("eval", "score a gold corpus");
  AddCommon(eval, &eval_opts, false);
  eval->add_option("--corpus", corpus, "corpus file (default: the workspace's)");
  eval->add_flag("--one-value", one_value, "keep one value per entity");
  eval->add_flag("--json", json, "print records instead of the table");

  Common repl_opts;
  CLI::App *repl = app.add_subcommand("repl", "read queries from stdin");
  AddCommon(repl, &repl_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return NLQ_USAGE;
  }

  if (*build) return BuildLexicon(facts, config, out_dir);
  if (*compile) return Compile(compile_opts, Join(compile_words), format);
  if (*query) return Query(query_opts, Join(query_words));
  if (*eval) return Eval(eval_opts, corpus, one_value, json);
  if (*repl) return Repl(repl_opts);
  return NLQ_USAGE;
}
