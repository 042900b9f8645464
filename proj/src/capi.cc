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

#include "nlq/nlq.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlq/workspace.h"

struct nlq_workspace {
  nlq::Workspace ws;
  std::optional<nlq::DependencyTree> tree;
};

struct nlq_result {
  std::string text;
  std::string json;
  std::string query;
  std::string explain;
  size_t answers = 0;
  std::vector<std::string> diagnostics;
};

namespace {

thread_local std::string last_error;

nlq_status StatusFor(nlq::ErrorCode code) {
  switch (code) {
    case nlq::ErrorCode::kNoSolarClass:
    case nlq::ErrorCode::kUnknownDbType:
    case nlq::ErrorCode::kUnknownOperator:
    case nlq::ErrorCode::kContract:
      return NLQ_COMPILE;
    case nlq::ErrorCode::kParse:
    case nlq::ErrorCode::kConfig:
    case nlq::ErrorCode::kIo:
    case nlq::ErrorCode::kEmptyCorpus:
      return NLQ_IO;
  }
  return NLQ_IO;
}

nlq_status Fail(nlq_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Fn>
nlq_status Guard(Fn &&fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const nlq::Error &e) {
    return Fail(StatusFor(e.code()),
                std::string(nlq::ErrorCodeName(e.code())) + ": " + e.what());
  } catch (const std::bad_alloc &) {
    return Fail(NLQ_IO, "out of memory");
  } catch (const std::exception &e) {
    return Fail(NLQ_IO, e.what());
  }
}

nlq::Analysis Run(nlq_workspace *ws, const char *query) {
  return ws->ws.Analyze(query, ws->tree ? &*ws->tree : nullptr);
}

void Fill(nlq_result *r, const nlq::Analysis &a) {
  r->query = nlq::RenderDatalog(a.query);
  r->explain = a.ExplainJson();
  r->diagnostics = a.diagnostics.messages();
}

void WriteFile(const std::filesystem::path &path, const std::string &data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw nlq::Error(nlq::ErrorCode::kIo, "cannot write " + path.string());
  out << data;
  if (!out) throw nlq::Error(nlq::ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

extern "C" {

const char *nlq_version(void) { return "0.1.0"; }

const char *nlq_status_name(nlq_status status) {
  switch (status) {
    case NLQ_OK:
      return "ok";
    case NLQ_USAGE:
      return "usage";
    case NLQ_COMPILE:
      return "compile";
    case NLQ_IO:
      return "io";
  }
  return "unknown";
}

const char *nlq_last_error(void) { return last_error.c_str(); }

nlq_status nlq_workspace_open(const char *path, nlq_workspace **out) {
  if (path == nullptr || out == nullptr) return Fail(NLQ_USAGE, "null argument");
  *out = nullptr;
  return Guard([&] {
    auto handle = std::make_unique<nlq_workspace>();
    handle->ws = nlq::Workspace::Load(path);
    *out = handle.release();
    return NLQ_OK;
  });
}

void nlq_workspace_free(nlq_workspace *ws) { delete ws; }

nlq_status nlq_workspace_set_fuzzy(nlq_workspace *ws, double threshold) {
  if (ws == nullptr) return Fail(NLQ_USAGE, "null workspace");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    return Fail(NLQ_USAGE, "fuzzy threshold must lie in [0, 1]");
  }
  ws->ws.extraction.fuzzy_threshold = threshold;
  return NLQ_OK;
}

nlq_status nlq_workspace_set_tree(nlq_workspace *ws, const char *conllu_path) {
  if (ws == nullptr) return Fail(NLQ_USAGE, "null workspace");
  return Guard([&] {
    if (conllu_path == nullptr) {
      ws->tree.reset();
    } else {
      ws->tree = nlq::ParseConllu(nlq::ReadFile(conllu_path));
    }
    return NLQ_OK;
  });
}

nlq_status nlq_compile(nlq_workspace *ws, const char *query, const char *format,
                       nlq_result **out) {
  if (ws == nullptr || query == nullptr || out == nullptr) {
    return Fail(NLQ_USAGE, "null argument");
  }
  *out = nullptr;
  nlq::QueryFormat fmt;
  try {
    fmt = nlq::ParseQueryFormat(format ? format : "datalog");
  } catch (const nlq::Error &e) {
    return Fail(NLQ_USAGE, e.what());
  }
  return Guard([&] {
    auto r = std::make_unique<nlq_result>();
    nlq::Analysis a = Run(ws, query);
    Fill(r.get(), a);
    r->text = nlq::Render(a.query, fmt);
    r->json = nlq::RenderJson(a.query);
    *out = r.release();
    return NLQ_OK;
  });
}

nlq_status nlq_query(nlq_workspace *ws, const char *query, nlq_result **out) {
  if (ws == nullptr || query == nullptr || out == nullptr) {
    return Fail(NLQ_USAGE, "null argument");
  }
  *out = nullptr;
  return Guard([&] {
    auto r = std::make_unique<nlq_result>();
    nlq::Analysis a = Run(ws, query);
    Fill(r.get(), a);
    std::vector<std::string> lines =
        nlq::FormatAnswers(nlq::Evaluate(a.query, ws->ws.store));
    r->answers = lines.size();
    nlohmann::json answers = nlohmann::json::array();
    for (const std::string &l : lines) {
      r->text += l + "\n";
      answers.push_back(l);
    }
    r->json = answers.dump();
    *out = r.release();
    return NLQ_OK;
  });
}

nlq_status nlq_eval(nlq_workspace *ws, const char *corpus_path,
                    int one_value_per_entity, nlq_result **out) {
  if (ws == nullptr || out == nullptr) return Fail(NLQ_USAGE, "null argument");
  *out = nullptr;
  return Guard([&] {
    std::string path = corpus_path && *corpus_path
                           ? std::string(corpus_path)
                           : ws->ws.Resolve(ws->ws.files.corpus);
    std::vector<nlq::GoldAnnotation> corpus =
        nlq::ParseGoldCorpus(nlq::ReadFile(path));
    nlq::CorpusReport report =
        nlq::EvaluateWorkspace(ws->ws, corpus, one_value_per_entity != 0);
    auto r = std::make_unique<nlq_result>();
    r->text = nlq::RenderReport(report);
    r->json = nlq::ReportJson(report);
    for (const std::string &m : report.mismatches) {
      r->diagnostics.push_back("compiled query differs from gold: " + m);
    }
    *out = r.release();
    return NLQ_OK;
  });
}

nlq_status nlq_build_lexicon(const char *facts_path, const char *config_path,
                             const char *out_dir, nlq_result **out) {
  if (facts_path == nullptr || config_path == nullptr || out_dir == nullptr ||
      out == nullptr) {
    return Fail(NLQ_USAGE, "null argument");
  }
  *out = nullptr;
  return Guard([&] {
    nlq::FactStore store = nlq::LoadFactsFile(facts_path);
    std::vector<nlq::GenerationRule> rules =
        nlq::ParseGenerationConfig(nlq::ReadFile(config_path));
    nlq::Lexicon lexicon = nlq::GenerateLexicons(store, rules);
    std::ostringstream tsv;
    tsv << "# entity\tlexeme\n";
    nlq::WriteLexiconTsv(lexicon, tsv);
    std::string manifest = nlq::IndexManifest(nlq::InverseIndex(lexicon));

    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw nlq::Error(nlq::ErrorCode::kIo,
                       "cannot create " + dir.string() + ": " + ec.message());
    }
    WriteFile(dir / "lexicon.tsv", tsv.str());
    WriteFile(dir / "index.json", manifest);

    auto r = std::make_unique<nlq_result>();
    r->text = (dir / "lexicon.tsv").string() + "\n" +
              (dir / "index.json").string() + "\n";
    r->json = manifest;
    *out = r.release();
    return NLQ_OK;
  });
}

const char *nlq_result_text(const nlq_result *r) { return r ? r->text.c_str() : ""; }
const char *nlq_result_json(const nlq_result *r) { return r ? r->json.c_str() : ""; }
const char *nlq_result_query(const nlq_result *r) { return r ? r->query.c_str() : ""; }
const char *nlq_result_explain(const nlq_result *r) {
  return r ? r->explain.c_str() : "";
}
size_t nlq_result_answer_count(const nlq_result *r) { return r ? r->answers : 0; }
size_t nlq_result_diagnostic_count(const nlq_result *r) {
  return r ? r->diagnostics.size() : 0;
}
const char *nlq_result_diagnostic(const nlq_result *r, size_t i) {
  if (r == nullptr || i >= r->diagnostics.size()) return "";
  return r->diagnostics[i].c_str();
}
void nlq_result_free(nlq_result *r) { delete r; }

}  // extern "C"
