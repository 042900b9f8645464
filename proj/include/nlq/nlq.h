/* Copyright 2026 The nlq Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libnlq.
 *
 * Every call returns an nlq_status whose values double as process exit
 * codes. On failure nlq_last_error() describes the problem; the message is
 * thread-local and valid until the next call on the same thread. Strings
 * returned by accessors are owned by the handle they came from.
 */

#ifndef NLQ_NLQ_H_
#define NLQ_NLQ_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define NLQ_API __attribute__((visibility("default")))
#else
#define NLQ_API
#endif

typedef enum {
  NLQ_OK = 0,
  NLQ_USAGE = 1,   /* bad arguments */
  NLQ_COMPILE = 2, /* the query could not be compiled */
  NLQ_IO = 3,      /* missing or malformed files and configuration */
} nlq_status;

typedef struct nlq_workspace nlq_workspace;
typedef struct nlq_result nlq_result;

NLQ_API const char *nlq_version(void);
NLQ_API const char *nlq_status_name(nlq_status status);
NLQ_API const char *nlq_last_error(void);

/* `path` is a workspace directory or a workspace.json file. */
NLQ_API nlq_status nlq_workspace_open(const char *path, nlq_workspace **out);
NLQ_API void nlq_workspace_free(nlq_workspace *ws);
/* Fuzzy lexeme threshold in [0, 1]. */
NLQ_API nlq_status nlq_workspace_set_fuzzy(nlq_workspace *ws, double threshold);
/* Next compile/query uses this CoNLL-U tree instead of the built-in parser;
 * NULL restores the built-in parser. */
NLQ_API nlq_status nlq_workspace_set_tree(nlq_workspace *ws,
                                          const char *conllu_path);

/* `format` is "datalog", "sparql" or "json". The result text is the
 * rendered query. */
NLQ_API nlq_status nlq_compile(nlq_workspace *ws, const char *query,
                               const char *format, nlq_result **out);
/* The result text holds sorted answer lines; nlq_result_query holds the
 * compiled rules. */
NLQ_API nlq_status nlq_query(nlq_workspace *ws, const char *query,
                             nlq_result **out);
/* Metrics table as text, metrics records as JSON. */
NLQ_API nlq_status nlq_eval(nlq_workspace *ws, const char *corpus_path,
                            int one_value_per_entity, nlq_result **out);
/* Writes lexicon.tsv and index.json under out_dir. */
NLQ_API nlq_status nlq_build_lexicon(const char *facts_path,
                                     const char *config_path,
                                     const char *out_dir, nlq_result **out);

NLQ_API const char *nlq_result_text(const nlq_result *r);
NLQ_API const char *nlq_result_json(const nlq_result *r);
/* Datalog text of the compiled query, or "". */
NLQ_API const char *nlq_result_query(const nlq_result *r);
/* One-line JSON trace of the pipeline, or "" when not compiled. */
NLQ_API const char *nlq_result_explain(const nlq_result *r);
NLQ_API size_t nlq_result_answer_count(const nlq_result *r);
NLQ_API size_t nlq_result_diagnostic_count(const nlq_result *r);
NLQ_API const char *nlq_result_diagnostic(const nlq_result *r, size_t i);
NLQ_API void nlq_result_free(nlq_result *r);

#ifdef __cplusplus
}
#endif

#endif /* NLQ_NLQ_H_ */
