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


// Runs the nlq binary through the shell and checks exit codes, standard
// output payloads and the diagnostic stream.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlq/lexicon.h"
#include "nlq/logic.h"
#include "nlq/workspace.h"
#include "support.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

std::string Quote(const std::string &s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

std::string Slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path Scratch(const std::string &name) {
  fs::path dir = fs::temp_directory_path() / ("nlq_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run Nlq(const std::vector<std::string> &args, const std::string &input = "") {
  static int counter = 0;
  fs::path dir = Scratch("run" + std::to_string(counter++));
  std::ofstream(dir / "in") << input;
  std::string cmd = Quote(NLQ_CLI);
  for (const std::string &a : args) cmd += " " + Quote(a);
  cmd += " <" + Quote((dir / "in").string()) + " >" + Quote((dir / "out").string()) + " 2>" +
         Quote((dir / "err").string());
  int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(dir / "out");
  r.err = Slurp(dir / "err");
  fs::remove_all(dir);
  return r;
}

size_t Lines(const std::string &s) { return size_t(std::count(s.begin(), s.end(), '\n')); }

const std::string kFig = nlq::testing::kFigure2;
const std::string kDemo = nlq::testing::kDemo;

}  // namespace

TEST_CASE("usage") {
  CHECK(Nlq({"--version"}).code == 0);
  CHECK(Nlq({"--help"}).code == 0);
  CHECK(Nlq({}).code == 1);
  CHECK(Nlq({"frobnicate"}).code == 1);
  CHECK(Nlq({"compile", "-w", kFig}).code == 1);
  CHECK(Nlq({"compile", "-w", kFig, "--format", "sql", "Find", "books"}).code == 1);
  CHECK(Nlq({"compile", "-w", kFig, "--fuzzy", "2", "Find", "books"}).code == 1);
  CHECK(Nlq({"compile", "-w", kFig, "--parser", "spacy", "Find", "books"}).code == 1);
  CHECK(Nlq({"build-lexicon", "--facts", "x"}).code == 1);
  CHECK(Nlq({"compile", "-w", "/nonexistent", "Find", "books"}).code == 3);
}

TEST_CASE("compile") {
  Run r = Nlq({"compile", "-w", kFig, "--format", "datalog", nlq::testing::kNlqRun});
  CHECK(r.code == 0);
  CHECK(Lines(r.out) == 1);
  CHECK(nlq::AlphaEquivalent(nlq::ParseRules(r.out), nlq::ParseRules(nlq::testing::kDbqRun)));

  Run none = Nlq({"compile", "-w", kFig, "with", "title", "'Principles of Medicine'"});
  CHECK(none.code == 2);
  CHECK(none.out.empty());
  CHECK(none.err.find("no solar-class") != std::string::npos);

  Run two = Nlq({"compile", "-w", kFig,
                 "Find books with title 'Principles of Medicine' written by Bob or Alice and "
                 "whose price is less than 30 dollars"});
  CHECK(two.code == 0);
  CHECK(Lines(two.out) == 2);

  Run explain = Nlq({"compile", "-w", kFig, "--explain", nlq::testing::kNlqRun});
  CHECK(explain.out == r.out);
  CHECK(explain.err.find("\"enriched\"") != std::string::npos);
  CHECK(explain.err.find("\"parts\"") != std::string::npos);

  Run conllu = Nlq({"compile", "-w", kFig, "--parser", "conllu:" + kFig + "/nlq_run.conllu",
                    nlq::testing::kNlqRun});
  CHECK(conllu.code == 0);
  CHECK(conllu.out == r.out);

  Run sparql = Nlq({"compile", "-w", kFig, "--format", "sparql", nlq::testing::kNlqRun});
  CHECK(sparql.out.find("FILTER (?y4 < 30)") != std::string::npos);
  Run json = Nlq({"compile", "-w", kFig, "--format", "json", nlq::testing::kNlqRun});
  CHECK(json.out.find("\"rules\"") != std::string::npos);
}

TEST_CASE("query") {
  nlq::FactStore demo = nlq::LoadFactsFile(kDemo + "/facts.txt");
  // direct scan: titled books by both authors under 30
  using nlq::testing::Id;
  std::set<nlq::Tuple> scan;
  for (const nlq::Fact &f : demo.facts()) {
    if (f.predicate != "Book") continue;
    const nlq::Value &b = f.args[0];
    if (!demo.Contains({"hasTitle", {b, nlq::Text{"Principles of Medicine"}}})) continue;
    if (!demo.Contains({"writtenBy", {b, Id(":bob")}}) ||
        !demo.Contains({"writtenBy", {b, Id(":alice")}}) ||
        !demo.Contains({"Person", {Id(":bob")}}) || !demo.Contains({"Person", {Id(":alice")}})) {
      continue;
    }
    for (const nlq::Fact &g : demo.facts()) {
      if (g.predicate == "hasPrice" && g.args[0] == b &&
          std::get<nlq::Number>(g.args[1]).value < 30) {
        scan.insert({b});
      }
    }
  }
  const auto oracle = nlq::FormatAnswers(scan);
  REQUIRE(oracle.size() == 1);
  Run r = Nlq({"query", "-w", kDemo, nlq::testing::kNlqRun});
  CHECK(r.code == 0);
  CHECK(r.out == oracle[0] + "\n");

  Run nothing = Nlq({"query", "-w", kDemo, "Find books written by Erin whose price is less than 5 dollars"});
  CHECK(nothing.code == 0);
  CHECK(nothing.out.empty());

  Run bob = Nlq({"query", "-w", kDemo, "Find books written by Bob"});
  Run alice = Nlq({"query", "-w", kDemo, "Find books written by Alice"});
  Run either = Nlq({"query", "-w", kDemo, "Find books written by Bob or Alice"});
  std::set<std::string> united;
  for (const Run *x : {&bob, &alice}) {
    std::istringstream in(x->out);
    for (std::string l; std::getline(in, l);) united.insert(l);
  }
  std::string expected;
  for (const std::string &l : united) expected += l + "\n";
  CHECK(either.out == expected);
  CHECK(Lines(either.out) > Lines(bob.out));
}

TEST_CASE("eval") {
  Run r = Nlq({"eval", "-w", kDemo});
  CHECK(r.code == 0);
  CHECK(r.out.find("weighted avg") != std::string::npos);
  CHECK(r.out.find("exact-match compilation:") != std::string::npos);
  Run j = Nlq({"eval", "-w", kDemo, "--json"});
  CHECK(j.out.find("\"compilation\"") != std::string::npos);
  CHECK(Nlq({"eval", "-w", kDemo, "--corpus", "/nonexistent.jsonl"}).code == 3);

  fs::path dir = Scratch("empty_corpus");
  std::ofstream(dir / "c.jsonl") << "# nothing\n";
  Run empty = Nlq({"eval", "-w", kDemo, "--corpus", (dir / "c.jsonl").string()});
  CHECK(empty.code == 3);
  CHECK(empty.err.find("empty corpus") != std::string::npos);

  // poor scores are still a success
  std::ofstream(dir / "bad.jsonl")
      << "{\"text\": \"Find books written by Bob\", \"expected\": [{\"value\": \":erin\", "
         "\"dbtype\": \"Person\"}]}\n";
  Run poor = Nlq({"eval", "-w", kDemo, "--corpus", (dir / "bad.jsonl").string()});
  CHECK(poor.code == 0);
  CHECK(poor.out.find("0.00") != std::string::npos);
}

TEST_CASE("build-lexicon") {
  fs::path a = Scratch("lex_a"), b = Scratch("lex_b");
  const std::string facts = kDemo + "/facts.txt", conf = kDemo + "/lexgen.conf";
  Run first = Nlq({"build-lexicon", "--facts", facts, "--config", conf, "--out", a.string()});
  CHECK(first.code == 0);
  CHECK(first.out.empty());
  Run second = Nlq({"build-lexicon", "--facts", facts, "--config", conf, "--out", a.string()});
  Run third = Nlq({"build-lexicon", "--facts", facts, "--config", conf, "--out", b.string()});
  CHECK(second.code == 0);
  for (const char *f : {"lexicon.tsv", "index.json"}) {
    const std::string x = Slurp(a / f), y = Slurp(b / f);
    CHECK(!x.empty());
    CHECK(std::hash<std::string>{}(x) == std::hash<std::string>{}(y));
    CHECK(x == y);
  }
  CHECK(Slurp(a / "lexicon.tsv") == Slurp(kDemo + "/lexicon.tsv"));

  Run missing = Nlq({"build-lexicon", "--facts", "/nonexistent/facts.txt", "--config", conf,
                     "--out", a.string()});
  CHECK(missing.code == 3);
  CHECK(missing.err.find("/nonexistent/facts.txt") != std::string::npos);
}

TEST_CASE("repl") {
  std::string oracle = Nlq({"query", "-w", kDemo, nlq::testing::kNlqRun}).out;
  std::string rule = Nlq({"compile", "-w", kDemo, nlq::testing::kNlqRun}).out;
  Run r = Nlq({"repl", "-w", kDemo},
              nlq::testing::kNlqRun + "\n\n   \nwith title 'Cold Water'\n:explain\n" +
                  nlq::testing::kNlqRun + "\n:quit\nFind books\n");
  CHECK(r.code == 0);
  CHECK(r.out == rule + oracle + rule + oracle);
  CHECK(r.err.find("no solar-class") != std::string::npos);
  CHECK(r.err.find("\"entities\"") != std::string::npos);

  Run eof = Nlq({"repl", "-w", kDemo}, "Find books written by Bob\n");
  CHECK(eof.code == 0);
  CHECK(Lines(eof.out) > 1);
}
