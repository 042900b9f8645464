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

#ifndef NLQ_ERROR_H_
#define NLQ_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace nlq {

enum class ErrorCode {
  kParse,            // malformed input file or text
  kContract,         // precondition violated (e.g. unsafe query)
  kConfig,           // inconsistent configuration tables
  kUnknownDbType,    // pred_e on an undeclared DBType
  kUnknownOperator,  // operator value missing from the dictionary
  kNoSolarClass,     // query names no solar-class
  kIo,               // file could not be read or written
  kEmptyCorpus,      // metrics undefined
};

const char *ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The C API maps
// the code onto its status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal findings collected while compiling a query. They are reported on
// the diagnostic stream and never change the result.
class Diagnostics {
 public:
  void Add(std::string message) { messages_.push_back(std::move(message)); }
  const std::vector<std::string> &messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }

 private:
  std::vector<std::string> messages_;
};

}  // namespace nlq

#endif  // NLQ_ERROR_H_
