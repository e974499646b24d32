#pragma once

#include <stdexcept>
#include <string>

namespace kpdrop {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A keyphrase that cannot be matched or serialized (empty after
// tokenization, contains the target delimiter, ...).
class InvalidKeyphrase : public Error {
public:
  using Error::Error;
};

// Caller broke an operation's precondition.
class ContractViolation : public Error {
public:
  using Error::Error;
};

// Corpus file problems that abort the whole run (duplicate ids, unreadable
// files, unknown document ids).
class CorpusError : public Error {
public:
  using Error::Error;
};

} // namespace kpdrop
