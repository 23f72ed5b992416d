#pragma once

#include <stdexcept>
#include <string>

namespace causalnav {

// Base for every error raised by the library. Callers that only care about
// "something in causalnav failed" catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario / parameter / model documents. The message carries the
// JSON field path of the offending entry, e.g. "slots[3].occupancy.X".
class DocumentError : public Error {
 public:
  DocumentError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

class InferenceError : public Error {
 public:
  using Error::Error;
};

// P(condition) == 0: the query is undefined rather than NaN.
class ZeroProbabilityError : public InferenceError {
 public:
  using InferenceError::InferenceError;
};

class PipelineError : public Error {
 public:
  using Error::Error;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

class StatsError : public Error {
 public:
  using Error::Error;
};

}  // namespace causalnav
