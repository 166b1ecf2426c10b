#pragma once

#include <stdexcept>
#include <string>

namespace stcausal {

enum class Errc {
  // data / usage errors (CLI exit code 2)
  MalformedRow,
  UnknownSensor,
  DuplicateTimestamp,
  DegenerateSeries,
  TooFewSamples,
  InsufficientData,
  EmptyRegion,
  EmptyDatabase,
  InstanceTooLarge,
  EmptyTimestampList,
  NoPatterns,
  NoUsableRows,
  MissingLags,
  MissingModel,
  BadConfig,
  Io,
  // numerical failures (CLI exit code 3)
  SingularSystem,
  NumericalUnderflow,
  DegenerateCluster,
  UnstableSystem,
  NonConvergence,
};

const char* errc_name(Errc c);

// True for errors that indicate a numerical failure rather than bad input.
bool errc_is_numerical(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace stcausal
