#pragma once

#include <stdexcept>
#include <string>

namespace hiermc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix failed the positive-definiteness check even after jitter.
struct DefinitenessError : Error {
  using Error::Error;
};

// Parameter outside the domain of a distribution (e.g. Wishart dof <= p-1).
struct DomainError : Error {
  using Error::Error;
};

struct InputError : Error {
  using Error::Error;
};

struct InsufficientSamplesError : Error {
  using Error::Error;
};

// Metropolis chain made no move for too many consecutive steps.
struct StuckChainError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct SchemaError : ConfigError {
  using ConfigError::ConfigError;
};

struct IngestionError : Error {
  using Error::Error;
};

struct TaskError : Error {
  TaskError(int source_id, const std::string& what)
      : Error(what), source_id(source_id) {}
  int source_id;
};

// Pilot chain shorter than the Raftery-Lewis minimum; carries the minimum.
struct NeedsLongerPilotError : Error {
  NeedsLongerPilotError(long n_min, const std::string& what)
      : Error(what), n_min(n_min) {}
  long n_min;
};

}  // namespace hiermc
