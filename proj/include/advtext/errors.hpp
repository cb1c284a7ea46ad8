// Copyright 2026 The advtext Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace advtext {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition or invariant was broken by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Base for faults raised by model clients at inference time. Attack
// campaigns catch this family per data point and keep running.
class ClientError : public Error {
 public:
  using Error::Error;
};

// Network-level failure (timeout, refused connection, 5xx). Retriable.
class TransportError : public ClientError {
 public:
  using ClientError::ClientError;
};

// The backend answered but the payload does not match the wire format.
class MalformedResponse : public ClientError {
 public:
  using ClientError::ClientError;
};

// A raw model label has no entry in the configured label map.
class MappingError : public ClientError {
 public:
  using ClientError::ClientError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// An endpoint failed the startup reachability probe.
class ConnectivityError : public Error {
 public:
  using Error::Error;
};

// Dataset or results file could not be read; message carries the row.
class LoadError : public Error {
 public:
  using Error::Error;
};

class WriteError : public Error {
 public:
  using Error::Error;
};

// A statistic was requested over an empty sample.
class MetricError : public Error {
 public:
  using Error::Error;
};

// Tokenization produced no tokens (empty or all-whitespace input).
class TokenizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace advtext
