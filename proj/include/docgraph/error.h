// Copyright 2026 The docgraph Authors.
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

#ifndef DOCGRAPH_ERROR_H_
#define DOCGRAPH_ERROR_H_

#include <stdexcept>
#include <string>

namespace docgraph {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files: corpora, edge weights, checkpoints.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Tensor shape or dimension disagreement.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf produced or consumed, or an argument outside an op's domain.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration, labels, vocabularies or variants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace docgraph

#endif  // DOCGRAPH_ERROR_H_
