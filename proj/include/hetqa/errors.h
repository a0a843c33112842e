// Copyright 2026 The HetQA Authors.
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

#ifndef HETQA_ERRORS_H_
#define HETQA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace hetqa {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input supplied by the caller (bad config, bad file, violated
// precondition).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A remote service could not be reached or timed out.
class TransportError : public Error {
 public:
  using Error::Error;
};

// A remote service answered with a payload that does not follow the wire
// protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class RetrievalUnavailable : public Error {
 public:
  using Error::Error;
};

class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class EntityDetectionUnavailable : public Error {
 public:
  using Error::Error;
};

class LinkerUnavailable : public Error {
 public:
  using Error::Error;
};

class ParseUnavailable : public Error {
 public:
  using Error::Error;
};

class UnboundSlot : public Error {
 public:
  explicit UnboundSlot(const std::string &slot)
      : Error("unbound prompt slot: " + slot), slot_(slot) {}
  const std::string &slot() const { return slot_; }

 private:
  std::string slot_;
};

class UnresolvedMention : public Error {
 public:
  explicit UnresolvedMention(const std::string &surface)
      : Error("unresolved mention: " + surface), surface_(surface) {}
  const std::string &surface() const { return surface_; }

 private:
  std::string surface_;
};

}  // namespace hetqa

#endif  // HETQA_ERRORS_H_
