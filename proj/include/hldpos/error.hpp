//   Copyright 2026 The hldpos-lab Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
#pragma once

#include <stdexcept>
#include <string>

namespace hldpos {

/// Base for every error raised by the library. Callers that only need a
/// message can catch this; the subclasses name the contract that failed.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed curve or engine parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Caller supplied an input outside an operation's domain.
class InputError : public Error {
public:
    using Error::Error;
};

/// A ballot, config or record failed validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Block does not link onto the chain tip.
class AppendError : public Error {
public:
    using Error::Error;
};

/// Block content does not match its commitments (Merkle root, hash).
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Chains with different genesis blocks were compared.
class IncompatibleChainError : public Error {
public:
    using Error::Error;
};

/// No representative could be selected for a group.
class ElectionError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace hldpos
