// Copyright 2026 The mmqubo Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mmqubo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// A problem instance document is malformed or violates an instance invariant.
/// `path()` names the offending field, e.g. `containers[3].routes[0].tracks[1]`.
class InstanceError : public Error {
 public:
    InstanceError(std::string path, const std::string& message)
            : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

 private:
    std::string path_;
};

/// A model or polynomial does not satisfy an operation's precondition
/// (degree too high, inconsistent dimensions, wrong variant, ...).
class ModelError : public Error {
 public:
    using Error::Error;
};

/// An exhaustive routine was asked to enumerate beyond its guard.
class SizeLimitError : public Error {
 public:
    using Error::Error;
};

/// Embedding construction or validation failed.
class EmbeddingError : public Error {
 public:
    using Error::Error;
};

}  // namespace mmqubo
