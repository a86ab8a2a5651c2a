// Copyright 2026 The SBO Toolkit Authors.
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


// Umbrella header for the whole library.

#ifndef SBO_SBO_HPP_
#define SBO_SBO_HPP_

#include "sbo/core.hpp"
#include "sbo/dist.hpp"
#include "sbo/error.hpp"
#include "sbo/eval.hpp"
#include "sbo/gen.hpp"
#include "sbo/io.hpp"
#include "sbo/opt.hpp"

#endif  // SBO_SBO_HPP_
