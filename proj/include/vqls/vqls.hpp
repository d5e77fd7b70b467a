// Copyright 2026 The vqls-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "vqls/analysis.hpp"
#include "vqls/circuit.hpp"
#include "vqls/cost.hpp"
#include "vqls/error.hpp"
#include "vqls/hadamard.hpp"
#include "vqls/io.hpp"
#include "vqls/numerics.hpp"
#include "vqls/optimizer.hpp"
#include "vqls/parallel.hpp"
#include "vqls/pauli.hpp"
#include "vqls/problems.hpp"
