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

// Solves the Ising instance at n = 4 with the global and local costs and
// prints the final cost, the alignment with the exact solution and the
// number of cost evaluations.

#include <iostream>

#include "vqls/vqls.hpp"

int main() {
    using namespace vqls;
    const auto inst = problems::make_ising(4);
    std::cout << "ising n=4, condition number " << io::fmt(inst.metadata.condition_number) << "\n";
    for (const CostKind kind : {CostKind::Global, CostKind::Local}) {
        optimizer::OptimizerConfig cfg;
        cfg.seed = 1;
        cfg.max_evaluations = 20000;
        const auto r = optimizer::solve(inst, 1, kind, cfg);
        std::cout << kind_name(kind) << ": cost " << io::fmt(r.best_cost) << ", |cos| " << io::fmt(r.cosine)
                  << ", evaluations " << r.evaluations << " (" << optimizer::termination_name(r.termination)
                  << ")\n";
    }
    return 0;
}
