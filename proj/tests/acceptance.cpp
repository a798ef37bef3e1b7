// SPDX-License-Identifier: Apache-2.0
//
// dris: double-RIS multi-user MIMO transceiver design
// Copyright (C) 2026 The dris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Acceptance checks. With no arguments every criterion runs; otherwise the
// listed criterion numbers. Prints one PASS/FAIL line per criterion and
// exits non-zero if any of them failed.

#include <dris/verify/criteria.hpp>

#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

#ifndef DRIS_CONFIG_DIR
#define DRIS_CONFIG_DIR "configs"
#endif

int main(int argc, char **argv)
{
    using namespace dris::verify;
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i)
        wanted.insert(std::atoi(argv[i]));
    if (wanted.empty())
        wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    const std::string dir = DRIS_CONFIG_DIR;
    bool all_pass = true;
    for (int id : wanted)
    {
        CriterionResult r;
        try
        {
            switch (id)
            {
            case 1: r = criterion_monotone_descent(); break;
            case 2: r = criterion_objective_forms(); break;
            case 3: r = criterion_dense_operators(); break;
            case 4: r = criterion_majorization_chain(); break;
            case 5: r = criterion_kkt(); break;
            case 6: r = criterion_equalizer(); break;
            case 7: r = criterion_phase_update(); break;
            case 8: r = criterion_convergence_speed(dris::load_config(dir + "/paper.cfg")); break;
            case 9: r = criterion_scheme_ordering(dris::load_config(dir + "/desk.cfg"), dris::default_workers()); break;
            default:
                std::cerr << "unknown criterion " << id << "\n";
                return 2;
            }
        }
        catch (const std::exception &e)
        {
            r.id = id;
            r.title = "raised an exception";
            r.pass = false;
            r.detail = e.what();
        }
        std::cout << r.line() << std::endl;
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}
