// SPDX-License-Identifier: Apache-2.0
//
// ckmbf: environment-aware hybrid beamforming with channel knowledge maps
// Copyright (C) 2026 The ckmbf authors
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

#include "ckmbf/errors.hpp"
#include "ckmbf/path_csv.hpp"
#include "ckmbf/rng.hpp"

#include <doctest.h>

#include <sstream>

using namespace ckm;

namespace
{

std::string header()
{
    return std::string(kPathCsvHeader) + "\n";
}

std::size_t error_line(const std::string &text)
{
    std::istringstream in(text);
    try
    {
        import_paths_csv(in);
    }
    catch (const ParseError &e)
    {
        return e.line();
    }
    return 0;
}

} // namespace

TEST_CASE("import_paths_csv: header only and single row")
{
    std::istringstream empty(header());
    CHECK(import_paths_csv(empty).empty());

    std::istringstream one(header() + "a,1.5,-2,3,0.25,-0.5,1.0,2.0,0.5,6.0\n");
    const auto sets = import_paths_csv(one);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].id == "a");
    CHECK(sets[0].location == Vec3{1.5, -2.0, 3.0});
    REQUIRE(sets[0].paths.size() == 1);
    const Path &p = sets[0].paths[0];
    CHECK(p.gain == cx(0.25, -0.5));
    CHECK(p.aoa == AnglePair{1.0, 2.0});
    CHECK(p.aod == AnglePair{0.5, 6.0});
}

TEST_CASE("import_paths_csv: grouping and bit-identical round trip")
{
    Rng rng(99);
    std::vector<PathSet> sets(2);
    for (int s = 0; s < 2; ++s)
    {
        sets[s].id = "site" + std::to_string(s);
        sets[s].location = {uniform(rng, -50, 50), uniform(rng, -50, 50), uniform(rng, 0, 3)};
        for (int l = 0; l < 3; ++l)
            sets[s].paths.push_back({complex_gaussian(rng, 1e-8),
                                     {uniform(rng, 0, kPi), uniform(rng, 0, kTwoPi)},
                                     {uniform(rng, 0, kPi), uniform(rng, 0, kTwoPi)}});
    }
    // interleave rows so grouping is exercised
    std::ostringstream first;
    export_paths_csv(first, sets);
    std::istringstream in(first.str());
    const auto back = import_paths_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back == sets);

    std::ostringstream second;
    export_paths_csv(second, back);
    CHECK(second.str() == first.str());

    std::string text = header();
    std::istringstream lines(first.str());
    std::string line, skip;
    std::getline(lines, skip);
    std::vector<std::string> rows;
    while (std::getline(lines, line))
        rows.push_back(line);
    for (int k : {0, 3, 1, 4, 2, 5})
        text += rows[static_cast<std::size_t>(k)] + "\n";
    std::istringstream interleaved(text);
    CHECK(import_paths_csv(interleaved) == sets);
}

TEST_CASE("import_paths_csv: errors carry line numbers")
{
    CHECK(error_line("") == 0);
    CHECK(error_line("id,x\n") == 1);
    CHECK(error_line(header() + "a,1,2,3,1,0,1,1,1,1\na,1,2,3,1,0,1,1,1\n") == 3);
    CHECK(error_line(header() + "a,1,2,3,1,0,4.0,1,1,1\n") == 2);
    CHECK(error_line(header() + "a,1,2,3,1,0,1,6.3,1,1\n") == 2);
    CHECK(error_line(header() + "a,1,2,3,1,zero,1,1,1,1\n") == 2);
    CHECK(error_line(header() + "\na,1,2,3,1,0,1,1,1,1\na,1,2,4,1,0,1,1,1,1\n") == 4);
    CHECK(error_line(header() + ",1,2,3,1,0,1,1,1,1\n") == 2);
    CHECK(error_line(header() + "a,1,2,3,1,nan,1,1,1,1\n") == 2);

    std::istringstream missing("");
    CHECK_THROWS_AS(import_paths_csv(missing), ParseError);
}

TEST_CASE("export_paths_csv: unnamed sets are labelled by position")
{
    std::vector<PathSet> sets(1);
    sets[0].paths.push_back({cx(1.0, 0.0), {1.0, 1.0}, {1.0, 1.0}});
    std::ostringstream out;
    export_paths_csv(out, sets);
    CHECK(out.str().find("\nloc0,") != std::string::npos);
}
