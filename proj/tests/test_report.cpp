/*
 * Copyright 2026 The phasediag Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "phasediag/model_io.hpp"
#include "phasediag/report.hpp"

#include <gtest/gtest.h>

using namespace phasediag;

namespace {

DiagramReport reduced_report(const ReportOptions& opt) {
    auto dyn = load_model(PHASEDIAG_MODELS_DIR "/ed-reduced.yaml").dynamics();
    return make_report("ed-reduced", {}, dyn, build_diagram(dyn, {2}), opt);
}

} // namespace

TEST(Report, JsonRoundTrip) {
    ReportOptions opt;
    opt.full_dim_only = true;
    opt.normalize = "lambda";
    opt.box = 8;
    auto r = reduced_report(opt);
    EXPECT_EQ(r.cells.size(), 7u);
    for (const auto& c : r.cells) EXPECT_FALSE(c.vertices.empty());
    auto again = report_from_json(nlohmann::json::parse(to_json(r).dump()));
    EXPECT_TRUE(again == r);
}

TEST(Report, AllCellsWithoutSection) {
    auto r = reduced_report({});
    EXPECT_EQ(r.cells.size(), 14u);
    EXPECT_FALSE(r.normalize.has_value());
    EXPECT_EQ(r.stats.strictly_feasible, 16u);
    EXPECT_TRUE(report_from_json(to_json(r)) == r);
}

TEST(Report, RowFormatting) {
    std::vector<std::string> names{"lambda", "N_C", "N_J", "N_S"};
    EXPECT_EQ(format_row({{5, 0, -1, 0}, 0, false}, names), "5*lambda - N_J <= 0");
    EXPECT_EQ(format_row({{0, 0, 0, 0}, 0, true}, names), "0 = 0");
    EXPECT_EQ(format_row({{-1, Rational(2, 7), 0, 0}, 3, false}, names), "-lambda + 2/7*N_C <= 3");
}

TEST(Report, CsvHasOneLinePerCellAndCounter) {
    ReportOptions opt;
    opt.full_dim_only = true;
    auto csv = to_csv(reduced_report(opt));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 7 * 6);
    EXPECT_NE(csv.find("\"1/7*N_C\""), std::string::npos);
}

TEST(Report, MalformedJson) {
    EXPECT_THROW(report_from_json(nlohmann::json::parse("{\"model\": 3}")), SchemaError);
    auto j = to_json(reduced_report({}));
    j["cells"][0]["rows"][0]["kind"] = ">=";
    EXPECT_THROW(report_from_json(j), SchemaError);
}
