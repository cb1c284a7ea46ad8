// Copyright 2026 The advtext Authors.
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

#include "advtext/dataset.hpp"

#include <random>
#include <string>

#include <doctest.h>

#include "advtext/results_csv.hpp"
#include "support/temp_dir.hpp"

using namespace advtext;
using testsupport::TempDir;

namespace {

const Label kNeg{"neg"};
const Label kNeu{"neu"};
const Label kPos{"pos"};

void write(const std::filesystem::path& path, const std::string& content) {
  detail::write_file(path, content);
}

}  // namespace

TEST_CASE("csv dataset loads with declared labels") {
  TempDir tmp("data_csv");
  write(tmp.file("d.csv"),
        "id,text,label\n"
        "a,first text,neg\n"
        "b,second text,neu\n"
        "c,third text,pos\n");
  LoadOptions options;
  options.label_set = {kNeg, kNeu, kPos};
  Dataset ds = load_dataset(tmp.file("d.csv"), DatasetFormat::Csv, {}, options);
  REQUIRE(ds.points.size() == 3);
  CHECK(ds.points[0] == DataPoint{"a", "first text", kNeg});
  CHECK(ds.points[2] == DataPoint{"c", "third text", kPos});
  CHECK(ds.name == "d");
}

TEST_CASE("csv and jsonl encodings load to equal datasets") {
  TempDir tmp("data_eq");
  write(tmp.file("d.csv"),
        "id,text,label\n"
        "a,\"comma, text\",neg\n"
        "b,plain,pos\n");
  write(tmp.file("d.jsonl"),
        "{\"id\": \"a\", \"text\": \"comma, text\", \"label\": \"neg\"}\n"
        "{\"id\": \"b\", \"text\": \"plain\", \"label\": \"pos\"}\n");
  LoadOptions options;
  options.label_set = {kNeg, kPos};
  options.name = "same";
  Dataset csv = load_dataset(tmp.file("d.csv"), DatasetFormat::Csv, {}, options);
  Dataset jsonl = load_dataset(tmp.file("d.jsonl"), DatasetFormat::Jsonl, {}, options);
  CHECK(csv == jsonl);
}

TEST_CASE("load errors carry the offending row") {
  TempDir tmp("data_err");

  write(tmp.file("missing.csv"), "id,body,label\nx,t,neg\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("missing.csv"), DatasetFormat::Csv),
                       doctest::Contains("missing column 'text'"), LoadError);

  write(tmp.file("dup.csv"), "id,text,label\nx,t1,neg\nx,t2,neg\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("dup.csv"), DatasetFormat::Csv),
                       doctest::Contains("duplicate id 'x' at row 2"), LoadError);

  write(tmp.file("label.csv"), "id,text,label\nx,t1,neg\ny,t2,weird\n");
  LoadOptions options;
  options.label_set = {kNeg, kPos};
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("label.csv"), DatasetFormat::Csv, {}, options),
                       doctest::Contains("row 2"), LoadError);

  write(tmp.file("blank.csv"), "id,text,label\nx,   ,neg\n");
  CHECK_THROWS_WITH_AS(load_dataset(tmp.file("blank.csv"), DatasetFormat::Csv),
                       doctest::Contains("empty text at row 1"), LoadError);

  CHECK_THROWS_AS(load_dataset(tmp.file("nonexistent.csv"), DatasetFormat::Csv), LoadError);
}

TEST_CASE("ids synthesize from the row index when the column is absent") {
  TempDir tmp("data_ids");
  write(tmp.file("noid.csv"), "text,label\nfirst,neg\nsecond,pos\n");
  Dataset ds = load_dataset(tmp.file("noid.csv"), DatasetFormat::Csv);
  REQUIRE(ds.points.size() == 2);
  CHECK(ds.points[0].id == "0");
  CHECK(ds.points[1].id == "1");
  // Labels were inferred in order of first appearance.
  CHECK(ds.label_set == std::vector<Label>{kNeg, kPos});
}

TEST_CASE("column mapping and label map apply on load") {
  TempDir tmp("data_map");
  write(tmp.file("mapped.csv"), "key,body,klass\nk1,some text,LABEL_0\n");
  ColumnSchema schema;
  schema.id = "key";
  schema.text = "body";
  schema.label = "klass";
  LabelMap map{{"LABEL_0", "neg"}};
  LoadOptions options;
  options.label_set = {kNeg};
  options.label_map = &map;
  Dataset ds = load_dataset(tmp.file("mapped.csv"), DatasetFormat::Csv, schema, options);
  REQUIRE(ds.points.size() == 1);
  CHECK(ds.points[0].label == kNeg);
}

TEST_CASE("crlf input is tolerated") {
  TempDir tmp("data_crlf");
  write(tmp.file("crlf.csv"), "id,text,label\r\na,text a,neg\r\n");
  Dataset ds = load_dataset(tmp.file("crlf.csv"), DatasetFormat::Csv);
  REQUIRE(ds.points.size() == 1);
  CHECK(ds.points[0].text == "text a");
}

TEST_CASE("a leading byte-order mark is tolerated on ingestion") {
  TempDir tmp("data_bom");
  write(tmp.file("bom.csv"), "\xEF\xBB\xBFid,text,label\na,text a,neg\n");
  Dataset ds = load_dataset(tmp.file("bom.csv"), DatasetFormat::Csv);
  REQUIRE(ds.points.size() == 1);
  CHECK(ds.points[0].id == "a");
}

// --- results csv -----------------------------------------------------------

namespace {

std::vector<AttackRecord> sample_records() {
  const DataPoint p1{"1", "a good day", kPos};
  const DataPoint p2{"2", "bad day", kNeu};
  const DataPoint p3{"3", "meh, stuff", kNeu};
  const DataPoint p4{"4", "quoted \"text\" here", kPos};
  const DataPoint p6{"6", "line one\nline two", kNeu};
  return {
      make_attempt_record(p1, Prediction(kPos, 0.7), "a great day", Prediction(kPos, 0.9)),
      make_misprediction_record(p2, Prediction(kNeg, 0.8)),
      make_attempt_record(p3, Prediction(kNeu, 0.63), "meh, stuff", Prediction(kNeu, 0.63)),
      make_attempt_record(p4, Prediction(kPos, 0.52), "plain text here", Prediction(kNeu, 0.5)),
      make_skipped_record({"5", "later point", kNeg}),
      make_attempt_record(p6, Prediction(kNeu, 0.6), "joined line", Prediction(kNeu, 0.45)),
  };
}

}  // namespace

TEST_CASE("results csv header and placeholders") {
  const std::string csv = render_results_csv(sample_records());
  CHECK(csv.rfind(std::string(kResultsHeader) + "\n", 0) == 0);
  // Mispredicted row: four '-' placeholders for the attack columns.
  CHECK(csv.find("2,bad day,neu,neg,0.8,-,-,Misprediction,-\n") != std::string::npos);
  // Skipped row keeps even the initial prediction unfilled.
  CHECK(csv.find("5,later point,neg,-,-,-,-,Skipped,-\n") != std::string::npos);
}

TEST_CASE("results csv round-trips records and bytes") {
  const std::vector<AttackRecord> records = sample_records();
  TempDir tmp("results_rt");
  save_results(records, tmp.file("out.csv"));
  const std::vector<AttackRecord> parsed = load_results(tmp.file("out.csv"));
  CHECK(parsed == records);

  // save -> parse -> save is byte-stable.
  const std::string once = render_results_csv(records);
  const std::string twice = render_results_csv(parse_results(once));
  CHECK(once == twice);
}

TEST_CASE("empty record list writes a header-only file") {
  TempDir tmp("results_empty");
  save_results({}, tmp.file("empty.csv"));
  CHECK(detail::read_file(tmp.file("empty.csv")) == std::string(kResultsHeader) + "\n");
  CHECK(load_results(tmp.file("empty.csv")).empty());
}

TEST_CASE("the atk* column spelling is accepted on ingestion") {
  const std::string legacy =
      "id,text,label,initPred,initScore,atkPred,atkScore,atkSuccess,atkSent\n"
      "1,a good day,pos,pos,0.7,pos,0.9,Fail,a great day\n";
  const std::vector<AttackRecord> parsed = parse_results(legacy);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].verdict == Verdict::Fail);
  REQUIRE(parsed[0].delta.has_value());
  CHECK(*parsed[0].delta == (0.7 - 0.9) * 100.0);
}

TEST_CASE("results parse rejects broken documents") {
  CHECK_THROWS_AS(parse_results(""), LoadError);
  CHECK_THROWS_AS(parse_results("id,text\n1,t\n"), LoadError);  // missing columns
  CHECK_THROWS_WITH_AS(
      parse_results("id,text,label,initPred,initScore,atckPred,atckScore,atckSuccess,atckSent\n"
                    "1,t,neg,neg,1.7,-,-,Misprediction,-\n"),
      doctest::Contains("invalid initScore"), LoadError);
  CHECK_THROWS_WITH_AS(
      parse_results("id,text,label,initPred,initScore,atckPred,atckScore,atckSuccess,atckSent\n"
                    "1,t,neg,neg,0.7,-,-,Unknown,-\n"),
      doctest::Contains("unknown verdict"), LoadError);
}

TEST_CASE("scores round-trip at full precision") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double init = unit(rng);
    const double attacked = unit(rng);
    const DataPoint dp{"r" + std::to_string(i), "text body", kPos};
    AttackRecord rec =
        make_attempt_record(dp, Prediction(kPos, init), "other body",
                            Prediction(attacked < 0.5 ? kNeu : kPos, attacked));
    const std::vector<AttackRecord> parsed = parse_results(render_results_csv({rec}));
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0] == rec);  // exact double equality via shortest round-trip form
  }
}
