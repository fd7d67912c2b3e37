/*
 * Copyright 2026 The survsynth Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "simulate.hpp"
#include "survsynth/encoder.hpp"
#include "survsynth/error.hpp"
#include "survsynth/folds.hpp"
#include "survsynth/impute.hpp"

using namespace survsynth;
using namespace survsynth::testing;

TEST_SUITE("core_data") {

TEST_CASE("load_csv parses a small typed file") {
  const auto ds = read_csv_text("age,stage,time,event\n50,I,3.5,1\n61,II,2,0\n47,I,7,1\n",
                                age_stage_config());
  CHECK(ds.rows() == 3);
  REQUIRE(ds.cols() == 2);
  CHECK(ds.column_schema(0).kind == ColumnKind::continuous);
  CHECK(ds.column_schema(1).kind == ColumnKind::categorical);
  CHECK(ds.column_schema(1).categories == std::vector<std::string>{"I", "II"});
  CHECK(ds.value(1, 0) == 61.0);
  CHECK(ds.label(1, 1) == "II");
  CHECK(ds.time()[0] == 3.5);
  CHECK(ds.event()[1] == 0);
}

TEST_CASE("load_csv names the missing event column") {
  try {
    read_csv_text("age,stage,time\n50,I,3\n", age_stage_config());
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("event") != std::string::npos);
  }
}

TEST_CASE("load_csv rejects bad time and event cells with row indices") {
  const auto cfg = age_stage_config();
  try {
    read_csv_text("age,stage,time,event\n50,I,3,1\n51,I,abc,1\n", cfg);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 1);
  }
  try {
    read_csv_text("age,stage,time,event\n50,I,-3,1\n", cfg);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.row() == 0);
  }
  CHECK_THROWS_AS(read_csv_text("age,stage,time,event\n50,I,3,2\n", cfg), DomainError);
  CHECK_THROWS_AS(read_csv_text("age,stage,time,event\n50,I,,1\n", cfg), DomainError);
}

TEST_CASE("unseen categories are appended in first-appearance order") {
  auto cfg = age_stage_config();
  cfg.covariates[1].categories = {"II"};
  const auto ds = read_csv_text("age,stage,time,event\n1,III,1,1\n2,I,1,0\n3,II,2,1\n", cfg);
  CHECK(ds.column_schema(1).categories == std::vector<std::string>{"II", "III", "I"});
}

TEST_CASE("schema invariants are enforced") {
  CHECK_THROWS_AS(SurvivalDataset({{"a", ColumnKind::continuous, {}}, {"a", ColumnKind::continuous, {}}},
                                  {{1.0}, {2.0}}, {1.0}, {1}),
                  SchemaError);
  CHECK_THROWS_AS(SurvivalDataset({{"s", ColumnKind::categorical, {"only"}}}, {{0.0}}, {1.0}, {1}),
                  SchemaError);
  CHECK_THROWS(SurvivalDataset({{"a", ColumnKind::continuous, {}}}, {{1.0, 2.0}}, {1.0}, {1}));
  CHECK_THROWS_AS(SurvivalDataset({{"s", ColumnKind::categorical, {"x", "y"}}}, {{2.0}}, {1.0}, {1}),
                  DomainError);
}

TEST_CASE("CSV quoting and missing tokens") {
  CHECK(split_csv_record(R"(a,"b,c","d""e",)") == std::vector<std::string>{"a", "b,c", "d\"e", ""});
  const auto ds = read_csv_text("age,stage,time,event\nNA,I,1,1\n,II,2,0\n", age_stage_config());
  CHECK(is_missing(ds.value(0, 0)));
  CHECK(is_missing(ds.value(1, 0)));
  CHECK(ds.has_missing());
}

TEST_CASE("impute_missing fills means and modes") {
  SUBCASE("continuous mean") {
    SurvivalDataset ds({{"x", ColumnKind::continuous, {}}}, {{1.0, kMissing, 3.0}}, {1, 2, 3}, {1, 0, 1});
    CHECK(impute_missing(ds).column(0)[1] == 2.0);
  }
  SUBCASE("categorical mode") {
    SurvivalDataset ds({{"k", ColumnKind::categorical, {"A", "B"}}}, {{0, 0, 1, kMissing}},
                       {1, 2, 3, 4}, {1, 0, 1, 1});
    CHECK(impute_missing(ds).label(3, 0) == "A");
  }
  SUBCASE("tie goes to the first category") {
    SurvivalDataset ds({{"k", ColumnKind::categorical, {"A", "B"}}}, {{1, 0, kMissing}}, {1, 2, 3},
                       {1, 0, 1});
    CHECK(impute_missing(ds).label(2, 0) == "A");
  }
  SUBCASE("entirely missing column") {
    SurvivalDataset ds({{"x", ColumnKind::continuous, {}}}, {{kMissing, kMissing}}, {1, 2}, {1, 0});
    CHECK_THROWS_AS(impute_missing(ds), DomainError);
  }
}

TEST_CASE("fit_encoder statistics and layout") {
  SurvivalDataset ds({{"x", ColumnKind::continuous, {}},
                      {"c", ColumnKind::continuous, {}},
                      {"s", ColumnKind::categorical, {"I", "II"}}},
                     {{2.0, 4.0}, {5.0, 5.0}, {0, 1}}, {1, 2}, {1, 1});
  const Encoder enc = Encoder::fit(ds);
  REQUIRE(enc.groups().size() == 3);
  CHECK(enc.groups()[0].mean == 3.0);
  CHECK(enc.groups()[0].std == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(enc.groups()[1].std == kStdFloor);
  CHECK(enc.groups()[2].width == 2);
  CHECK(enc.groups()[2].offset == 2);
  CHECK(enc.width() == 4);

  SurvivalDataset three({{"x", ColumnKind::continuous, {}},
                         {"c", ColumnKind::continuous, {}},
                         {"s", ColumnKind::categorical, {"I", "II"}}},
                        {{3.0}, {5.0}, {0}}, {1}, {1});
  const auto m = enc.encode(three);
  CHECK(m.values(0, 0) == 0.0);
  CHECK(m.values(0, 2) == 1.0);
  CHECK(m.values(0, 3) == 0.0);
}

TEST_CASE("decode takes the argmax with ties to the lowest index") {
  SurvivalDataset ds({{"s", ColumnKind::categorical, {"I", "II"}}}, {{0, 1}}, {1, 2}, {1, 1});
  const Encoder enc = Encoder::fit(ds);
  Eigen::MatrixXd v(2, 2);
  v << 0.2, 0.8, 0.5, 0.5;
  const auto rows = enc.decode(v);
  CHECK(rows.columns[0][0] == 1.0);
  CHECK(rows.columns[0][1] == 0.0);
  CHECK_THROWS_AS(enc.decode(Eigen::MatrixXd(1, 3)), LayoutError);
}

TEST_CASE("encode rejects a schema mismatch") {
  const auto a = random_dataset(10, 2, 1, 1);
  const auto b = random_dataset(10, 1, 1, 1);
  CHECK_THROWS_AS(Encoder::fit(a).encode(b), LayoutError);
}

TEST_CASE("stratified_kfold examples") {
  SUBCASE("nine rows, one stratum") {
    const std::vector<int> strata(9, 0);
    const auto folds = stratified_kfold(strata, 3, 7);
    std::set<std::size_t> all;
    for (const auto& f : folds) {
      CHECK(f.test.size() == 3);
      all.insert(f.test.begin(), f.test.end());
    }
    CHECK(all.size() == 9);
  }
  SUBCASE("proportional split") {
    const std::vector<int> strata = {0, 0, 0, 0, 0, 0, 1, 1, 1};
    for (const auto& f : stratified_kfold(strata, 3, 11)) {
      int a = 0, b = 0;
      for (auto i : f.test) (strata[i] == 0 ? a : b)++;
      CHECK(a == 2);
      CHECK(b == 1);
    }
  }
  SUBCASE("determinism and small strata") {
    const std::vector<int> strata = {0, 1, 0, 1, 0, 1, 0};
    const auto x = stratified_kfold(strata, 3, 5);
    const auto y = stratified_kfold(strata, 3, 5);
    for (std::size_t f = 0; f < 3; ++f) CHECK(x[f].test == y[f].test);
    try {
      stratified_kfold(std::vector<int>{0, 0, 0, 9}, 3, 1);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("9") != std::string::npos);
    }
    CHECK_THROWS_AS(stratified_kfold(strata, 1, 1), DomainError);
  }
}

TEST_CASE("stratified_subsample keeps the event share") {
  std::vector<int> ev(101);
  for (std::size_t i = 0; i < ev.size(); ++i) ev[i] = i % 4 == 0 ? 0 : 1;
  std::vector<std::size_t> rows(ev.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const auto sub = stratified_subsample(rows, ev, 0.5, 3);
  CHECK(sub.size() == 51);
  std::size_t cens = 0;
  for (auto r : sub) cens += ev[r] == 0;
  // 26 censored of 101: half is 13, so 13 or 14.
  CHECK(cens >= 13);
  CHECK(cens <= 14);
}

TEST_CASE("invariant: encode/decode roundtrip and one-hot sums") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ds = random_dataset(60, 3, 2, seed);
    for (const EncoderOptions opts : {EncoderOptions{}, EncoderOptions{true, true}}) {
      const Encoder enc = Encoder::fit(ds, opts);
      const auto m = enc.encode(ds);
      for (const auto& g : enc.groups()) {
        if (g.kind != SlotKind::categorical) continue;
        for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
          CHECK(m.values.row(i).segment(static_cast<Eigen::Index>(g.offset),
                                        static_cast<Eigen::Index>(g.width)).sum() == 1.0);
        }
      }
      const auto back = enc.decode(m);
      for (std::size_t j = 0; j < ds.cols(); ++j) {
        for (std::size_t i = 0; i < ds.rows(); ++i) {
          const double v = ds.value(i, j);
          if (ds.column_schema(j).is_categorical()) {
            CHECK(back.columns[j][i] == v);
          } else {
            CHECK(std::abs(back.columns[j][i] - v) <= 1e-9 * std::max(1.0, std::abs(v)));
          }
        }
      }
      if (opts.include_time) {
        for (std::size_t i = 0; i < ds.rows(); ++i) {
          CHECK(std::abs(back.time[i] - ds.time()[i]) <= 1e-9 * std::max(1.0, ds.time()[i]));
          CHECK(back.event[i] == ds.event()[i]);
        }
      }
    }
  }
}

TEST_CASE("invariant: k-fold test sets partition the rows") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 30 + rng() % 100;
    std::vector<int> strata(n);
    for (auto& s : strata) s = static_cast<int>(rng() % 3);
    const std::size_t k = 2 + rng() % 4;
    std::vector<int> seen(n, 0);
    for (const auto& f : stratified_kfold(strata, k, rng())) {
      CHECK(f.train.size() + f.test.size() == n);
      std::vector<int> in_test(n, 0);
      for (auto i : f.test) {
        ++seen[i];
        in_test[i] = 1;
      }
      for (auto i : f.train) CHECK(in_test[i] == 0);
    }
    for (int c : seen) CHECK(c == 1);
  }
}

TEST_CASE("invariant: load, write and reload yields an equal dataset") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto ds = random_dataset(40, 2, 2, seed);
    auto cols = ds.columns();
    cols[0][3] = kMissing;
    ds = ds.with_columns(cols, {ds.time().begin(), ds.time().end()}, {ds.event().begin(), ds.event().end()});
    std::ostringstream first;
    write_csv(first, ds);
    const auto cfg = schema_config_from(ds);
    const auto loaded = read_csv_text(first.str(), cfg);
    CHECK(loaded == ds);
    std::ostringstream second;
    write_csv(second, loaded);
    CHECK(second.str() == first.str());
    CHECK(read_csv_text(second.str(), cfg) == loaded);
  }
}

TEST_CASE("public dataset files match their published shapes") {
  struct Shape {
    const char* name;
    std::size_t rows, censored, covariates;
  };
  // ACTG320 (aids) has 96 events among 1151 rows.
  for (const Shape s : {Shape{"gbsg", 2232, 965, 7}, Shape{"flchain", 7874, 5705, 9},
                        Shape{"aids", 1151, 1151 - 96, 11}}) {
    const auto ds = load_public(SURVSYNTH_DATA_DIR, s.name);
    if (!ds) {
      MESSAGE(std::string(s.name) << ": no public file, skipped");
      continue;
    }
    const std::string name = s.name;
    CAPTURE(name);
    CHECK(ds->rows() == s.rows);
    CHECK(ds->censored_count() == s.censored);
    CHECK(ds->cols() == s.covariates);
    CHECK_FALSE(ds->has_missing());
  }
}

}  // TEST_SUITE
