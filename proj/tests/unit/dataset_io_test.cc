// Copyright 2026 The sparsepref Authors.
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

#include "sparsepref/dataset_io.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "sparsepref/error.h"
#include "test_util.h"

namespace sparsepref {
namespace {

PreferenceDataset Sample(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  return testing::RandomDataset(n, d, Link::Btl(), Eigen::VectorXd::Ones(d),
                                0.5, rng);
}

void ExpectSame(const PreferenceDataset& a, const PreferenceDataset& b) {
  ASSERT_EQ(a.n(), b.n());
  ASSERT_EQ(a.d(), b.d());
  EXPECT_EQ(a.labels(), b.labels());
  EXPECT_EQ(a.x0(), b.x0());
  EXPECT_EQ(a.x1(), b.x1());
}

std::string ErrorOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(DatasetIoTest, CsvRoundTripIsExact) {
  const auto ds = Sample(25, 4, 1);
  std::stringstream ss;
  WriteDatasetCsv(ds, ss);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "y,x0_1,x0_2,x0_3,x0_4,x1_1,x1_2,x1_3,x1_4");
  ExpectSame(ds, ReadDatasetCsv(ss));
}

TEST(DatasetIoTest, JsonLinesRoundTripIsExact) {
  const auto ds = Sample(25, 3, 2);
  std::stringstream ss;
  WriteDatasetJsonLines(ds, ss);
  ExpectSame(ds, ReadDatasetJsonLines(ss));
}

TEST(DatasetIoTest, FileRoundTripByExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "sparsepref_io_test";
  std::filesystem::create_directories(dir);
  const auto ds = Sample(10, 2, 3);
  for (const char* name : {"a.csv", "a.jsonl"}) {
    const std::string path = (dir / name).string();
    WriteDataset(ds, path);
    ExpectSame(ds, ReadDataset(path));
  }
  EXPECT_EQ(FormatForPath("x.jsonl"), DatasetFormat::kJsonLines);
  EXPECT_EQ(FormatForPath("x.csv"), DatasetFormat::kCsv);
  std::filesystem::remove_all(dir);
}

TEST(DatasetIoTest, CsvColumnCountMismatchNamesLine) {
  std::stringstream ss("y,x0_1,x0_2,x1_1,x1_2\n0,1,2,3,4\n1,1,2,3\n");
  const std::string msg = ErrorOf([&] { ReadDatasetCsv(ss); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(DatasetIoTest, CsvRejectsBadValues) {
  std::stringstream bad_label("y,x0_1,x1_1\n2,1,1\n");
  EXPECT_NE(ErrorOf([&] { ReadDatasetCsv(bad_label); }).find("line 2"), std::string::npos);
  std::stringstream bad_number("y,x0_1,x1_1\n0,abc,1\n");
  EXPECT_NE(ErrorOf([&] { ReadDatasetCsv(bad_number); }).find("line 2"), std::string::npos);
  std::stringstream bad_header("y,a,b\n0,1,1\n");
  EXPECT_NE(ErrorOf([&] { ReadDatasetCsv(bad_header); }).find("line 1"), std::string::npos);
  std::stringstream empty("");
  EXPECT_THROW(ReadDatasetCsv(empty), ParseError);
}

TEST(DatasetIoTest, CsvHeaderOnlyIsEmptyDataset) {
  std::stringstream ss("y,x0_1,x1_1\n");
  const auto ds = ReadDatasetCsv(ss);
  EXPECT_TRUE(ds.empty());
  EXPECT_EQ(ds.d(), 1);
}

TEST(DatasetIoTest, JsonLinesErrorsNameLine) {
  std::stringstream length("{\"y\":0,\"x0\":[1,2],\"x1\":[3,4]}\n{\"y\":1,\"x0\":[1],\"x1\":[3,4]}\n");
  EXPECT_NE(ErrorOf([&] { ReadDatasetJsonLines(length); }).find("line 2"), std::string::npos);
  std::stringstream syntax("\n{\"y\":0,\"x0\":[1],\"x1\":[3]}\n{oops\n");
  EXPECT_NE(ErrorOf([&] { ReadDatasetJsonLines(syntax); }).find("line 3"), std::string::npos);
  std::stringstream missing("{\"y\":0,\"x0\":[1]}\n");
  EXPECT_NE(ErrorOf([&] { ReadDatasetJsonLines(missing); }).find("line 1"), std::string::npos);
}

TEST(DatasetIoTest, MissingFileIsIoError) {
  EXPECT_THROW(ReadDataset("/nonexistent/dir/data.csv"), IoError);
  EXPECT_THROW(WriteDataset(Sample(1, 1, 4), "/nonexistent/dir/data.csv"), IoError);
}

TEST(DatasetIoTest, ParseErrorCarriesPath) {
  const auto path = (std::filesystem::temp_directory_path() / "sparsepref_bad.csv").string();
  {
    std::ofstream out(path);
    out << "y,x0_1,x1_1\n0,1\n";
  }
  const std::string msg = ErrorOf([&] { ReadDataset(path); });
  EXPECT_NE(msg.find(path), std::string::npos);
  EXPECT_NE(msg.find("line 2"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(FormatDoubleTest, SeventeenDigitsRoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.Uniform() - 0.5) * std::pow(10.0, rng.Index(30) - 15.0);
    ASSERT_EQ(std::strtod(FormatDouble(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(FormatDouble(0.1), "0.10000000000000001");
  EXPECT_EQ(FormatDouble(2.0), "2");
}

}  // namespace
}  // namespace sparsepref
