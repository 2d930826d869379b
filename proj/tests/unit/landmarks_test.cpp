#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "shapestat/error.hpp"
#include "shapestat/landmarks.hpp"
#include "test_support.hpp"

using namespace shapestat;
using namespace shapestat::testing;

namespace {

LandmarkFile parse(const std::string& text, LandmarkFormat format = LandmarkFormat::Native) {
  std::istringstream in(text);
  return parse_landmarks(in, format, "t");
}

// code and message of the error thrown by parsing `text`
std::pair<ErrorCode, std::string> failure(const std::string& text,
                                          LandmarkFormat format = LandmarkFormat::Native) {
  try {
    parse(text, format);
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  FAIL("expected an Error");
  return {};
}

}  // namespace

TEST_CASE("native format") {
  const LandmarkFile f = parse("3 1\n0 0\n1 0\n0 1");
  CHECK(f.k == 3);
  CHECK(f.n() == 1);
  CHECK(f.objects[0].points()(2) == Complex(0, 1));
  CHECK(f.label == "t");

  const LandmarkFile blocks = parse("# comment\n3 2\n\n0 0\n1 0\n0 1\n\n1e-3 -2.5\n4 4\n-1 .5\n");
  CHECK(blocks.n() == 2);
  CHECK(blocks.objects[1].points()(0) == Complex(1e-3, -2.5));
  CHECK(blocks.objects[1].points()(2) == Complex(-1, 0.5));
  CHECK(blocks.shapes().size() == 2);
}

TEST_CASE("native format errors") {
  auto [code, msg] = failure("3 1\n0 0\n1 0\n");
  CHECK(code == ErrorCode::ShapeMismatch);
  CHECK(msg.find("line 3") != std::string::npos);

  auto [code2, msg2] = failure("3 2\n0 0\n1 0\n0 1\n\n2 2\n3 3\n");
  CHECK(code2 == ErrorCode::ShapeMismatch);
  CHECK(msg2.find("line 7") != std::string::npos);

  auto [code3, msg3] = failure("3 1\n0 0\n1 zero\n0 1\n");
  CHECK(code3 == ErrorCode::ParseError);
  CHECK(msg3.find("line 3") != std::string::npos);

  CHECK(failure("3 1\n0,5 0\n1 0\n0 1\n").first == ErrorCode::ParseError);
  CHECK(failure("3 2\n0 0\n1 0\n0 1\n").first == ErrorCode::ParseError);
  CHECK(failure("2 1\n0 0\n1 0\n").first == ErrorCode::ParseError);
  CHECK(failure("513 1\n").first == ErrorCode::ParseError);
  CHECK(failure("").first == ErrorCode::ParseError);
  CHECK(failure("3 1\n1 1\n1 1\n1 1\n").first == ErrorCode::DegenerateConfiguration);
}

TEST_CASE("csv format") {
  const LandmarkFile f = parse(
      "object,landmark,x,y\n"
      "a,2,1,0\n"
      "a,1,0,0\n"
      "a,3,0,1\n"
      "b,1,0,0\n"
      "b,2,2,0\n"
      "b,3,0,2\n",
      LandmarkFormat::Csv);
  CHECK(f.k == 3);
  CHECK(f.n() == 2);
  CHECK(f.objects[0].points()(1) == Complex(1, 0));
  CHECK(f.objects[1].points()(2) == Complex(0, 2));

  CHECK(failure("object,landmark,x,y\na,1,0,0\na,2,1,0\na,3,0,1\nb,1,0,0\nb,2,1,1\n",
                LandmarkFormat::Csv)
            .first == ErrorCode::ShapeMismatch);
  CHECK(failure("obj,lm,x,y\n", LandmarkFormat::Csv).first == ErrorCode::ParseError);
  CHECK(failure("object,landmark,x,y\na,1,0,0\na,3,1,0\na,4,0,1\n", LandmarkFormat::Csv).first ==
        ErrorCode::ParseError);
}

TEST_CASE("write then parse reproduces coordinates bit-exactly") {
  Philox4x32 rng(5);
  LandmarkFile file;
  file.label = "round";
  file.k = 7;
  for (int i = 0; i < 25; ++i) {
    ComplexVector z = random_complex_vector(rng, 7);
    z *= std::exp(10.0 * standard_normal(rng));
    file.objects.emplace_back(z);
  }
  for (LandmarkFormat format : {LandmarkFormat::Native, LandmarkFormat::Csv}) {
    std::stringstream buf;
    write_landmarks(buf, file, format);
    const LandmarkFile back = parse_landmarks(buf, format, "round");
    REQUIRE(back.n() == file.n());
    REQUIRE(back.k == file.k);
    for (int i = 0; i < file.n(); ++i) {
      for (int j = 0; j < file.k; ++j) {
        const Complex a = file.objects[i].points()(j);
        const Complex b = back.objects[i].points()(j);
        CHECK(a.real() == b.real());
        CHECK(a.imag() == b.imag());
      }
    }
  }
}

TEST_CASE("file round trip and label") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "shapestat_landmarks_test.csv";
  LandmarkFile file = parse("3 1\n0 0\n1 0\n0 1");
  write_landmarks(path, file, LandmarkFormat::Csv);
  const LandmarkFile back = parse_landmarks(path, LandmarkFormat::Csv);
  CHECK(back.label == "shapestat_landmarks_test");
  CHECK(back.objects[0].points() == file.objects[0].points());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(parse_landmarks(dir / "does_not_exist.txt", LandmarkFormat::Native), Error);
}

TEST_CASE("format names and number formatting") {
  CHECK(parse_landmark_format("native") == LandmarkFormat::Native);
  CHECK(parse_landmark_format("csv") == LandmarkFormat::Csv);
  CHECK_THROWS_AS(parse_landmark_format("xml"), Error);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
}
