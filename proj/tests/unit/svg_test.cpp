#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "shapestat/extrinsic.hpp"
#include "shapestat/svg.hpp"
#include "test_support.hpp"

using namespace shapestat;
using namespace shapestat::testing;

namespace {

// Minimal XML well-formedness check: balanced tags, quoted attributes,
// no bare '<' or '&' in text.
bool well_formed(const std::string& xml) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  if (xml.rfind("<?xml", 0) == 0) i = xml.find("?>") + 2;
  bool root_closed = false;
  while (i < xml.size()) {
    const std::size_t lt = xml.find('<', i);
    const std::string text = xml.substr(i, lt == std::string::npos ? std::string::npos : lt - i);
    for (std::size_t a = text.find('&'); a != std::string::npos; a = text.find('&', a + 1)) {
      const std::size_t semi = text.find(';', a);
      if (semi == std::string::npos || semi - a > 6) return false;
    }
    if (lt == std::string::npos) break;
    const std::size_t gt = xml.find('>', lt);
    if (gt == std::string::npos) return false;
    std::string tag = xml.substr(lt + 1, gt - lt - 1);
    if (tag.find('<') != std::string::npos) return false;
    i = gt + 1;
    if (root_closed) return false;
    if (tag.front() == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      root_closed = stack.empty();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    if (self_closing) tag.pop_back();
    static const std::regex element(R"(^([A-Za-z][\w:-]*)((\s+[\w:-]+="[^"<]*")*)\s*$)");
    std::smatch m;
    if (!std::regex_match(tag, m, element)) return false;
    if (!self_closing) stack.push_back(m[1]);
  }
  return stack.empty() && root_closed;
}

struct Point {
  double x;
  double y;
};

std::vector<Point> circles(const std::string& svg) {
  static const std::regex re(R"re(<circle class="landmark" cx="([^"]+)" cy="([^"]+)")re");
  std::vector<Point> out;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
    out.push_back({std::stod((*it)[1]), std::stod((*it)[2])});
  }
  return out;
}

std::vector<Point> star_centers(const std::string& svg) {
  static const std::regex re(R"re(<polygon class="mean" points="([^"]+)")re");
  std::vector<Point> out;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
    std::string pts = (*it)[1];
    std::replace(pts.begin(), pts.end(), ',', ' ');
    std::istringstream in(pts);
    double x, y, sx = 0, sy = 0;
    int count = 0;
    while (in >> x >> y) {
      sx += x;
      sy += y;
      ++count;
    }
    out.push_back({sx / count, sy / count});
  }
  return out;
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t c = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++c;
  return c;
}

}  // namespace

TEST_CASE("checker sanity") {
  CHECK(well_formed("<a><b x=\"1\"/></a>"));
  CHECK_FALSE(well_formed("<a><b></a>"));
  CHECK_FALSE(well_formed("<a x=1></a>"));
  CHECK_FALSE(well_formed("<a>&</a>"));
}

TEST_CASE("sample figure structure") {
  const KAd tpl = irregular_template(6);
  const auto sample = concentrated_sample(tpl, 0.03, 12, 5);
  const Shape mean = extrinsic::extrinsic_mean(sample).mean;
  const std::string svg = render_sample_svg(sample, mean, "a <b> & \"c\"");
  CHECK(well_formed(svg));
  CHECK(count_of(svg, "<circle ") == 12 * 6);
  CHECK(count_of(svg, "<polygon class=\"mean\"") == 6);
  CHECK(svg.find("a &lt;b&gt; &amp; &quot;c&quot;") != std::string::npos);
  CHECK(svg == render_sample_svg(sample, mean, "a <b> & \"c\""));

  // circles are the aligned preshapes
  const auto pts = circles(svg);
  REQUIRE(pts.size() == 72);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const ComplexVector v = align_rotation(sample[i].rep(), mean.rep()).vector();
    for (int j = 0; j < 6; ++j) {
      const Point& p = pts[i * 6 + static_cast<std::size_t>(j)];
      CHECK(p.x == v(j).real());
      CHECK(p.y == v(j).imag());
    }
  }
}

TEST_CASE("a single object sits on the mean markers") {
  Philox4x32 rng(3);
  const Shape s = random_shape(rng, 5);
  const std::vector<Shape> one{s};
  const Shape mean = extrinsic::extrinsic_mean(one).mean;
  const std::string svg = render_sample_svg(one, mean, "one");
  const auto pts = circles(svg);
  const auto stars = star_centers(svg);
  REQUIRE(pts.size() == 5);
  REQUIRE(stars.size() == 5);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(std::abs(pts[j].x - stars[j].x) < 1e-9);
    CHECK(std::abs(pts[j].y - stars[j].y) < 1e-9);
  }
}

TEST_CASE("aligned clouds scale with the noise level") {
  const KAd tpl = irregular_template(6);
  auto spread = [&](double sd) {
    const auto sample = concentrated_sample(tpl, sd, 50, 17);
    const Shape mean = extrinsic::extrinsic_mean(sample).mean;
    const std::string svg = render_sample_svg(sample, mean, "cloud");
    const auto pts = circles(svg);
    const auto stars = star_centers(svg);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point& c = stars[i % 6];
      worst = std::max({worst, std::abs(pts[i].x - c.x), std::abs(pts[i].y - c.y)});
    }
    return worst;
  };
  const double small = spread(0.005);
  const double large = spread(0.02);
  CHECK(small < 10 * 0.005);
  CHECK(large < 10 * 0.02);
  CHECK(large / small > 2.0);
  CHECK(large / small < 8.0);
}

TEST_CASE("means figure") {
  const KAd tpl = irregular_template(5);
  const auto a = concentrated_sample(tpl, 0.03, 10, 1, 0);
  const auto b = concentrated_sample(tpl, 0.03, 10, 1, 1);
  std::vector<Shape> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<LabeledShape> means{{"a", extrinsic::extrinsic_mean(a).mean},
                                        {"b", extrinsic::extrinsic_mean(b).mean}};
  const std::string svg = render_means_svg(means, extrinsic::extrinsic_mean(pooled).mean, "m");
  CHECK(well_formed(svg));
  CHECK(count_of(svg, "<circle ") == 10);
  CHECK(count_of(svg, "<polygon class=\"mean\"") == 5);
  CHECK(count_of(svg, "<polyline ") == 2);
}
