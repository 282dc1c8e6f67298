#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "adnoise/errors.hpp"
#include "adnoise/table.hpp"

using namespace adnoise;
using namespace adnoise::table;

namespace {

Table sample() {
  Table t;
  t.name = "sample";
  t.columns = {{"omega/Gamma0", ""}, {"S_mu", "D^2/Hz"}, {"label", ""}, {"n", ""}};
  t.rows.push_back({0.1, 1.234567891234e-9, std::string("plain"), std::int64_t{3}});
  t.rows.push_back({10.0, 2.0, std::string("a,b \"q\""), std::int64_t{-1}});
  t.notes = {"fit window [1, 10] omega_c"};
  return t;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("empty table renders the header only") {
  Table t;
  t.name = "empty";
  t.columns = {{"x", "m"}, {"y", ""}};
  CHECK(render(t, {"adnoise 0.1.0"}) == "# adnoise 0.1.0\nx [m],y\n");
}

TEST_CASE("rendering rules") {
  const std::string text = render(sample(), {"h1", "h2"});
  CHECK(text ==
        "# h1\n# h2\n# fit window [1, 10] omega_c\n"
        "omega/Gamma0,S_mu [D^2/Hz],label,n\n"
        "0.1,1.23456789e-09,plain,3\n"
        "10,2,\"a,b \"\"q\"\"\",-1\n");
  // The unit appears once, in the header row.
  CHECK(text.find("D^2/Hz") == text.rfind("D^2/Hz"));
}

TEST_CASE("quoting and formatting") {
  CHECK(quote("abc") == "abc");
  CHECK(quote("a,b") == "\"a,b\"");
  CHECK(quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(quote("two\nlines") == "\"two\nlines\"");
  CHECK(format_double(1.0 / 3.0) == "0.333333333");
  CHECK(format_double(6.02214076e23) == "6.02214076e+23");
}

TEST_CASE("ragged rows are rejected") {
  Table t = sample();
  t.rows.push_back({1.0});
  CHECK_THROWS_AS(render(t, {}), ConfigError);
}

TEST_CASE("emit is deterministic and reports I/O failure") {
  const auto dir = std::filesystem::temp_directory_path() / "adnoise_test_table";
  std::filesystem::create_directories(dir);
  emit_table(sample(), {"h"}, dir / "a.csv");
  emit_table(sample(), {"h"}, dir / "b.csv");
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.csv") == render(sample(), {"h"}));
  CHECK_THROWS_AS(emit_table(sample(), {"h"}, dir / "missing" / "c.csv"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
