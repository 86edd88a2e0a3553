#include <doctest.h>

#include <sstream>

#include "affect/error.hpp"
#include "cli_config.hpp"

using namespace affect;
using namespace affect::cli;

TEST_CASE("config file values") {
  std::istringstream in(R"(# pipeline settings
seed = 7
threshold=0.6
kernel = linear   # trailing comment
region = middle east
format = json

epochs = 50
)");
  CliConfig c;
  load_config(in, c);
  CHECK(c.seed == 7);
  CHECK(c.threshold == 0.6);
  CHECK(c.kernel == Kernel::linear);
  CHECK(c.region == Region::middle_east);
  CHECK(c.format == OutputFormat::json);
  CHECK(c.epochs == 50);
  CHECK(c.train_config().epochs == 50);
}

TEST_CASE("flags applied after the file win") {
  std::istringstream in("seed = 7\n");
  CliConfig c;
  load_config(in, c);
  c.set("seed", "9");
  CHECK(c.seed == 9);
}

TEST_CASE("unknown keys and bad values are rejected by name") {
  CliConfig c;
  try {
    std::istringstream in("seed = 1\ncolour = blue\n");
    load_config(in, c);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
  CHECK_THROWS_AS(c.set("seed", "abc"), Error);
  CHECK_THROWS_AS(c.set("epochs", "3.5"), Error);
  CHECK_THROWS_AS(c.set("format", "xml"), Error);
  std::istringstream no_equals("seed 4\n");
  CHECK_THROWS_AS(load_config(no_equals, c), Error);
  c.set("epochs", "0");
  CHECK_THROWS_AS(c.train_config(), Error);
}

TEST_CASE("missing config file is an I/O error") {
  CliConfig c;
  try {
    load_config_file("/nonexistent/affect.conf", c);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.exit_code() == 1);
  }
}
