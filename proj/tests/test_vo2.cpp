#include <cmath>
#include <filesystem>
#include <sstream>

#include "critmed/constants.hpp"
#include "critmed/errors.hpp"
#include "critmed/vo2.hpp"
#include "doctest.h"

using namespace critmed;

namespace {

const char* kHeader = "branch,T_K,f,L,eps_hm_re,eps_hm_im,eps_i_re,eps_i_im\n";

Vo2Dataset parse(const std::string& body) {
  std::istringstream in(kHeader + body);
  return Vo2Dataset::parse_csv(in);
}

const std::string kSmall =
    "cooling,300,0.1,0.3,9,0.5,-20,100\n"
    "cooling,310,0.5,0.2,9,0.5,-30,200\n"
    "heating,300,0.0,0.3,9,0.5,-20,100\n"
    "heating,310,0.4,0.25,9,0.5,-20,100\n";

}  // namespace

TEST_SUITE("vo2") {

TEST_CASE("csv parse, lookup and interpolation") {
  const Vo2Dataset ds = parse(kSmall);
  CHECK(ds.branch(Branch::Heating).size() == 2);
  CHECK(ds.common_min() == 300.0);
  CHECK(ds.common_max() == 310.0);

  const Vo2Point node = vo2_lookup(ds, 310.0, Branch::Cooling);
  CHECK(node.filling_factor == 0.5);
  CHECK(node.eps_inclusion == complex(-30, 200));

  const Vo2Point mid = vo2_lookup(ds, 305.0, Branch::Cooling);
  CHECK(mid.filling_factor == doctest::Approx(0.3));
  CHECK(mid.depolarization == doctest::Approx(0.25));
  CHECK(mid.eps_inclusion.real() == doctest::Approx(-25.0));
  CHECK(mid.eps_inclusion.imag() == doctest::Approx(150.0));

  // Branches are interpolated independently.
  CHECK(vo2_lookup(ds, 305.0, Branch::Heating).filling_factor == doctest::Approx(0.2));

  CHECK_THROWS_AS(vo2_lookup(ds, 299.9, Branch::Heating), OutOfRange);
  CHECK_THROWS_AS(vo2_lookup(ds, 310.1, Branch::Cooling), OutOfRange);
}

TEST_CASE("csv rejects malformed input") {
  CHECK_THROWS_AS(parse("cooling,300,0.1,0.3,9,0.5,-20,100\n"
                        "cooling,300,0.1,0.3,9,0.5,-20,100\n"
                        "heating,300,0.1,0.3,9,0.5,-20,100\n"),
                  ConfigError);  // duplicate
  CHECK_THROWS_AS(parse("heating,300,0.1,0.3,9,0.5,-20,100\n"
                        "cooling,300,0.1,0.3,9,0.5,-20,100\n"),
                  ConfigError);  // unsorted branches
  CHECK_THROWS_AS(parse("cooling,310,0.1,0.3,9,0.5,-20,100\n"
                        "cooling,300,0.1,0.3,9,0.5,-20,100\n"
                        "heating,300,0.1,0.3,9,0.5,-20,100\n"),
                  ConfigError);  // unsorted temperatures
  CHECK_THROWS_AS(parse("cooling,300,abc,0.3,9,0.5,-20,100\nheating,300,0,0.3,9,0.5,-20,100\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("cooling,300,0.1,0.3,9,0.5,-20\nheating,300,0,0.3,9,0.5,-20,100\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("melting,300,0.1,0.3,9,0.5,-20,100\n"), ConfigError);
  CHECK_THROWS(parse("cooling,300,1.5,0.3,9,0.5,-20,100\nheating,300,0,0.3,9,0.5,-20,100\n"));
  std::istringstream no_header("cooling,300,0.1,0.3,9,0.5,-20,100\n");
  CHECK_THROWS_AS(Vo2Dataset::parse_csv(no_header), ConfigError);
  CHECK_THROWS_AS(Vo2Dataset::load_csv("/nonexistent/vo2.csv"), IoError);
}

TEST_CASE("csv write/parse round trip is exact") {
  const Vo2Dataset ds = synthetic_vo2_dataset();
  std::ostringstream out;
  ds.write_csv(out);
  std::istringstream in(out.str());
  const Vo2Dataset back = Vo2Dataset::parse_csv(in);
  for (Branch b : {Branch::Heating, Branch::Cooling}) {
    REQUIRE(back.branch(b).size() == ds.branch(b).size());
    for (std::size_t i = 0; i < ds.branch(b).size(); ++i) {
      CHECK(back.branch(b)[i].filling_factor == ds.branch(b)[i].filling_factor);
      CHECK(back.branch(b)[i].eps_inclusion == ds.branch(b)[i].eps_inclusion);
    }
  }
}

TEST_CASE("shipped dataset equals the generator output") {
  const Vo2Dataset file =
      Vo2Dataset::load_csv(std::filesystem::path(CRITMED_TEST_DATA_DIR) / "vo2_synthetic.csv");
  const Vo2Dataset gen = synthetic_vo2_dataset();
  for (double t : {320.0, 336.0, 341.5, 360.0})
    for (Branch b : {Branch::Heating, Branch::Cooling})
      CHECK(vo2_lookup(file, t, b).filling_factor == vo2_lookup(gen, t, b).filling_factor);
}

TEST_CASE("synthetic branches cross the threshold at their critical temperatures") {
  const SyntheticVo2Options opt;
  const Vo2Dataset ds = synthetic_vo2_dataset(opt);
  CHECK(vo2_lookup(ds, opt.critical_heating, Branch::Heating).filling_factor ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(vo2_lookup(ds, opt.critical_cooling, Branch::Cooling).filling_factor ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // Heating lags cooling at every temperature: the loop is open.
  for (const auto& p : ds.branch(Branch::Heating))
    CHECK(p.filling_factor <= vo2_lookup(ds, p.temperature, Branch::Cooling).filling_factor);
  // Both saturate towards the same end points.
  CHECK(std::abs(vo2_lookup(ds, 320, Branch::Heating).filling_factor -
                 vo2_lookup(ds, 320, Branch::Cooling).filling_factor) < 1e-3);
  CHECK(std::abs(vo2_lookup(ds, 360, Branch::Heating).filling_factor -
                 vo2_lookup(ds, 360, Branch::Cooling).filling_factor) < 1e-3);
  // Depolarization slides from 1/3 to 1/4.
  CHECK(ds.branch(Branch::Heating).front().depolarization == doctest::Approx(1.0 / 3.0));
  CHECK(ds.branch(Branch::Heating).back().depolarization == doctest::Approx(0.25));
}

TEST_CASE("effective permittivity follows the metallic fraction") {
  const Vo2Dataset ds = synthetic_vo2_dataset();
  const double w = constants::angular_frequency(450e-6);
  const complex cold = vo2_effective(ds, 320, Branch::Heating, w).value;
  const complex hot = vo2_effective(ds, 360, Branch::Heating, w).value;
  CHECK(cold.real() > 0.0);
  CHECK(std::abs(hot) > 100.0 * std::abs(cold));
  CHECK_THROWS_AS(vo2_effective(ds, 320, Branch::Heating, 0.0), InvalidArgument);
  CHECK(parse_branch("cooling") == Branch::Cooling);
  CHECK(to_string(Branch::Heating) == "heating");
  CHECK_THROWS_AS(parse_branch("up"), InvalidArgument);
}

}  // TEST_SUITE
