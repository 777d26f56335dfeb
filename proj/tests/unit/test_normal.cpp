#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bpm/normal.hpp"

// Reference values from a 40-digit evaluation of the normal cdf/quantile.

TEST_CASE("normal: cdf reference values") {
  CHECK(bpm::norm_cdf(0.0) == 0.5);
  CHECK(bpm::norm_cdf(-3.0) ==
        doctest::Approx(0.0013498980316300945267).epsilon(1e-13));
  CHECK(bpm::norm_cdf(1.5) ==
        doctest::Approx(0.933192798731141934).epsilon(1e-13));
  CHECK(bpm::norm_cdf(40.0) == 1.0);
  CHECK(bpm::norm_cdf(-40.0) >= 0.0);
}

TEST_CASE("normal: log-cdf stays accurate deep in the tail") {
  CHECK(bpm::norm_logcdf(-1.0) ==
        doctest::Approx(-1.8410216450092635058).epsilon(1e-12));
  CHECK(bpm::norm_logcdf(-20.0) ==
        doctest::Approx(-203.91715537109726394).epsilon(1e-10));
  CHECK(bpm::norm_logcdf(-40.0) ==
        doctest::Approx(-804.60844201375378817).epsilon(1e-10));
  CHECK(bpm::norm_logcdf(0.0) == doctest::Approx(std::log(0.5)));
  CHECK(bpm::norm_logcdf(30.0) <= 0.0);
}

TEST_CASE("normal: quantile reference and roundtrip") {
  CHECK(bpm::norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bpm::norm_quantile(0.975) ==
        doctest::Approx(1.9599639845400542355).epsilon(1e-12));
  CHECK(bpm::norm_quantile(0.025) ==
        doctest::Approx(-1.9599639845400542355).epsilon(1e-12));
  CHECK(bpm::norm_quantile(1e-10) ==
        doctest::Approx(-6.3613409024040562047).epsilon(1e-12));
  for (double p : {1e-8, 1e-3, 0.2, 0.5, 0.9, 1.0 - 1e-6}) {
    CHECK(bpm::norm_cdf(bpm::norm_quantile(p)) ==
          doctest::Approx(p).epsilon(1e-11));
  }
}

TEST_CASE("normal: quantile rejects probabilities outside (0,1)") {
  CHECK_THROWS_AS((void)bpm::norm_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS((void)bpm::norm_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS((void)bpm::norm_quantile(-0.1), std::domain_error);
  CHECK_THROWS_AS((void)bpm::norm_quantile(1.1), std::domain_error);
}

TEST_CASE("normal: pdf at zero") {
  CHECK(bpm::norm_pdf(0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi))
            .epsilon(1e-15));
}
