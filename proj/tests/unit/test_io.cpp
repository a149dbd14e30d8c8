#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "liouville/io.hpp"

using namespace liouville;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("shortest float format round-trips") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(12.0) == "12");
    CHECK(io::format_double(-2.5e-13) == "-2.5e-13");
    CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(io::format_double(HUGE_VAL) == "inf");
    CHECK(io::format_double(-HUGE_VAL) == "-inf");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> exponent(-30.0, 30.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::pow(10.0, exponent(rng)) * (i % 2 ? -1 : 1);
        CHECK(std::stod(io::format_double(x)) == x);
    }
}

TEST_CASE("trajectory csv") {
    const auto tr = ode::integrate({0.3, 1.0}, 0.0);
    std::ostringstream os;
    io::write_trajectory_csv(os, tr);
    const std::string s = os.str();
    CHECK(first_line(s) == "t,r,v1,v2,rv1p,rv2p,f1,f2,psi0,psi1,psi2,r0q,r1q,hq");
    CHECK(count_lines(s) == static_cast<int>(tr.samples.size()) + 1);
}

TEST_CASE("sweep csv and json") {
    const SystemParams p{0.3, 1.0};
    const auto res = shooting::sweep(p, shooting::linear_grid(-4.0, 4.0, 5), {}, 1);
    std::ostringstream os;
    io::write_sweep_csv(os, res);
    CHECK(first_line(os.str()) == "alpha,beta1,beta2,err1,err2,residual,converged");
    CHECK(count_lines(os.str()) == 6);
    CHECK(os.str().find(",1\n") != std::string::npos);

    const auto j = io::to_json(res);
    CHECK(j["points"].size() == 5);
    CHECK(j["all_converged"] == true);
    CHECK(j["points"][0]["conditions"]["all_passed"] == true);
}

TEST_CASE("curve csv") {
    const SystemParams p{0.15, 1.0};
    std::ostringstream os;
    io::write_curve_csv(os, p, 11);
    const std::string s = os.str();
    CHECK(first_line(s) == "beta1,beta2,solvable");
    CHECK(count_lines(s) == 12);
    // the endpoints of the arc are not radially solvable, the middle is
    CHECK(s.find(",0\n") != std::string::npos);
    CHECK(s.find(",1\n") != std::string::npos);
    std::ostringstream bad;
    CHECK_THROWS_AS(io::write_curve_csv(bad, p, 1), PreconditionError);
}

TEST_CASE("thresholds json") {
    const auto j = io::thresholds_json({0.5, 1.0});
    for (const char* key :
         {"tau", "N", "D", "tau0_1", "tau0_2", "tau1_1", "tau1_2", "beta_under_1", "beta_over_1",
          "beta_under_2", "beta_over_2", "beta_star_1", "beta_star_2", "beta_starstar_1",
          "beta_starstar_2", "beta_minus_1", "beta_plus_1", "beta_minus_2", "beta_plus_2",
          "beta_lim_1_plus", "beta_lim_2_plus", "beta_lim_1_minus", "beta_lim_2_minus"}) {
        CHECK_MESSAGE(j.contains(key), key);
    }
    CHECK(j["beta_minus_1"].get<double>() == doctest::Approx(12.0));
    CHECK(j["beta_plus_1"].get<double>() == doctest::Approx(12.0));
    CHECK(j["beta_over_1"].get<double>() == doctest::Approx(13.72200349617224));

    const auto c = io::coupling_thresholds_json(1.0);
    CHECK(c["tau1_1"].get<double>() == doctest::Approx(0.656549517131823).epsilon(1e-12));
}

TEST_CASE("report json") {
    const auto sr = algebra::solvable_radial(8.6, 5.669936973955403, {0.15, 1.0});
    const auto j = io::to_json(sr);
    CHECK(j["solvable"] == true);
    CHECK(j["failure"] == "");

    const auto n = io::to_json(verify::normalize_general({2.0, -1.0, -1.0, 2.0, 1.0, 0.0}));
    CHECK(n["params"]["tau"].get<double>() == 0.5);

    const auto inf = io::to_json(verify::beta_infty({1.0, -0.5, -0.5, 1.0, 1.0, 0.0}, 12.0, 12.0));
    CHECK(inf["holds_1"] == true);

    const auto nan = io::to_json(FluxPair{std::nan(""), 1.0, 0.0, 0.0});
    CHECK(nan["beta1"].is_null());

    const auto tr = ode::integrate({0.5, 1.0}, 0.0);
    const auto summary = io::trajectory_summary_json(tr);
    CHECK(summary["converged"] == true);
    CHECK(summary["samples"].get<std::size_t>() == tr.samples.size());
}
