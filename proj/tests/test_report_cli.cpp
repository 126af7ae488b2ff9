#include <cmath>
#include <limits>

#include "conflab/cli.hpp"
#include "conflab/error.hpp"
#include "doctest.h"

using namespace conflab;
using namespace conflab::report;

TEST_SUITE("report") {
  TEST_CASE("value formatting") {
    CHECK(Value(0.1).dump() == "0.10000000000000001");
    CHECK(Value(1.0).dump() == "1");
    CHECK(Value(std::numeric_limits<double>::infinity()).dump() == "\"inf\"");
    CHECK(Value(std::nan("")).dump() == "\"nan\"");
    CHECK(Value("a\"b\n").dump() == "\"a\\\"b\\n\"");
    CHECK(Value::array({1.5, -2}).dump() == "[1.5, -2]");
    const Value o(Object{{"z", 1}, {"a", true}, {"m", nullptr}});
    CHECK(o.dump() == "{\n  \"z\": 1,\n  \"a\": true,\n  \"m\": null\n}");
    CHECK(o["a"].as_bool());
    CHECK_THROWS_AS(o["missing"], Error);
  }

  TEST_CASE("overall verdict ignores skipped checks") {
    ReportDocument d("x", {{"k", 1}});
    CHECK(d.passed());
    d.skip("later", "not requested");
    CHECK(d.passed());
    d.add("ok", true, true);
    CHECK(d.passed());
    CHECK(d.to_value()["overall"].as_string() == "pass");
    d.add("bad", false, false, {{"residual", 0.5}});
    CHECK_FALSE(d.passed());
    const Value v = d.to_value();
    CHECK(v["overall"].as_string() == "fail");
    const auto& keys = v.object();
    REQUIRE(keys.size() == 5);
    CHECK(keys[0].first == "command");
    CHECK(keys[1].first == "inputs");
    CHECK(keys[2].first == "checks");
    CHECK(keys[3].first == "outputs");
    CHECK(keys[4].first == "overall");
    CHECK(d.to_text().find("[skip] later") != std::string::npos);
  }

  TEST_CASE("commands give byte-identical JSON") {
    cli::CurvatureOptions c;
    c.metric.p = 2;
    c.metric.q = 3;
    CHECK(cli::cmd_curvature(c).to_json() == cli::cmd_curvature(c).to_json());
    cli::EssentialDemoOptions e;
    e.t = {0, 3};
    e.grid = 3;
    e.window = 10;
    CHECK(cli::cmd_essential_demo(e).to_json() == cli::cmd_essential_demo(e).to_json());
    cli::GeodesicOptions g;
    g.projective = true;
    g.nsteps = 200;
    CHECK(cli::cmd_geodesic(g).to_json() == cli::cmd_geodesic(g).to_json());
  }

  TEST_CASE("command verdicts") {
    cli::CurvatureOptions c;
    const auto cur = cli::cmd_curvature(c);
    CHECK(cur.passed());
    const Value out = cur.to_value()["outputs"];
    CHECK(out["ricci_flat"].as_bool());
    CHECK_FALSE(out["conformally_flat"]["value"].as_bool());

    cli::VerifyConformalOptions v;
    v.t = 1.0;
    const auto conf = cli::cmd_verify_conformal(v);
    CHECK(conf.passed());
    const Value vo = conf.to_value();
    CHECK(vo["outputs"]["admissible"]["value"].as_bool());

    cli::ClassifyOptions k;
    k.lambda2 = {-2.05, -1.5};
    const auto cls = cli::cmd_classify(k);
    CHECK(cls.passed());
    CHECK_FALSE(cls.to_value()["outputs"]["equivalent"].as_bool());
    k.lambda2 = {-1, -0.4};
    try {
      (void)cli::cmd_classify(k);
      FAIL("expected InadmissibleLambda");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InadmissibleLambda);
    }

    cli::EssentialDemoOptions e;
    e.t = {0};
    const auto single = cli::cmd_essential_demo(e);
    CHECK(single.passed());
    int skipped = 0;
    for (const auto& ch : single.checks()) skipped += ch.status == Status::skip;
    CHECK(skipped == 2);
    e.grid = 2;
    CHECK_THROWS_AS(cli::cmd_essential_demo(e), Error);
  }

  TEST_CASE("error JSON") {
    const std::string j = cli::error_json("classify", "InadmissibleLambda", "beta < alpha/2 fails");
    CHECK(j.find("\"command\": \"classify\"") != std::string::npos);
    CHECK(j.find("\"code\": \"InadmissibleLambda\"") != std::string::npos);
  }
}
