#include <sstream>

#include "support.hpp"

#include "ellcon/cli.hpp"

using namespace ellcon;
using namespace ellcon::cli;
using ellcon::test::throws_code;

namespace {

const cplx kLam{0.3, 0.7};

/// Three points on the curve with a Fuchs-consistent nu.
std::string instance_text(const std::string& extra = "", bool fuchs = true) {
    const Curve c = make_curve(kLam);
    std::ostringstream out;
    out.precision(17);
    out << R"({"lambda": [0.3, 0.7], "points": [)";
    const std::vector<cplx> xs{{2.0, 0.0}, {-1.0, 0.5}, {0.5, 1.5}};
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const CurvePoint p = c.point_at(xs[k]);
        out << (k ? ", " : "") << R"({"x": [)" << p.x.real() << ", " << p.x.imag() << R"(], "y": [)" << p.y.real() << ", "
            << p.y.imag() << "]}";
    }
    out << R"(], "nu": [[[0.21, 0.1], [-0.43, 0.05]], [[0.17, -0.3], [-0.61, 0.2]], [[0.05, 0.12], )";
    out << (fuchs ? "[-0.39, -0.17]" : "[0.5, 0.0]") << "]], " << R"("seed": 7)" << extra << "}";
    return out.str();
}

Report run(const std::string& command, const std::string& sub = "", int trials = 10) {
    Options o;
    o.sub = sub;
    o.trials = trials;
    return execute(command, parse_instance(instance_text()), o);
}

}  // namespace

TEST(Parse, ValidInstance) {
    const ProblemInstance p = parse_instance(instance_text());
    EXPECT_EQ(p.lambda, kLam);
    EXPECT_EQ(p.points.size(), 3u);
    ASSERT_TRUE(p.nu.has_value());
    EXPECT_NO_THROW(p.nu->require_fuchs());
    EXPECT_EQ(p.seed, 7u);
}

TEST(Parse, ToleranceOverrides) {
    const ProblemInstance p = parse_instance(instance_text(R"(, "tolerances": {"serre": 1e-3})"));
    EXPECT_EQ(p.tolerances.serre, 1e-3);
    EXPECT_TRUE(throws_code([] { parse_instance(instance_text(R"(, "tolerances": {"bogus": 1e-3})")); },
                            ErrorCode::ValidationError));
}

TEST(Parse, RejectsMalformedInput) {
    EXPECT_TRUE(throws_code([] { parse_instance("{not json"); }, ErrorCode::ParseError));
    EXPECT_TRUE(throws_code([] { parse_instance("[1, 2]"); }, ErrorCode::ParseError));
    EXPECT_TRUE(throws_code([] { parse_instance(instance_text(R"(, "extra": 1)")); }, ErrorCode::ParseError));
    EXPECT_TRUE(throws_code([] { parse_instance(R"({"lambda": [0.3]})"); }, ErrorCode::ParseError));
    EXPECT_TRUE(throws_code([] { parse_instance(R"({"points": []})"); }, ErrorCode::ParseError));
    EXPECT_TRUE(throws_code([] { parse_instance(R"({"lambda": [0.3, 0.7], "seed": -4})"); }, ErrorCode::ParseError));
}

TEST(Parse, RejectsInvalidInstances) {
    EXPECT_TRUE(throws_code([] { parse_instance(R"({"lambda": [0.3, 0.7], "points": [{"x": [2, 0], "y": [1, 0]}]})"); },
                            ErrorCode::ValidationError));
    // (1 + 1e-8, y) is on the curve to 1e-10 but too close to w1
    EXPECT_TRUE(throws_code(
        [] { parse_instance(R"({"lambda": [0.3, 0.7], "points": [{"x": [1.00000001, 0], "y": [0, 0]}]})"); },
        ErrorCode::ValidationError));
    EXPECT_TRUE(throws_code([] { parse_instance(R"({"lambda": [1, 0]})"); }, ErrorCode::DegenerateCurve));
    const Curve c = make_curve(kLam);
    const CurvePoint p = c.point_at(2.0);
    std::ostringstream twice;
    twice.precision(17);
    twice << R"({"lambda": [0.3, 0.7], "points": [)";
    for (int k = 0; k < 2; ++k)
        twice << (k ? ", " : "") << R"({"x": [2, 0], "y": [)" << p.y.real() << ", " << p.y.imag() << "]}";
    twice << "]}";
    EXPECT_TRUE(throws_code([&] { parse_instance(twice.str()); }, ErrorCode::ValidationError));
    EXPECT_TRUE(throws_code(
        [] { parse_instance(R"({"lambda": [0.3, 0.7], "points": [], "nu": [[[0.1, 0], [0.2, 0]]]})"); }, ErrorCode::ValidationError));
}

TEST(Execute, EveryCommandPassesOnAGoodInstance) {
    for (const char* c : {"residue-table", "build", "check-apparent", "par", "par-roundtrip", "par-inverse", "transition",
                                 "splitting", "lambda-matrix"}) {
        const Report r = run(c);
        EXPECT_EQ(r.status, Status::pass) << c << ": " << r.error;
        EXPECT_FALSE(r.metrics.empty()) << c;
    }
    for (const char* s : {"darboux", "omega-nu", "serre", "moebius"}) EXPECT_EQ(run("symplectic", s).status, Status::pass) << s;
    for (const char* s : {"stab", "chamber", "phi", "elm", "genericity", "zn", "lame"})
        EXPECT_EQ(run("stability", s).status, Status::pass) << s;
    for (const char* s : {"defined", "eval", "fiber-rank"}) EXPECT_EQ(run("app", s).status, Status::pass) << s;
}

TEST(Execute, ParRoundtripIsAnAliasOfPar) {
    const Report a = run("par"), b = run("par-roundtrip");
    ASSERT_EQ(a.metrics.size(), b.metrics.size());
    for (std::size_t k = 0; k < a.metrics.size(); ++k) EXPECT_EQ(a.metrics[k].value, b.metrics[k].value);
}

TEST(Execute, ReferenceParPointRoundTrips) {
    // one trial uses only the reference point (1:0), (0:1) over every t_j
    const Report r = run("par", "", 1);
    EXPECT_EQ(r.status, Status::pass);
    const auto& p = r.artifacts["par"];
    ASSERT_EQ(p.size(), 3u);
    EXPECT_NEAR(std::abs(cplx(p[0]["plus"][1][0].get<double>(), p[0]["plus"][1][1].get<double>())), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(cplx(p[0]["minus"][0][0].get<double>(), p[0]["minus"][0][1].get<double>())), 0.0, 1e-12);
}

TEST(Execute, FiberRankArtifact) {
    const Report r = run("app", "fiber-rank");
    EXPECT_EQ(r.artifacts["matrix_rank"].get<int>(), 4);
    EXPECT_EQ(r.artifacts["expected"].get<int>(), 4);
}

TEST(Execute, ErrorsBecomeErrorReports) {
    Options o;
    const Report fuchs = execute("par", parse_instance(instance_text("", false)), o);
    EXPECT_EQ(fuchs.status, Status::error);
    EXPECT_NE(fuchs.error.find("Fuchs relation"), std::string::npos);
    EXPECT_EQ(exit_code(fuchs), 2);
    EXPECT_EQ(execute("nope", std::nullopt, o).status, Status::error);
    EXPECT_EQ(execute("residue-table", std::nullopt, o).status, Status::error);
    o.sub = "wrong";
    EXPECT_EQ(execute("stability", parse_instance(instance_text()), o).status, Status::error);
}

TEST(Execute, StatusFollowsMetrics) {
    Options o;
    o.trials = 3;
    o.tolerances = {{"par", 1e-40}};
    const Report r = execute("par", parse_instance(instance_text()), o);
    EXPECT_EQ(r.status, Status::fail);
    EXPECT_EQ(exit_code(r), 1);
    EXPECT_NE(summary(r).find("FAIL"), std::string::npos);
    EXPECT_NE(summary(r).find("Par is an isomorphism"), std::string::npos);
    EXPECT_EQ(exit_code(run("par")), 0);
}

TEST(Report, DeterministicWithoutTimestamp) {
    const std::string a = to_json(run("splitting"), false), b = to_json(run("splitting"), false);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.find("timestamp"), std::string::npos);
    EXPECT_NE(to_json(run("splitting"), true).find("timestamp"), std::string::npos);
    const auto j = nlohmann::json::parse(a);
    EXPECT_EQ(j["status"], "pass");
    EXPECT_EQ(j["artifacts"]["seed"], 7);
    for (const auto& m : j["metrics"]) EXPECT_TRUE(m.contains("anchor"));
}

TEST(Report, SeedFlagOverridesInstance) {
    Options o;
    o.trials = 2;
    o.seed = 123;
    const Report r = execute("transition", parse_instance(instance_text()), o);
    EXPECT_EQ(r.artifacts["seed"].get<std::uint64_t>(), 123u);
    o.seed.reset();
    EXPECT_EQ(execute("transition", parse_instance(instance_text()), o).artifacts["seed"].get<std::uint64_t>(), 7u);
}

TEST(Report, SuiteRunsWithoutInstance) {
    Options o;
    o.trials = 4;
    o.seed = 1;
    const Report r = execute("suite", std::nullopt, o);
    EXPECT_EQ(r.status, Status::pass) << r.error;
    EXPECT_EQ(r.artifacts["suites"].size(), 9u);
}
