#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "asbarron/io.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("/tmp/asbarron_test_" + name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("shortest round-trip double formatting") {
    CHECK(asb::format_double(0.1) == "0.1");
    CHECK(asb::format_double(1.0) == "1");
    CHECK(asb::format_double(-2.5) == "-2.5");
    CHECK(asb::format_double(0.0) == "0");
    SUBCASE("parses back to the identical bits") {
        for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.49999999999999994}) {
            const std::string s = asb::format_double(v);
            CHECK(std::stod(s) == v);
        }
    }
}

TEST_CASE("measure JSON round trip") {
    asb::BarronMeasure rho;
    rho.n = 2;
    rho.d = 2;
    Eigen::VectorXd w1(4), w2(4);
    w1 << 0.1, -0.2, 0.3, 0.4;
    w2 << 1.0, 0.0, -1.0, 0.5;
    rho.atoms = {{1.5, -0.25, w1}, {-0.75, 0.0, w2}};
    SUBCASE("through a string") {
        const asb::BarronMeasure back = asb::parse_measure(asb::measure_to_json(rho));
        CHECK(back.n == 2);
        CHECK(back.d == 2);
        REQUIRE(back.atoms.size() == 2);
        CHECK(back.atoms[0].a == rho.atoms[0].a);
        CHECK(back.atoms[0].b == rho.atoms[0].b);
        CHECK((back.atoms[1].w - rho.atoms[1].w).norm() == 0.0);
    }
    SUBCASE("through a file") {
        TempPath tmp("measure.json");
        asb::save_measure(tmp.path, rho);
        const asb::BarronMeasure back = asb::load_measure(tmp.path);
        CHECK(back.atoms.size() == 2);
        CHECK((back.atoms[0].w - rho.atoms[0].w).norm() == 0.0);
    }
}

TEST_CASE("measure parse errors are specific") {
    SUBCASE("invalid JSON") {
        CHECK_THROWS_AS(asb::parse_measure("{ not json"), asb::InputError);
    }
    SUBCASE("missing field") {
        CHECK_THROWS_AS(asb::parse_measure(R"({"n": 2, "atoms": []})"), asb::InputError);
    }
    SUBCASE("wrong wavevector length") {
        const char* text = R"({"n": 2, "d": 1, "atoms": [{"a": 1, "b": 0, "w": [1.0]}]})";
        CHECK_THROWS_AS(asb::parse_measure(text), asb::InputError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(asb::load_measure("/nonexistent/measure.json"), asb::InputError);
    }
}

TEST_CASE("Slater sum file round trip") {
    asb::SlaterSum s;
    Eigen::MatrixXd w1(2, 1), w2(2, 1);
    w1 << 0.5, -0.5;
    w2 << 1.25, 0.0;
    s.terms.push_back({asb::Complex(0.1, -0.2), asb::WaveMatrix(w1)});
    s.terms.push_back({asb::Complex(-1.0, 0.0), asb::WaveMatrix(w2)});
    TempPath tmp("sum.json");
    asb::save_slater_sum(tmp.path, s);
    const asb::SlaterSum back = asb::load_slater_sum(tmp.path);
    REQUIRE(back.terms.size() == 2);
    CHECK(back.terms[0].coeff == s.terms[0].coeff);
    CHECK(back.terms[1].w.n() == 2);
    CHECK(back.terms[1].w.d() == 1);
    CHECK((back.terms[1].w.rows - w2).norm() == 0.0);
}

TEST_CASE("CSV writer") {
    TempPath tmp("table.csv");
    {
        asb::CsvWriter csv(tmp.path, {"theta", "value"});
        csv.row(std::vector<double>{0.1, -2.0});
        csv.row(std::vector<std::string>{"x", "y"});
    }
    const std::string text = slurp(tmp.path);
    CHECK(text == "theta,value\n0.1,-2\nx,y\n");
    SUBCASE("row width is enforced") {
        asb::CsvWriter csv(tmp.path, {"a", "b"});
        CHECK_THROWS_AS(csv.row(std::vector<double>{1.0}), asb::InputError);
    }
}
