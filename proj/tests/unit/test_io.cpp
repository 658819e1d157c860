#include "doctest.h"

#include "config.hpp"
#include "zndstab/errors.hpp"
#include "zndstab/io.hpp"
#include "zndstab/profile.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace znd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / "zndstab_unit_io";
    fs::create_directories(d);
    return d / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("double formatting round trips")
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1e-8}) CHECK(std::stod(io::format_double(v)) == v);
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(std::nan("")) == "nan");
    CHECK(io::format_double(-INFINITY) == "-inf");
}

TEST_CASE("csv writer")
{
    const fs::path p = scratch("t.csv");
    {
        io::CsvWriter w(p, {"a", "b"});
        w.row(std::vector<double>{1.0, 0.1});
        w.row(std::vector<std::string>{"x", "y"});
        CHECK_THROWS_AS(w.row(std::vector<double>{1.0}), DomainError);
        CHECK_THROWS_AS(w.row(std::vector<std::string>{"a,b", "c"}), DomainError);
        w.close();
    }
    CHECK(slurp(p) == "a,b\n1,0.10000000000000001\nx,y\n");
    const io::CsvTable t = io::read_csv(p);
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 2);
    CHECK_THROWS_AS(t.column("c"), DomainError);
}

TEST_CASE("sha256 known vectors")
{
    CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const fs::path p = scratch("abc.txt");
    {
        std::ofstream o(p, std::ios::binary);
        o << "abc";
    }
    CHECK(io::sha256_file(p) == io::sha256_hex("abc"));
}

TEST_CASE("json output is sorted and stable")
{
    io::json j;
    j["zeta"] = 1;
    j["alpha"] = {{"m", 2}, {"b", 3}};
    const fs::path p = scratch("t.json");
    io::write_json(p, j);
    const std::string s = slurp(p);
    CHECK(s.find("\"alpha\"") < s.find("\"zeta\""));
    CHECK(s.find("\"b\"") < s.find("\"m\""));
    CHECK(s.back() == '\n');
    CHECK(s.find('\r') == std::string::npos);
    CHECK(io::read_json(p) == j);
    io::write_json(p, j);
    CHECK(slurp(p) == s);

    const fs::path bad = scratch("bad.json");
    {
        std::ofstream o(bad);
        o << "{ nope";
    }
    CHECK_THROWS_AS(io::read_json(bad), DomainError);
}

TEST_CASE("manifest records output digests")
{
    const fs::path d = scratch("m");
    fs::create_directories(d);
    {
        std::ofstream o(d / "out.csv", std::ios::binary);
        o << "a\n1\n";
    }
    io::RunManifest m;
    m.subcommand = "profile";
    m.add_output(d, "out.csv");
    io::write_manifest(d, m);
    const io::json j = io::read_json(d / "manifest.json");
    CHECK(j["outputs"][0]["sha256"] == io::sha256_hex("a\n1\n"));
    CHECK(j["outputs"][0]["bytes"] == 4);
    CHECK(j["status"] == "ok");
    CHECK(j["version"] == io::kVersion);
}

TEST_CASE("config validation")
{
    using zcli::Config;
    SUBCASE("defaults are echoed")
    {
        Config c(io::json::parse(R"({"params": {"gamma": 0.2, "e_plus": 0.05, "heat_release": 0.1}})"));
        const ChemParams p = c.chem_params();
        CHECK(p.rate == 1.0);
        c.check_unknown();
        CHECK(c.resolved()["params"]["specific_heat"] == 1.0);
    }
    SUBCASE("exactly one parameter block")
    {
        Config none(io::json::object());
        CHECK_THROWS_AS(none.chem_params(), DomainError);
        Config both(io::json::parse(R"({"params": {}, "classical": {"overdrive": 1.2}})"));
        CHECK_THROWS_AS(both.chem_params(), DomainError);
    }
    SUBCASE("typos are rejected, blocks for other subcommands are not")
    {
        Config c(io::json::parse(R"({"params": {"gamma": 0.2, "gama": 1}, "riccati": {"nodes": 12}})"));
        (void)c.chem_params();
        CHECK_THROWS_AS(c.check_unknown(), DomainError);
        Config d(io::json::parse(R"({"params": {"gamma": 0.2}, "riccati": {"nodes": 12}, "mystery": 1})"));
        (void)d.chem_params();
        CHECK_THROWS_AS(d.check_unknown(), DomainError);
        Config e(io::json::parse(R"({"params": {"gamma": 0.2}, "riccati": {"nodes": 12}})"));
        (void)e.chem_params();
        CHECK_NOTHROW(e.check_unknown());
    }
    SUBCASE("type errors")
    {
        Config c(io::json::parse(R"({"a": "x", "b": [1, "2"], "c": 2.5, "d": [[1, 2], [3]]})"));
        CHECK_THROWS_AS(c.number("", "a", 0.0), DomainError);
        CHECK_THROWS_AS(c.numbers("", "b", {}), DomainError);
        CHECK_THROWS_AS(c.integer("", "c", 0), DomainError);
        CHECK_THROWS_AS(c.complexes("", "d", {}), DomainError);
    }
    SUBCASE("classical block")
    {
        Config c(io::json::parse(
            R"({"classical": {"overdrive": 1.4, "activation_classical": 50, "heat_classical": 10, "gamma": 0.2}})"));
        const ChemParams p = c.chem_params();
        CHECK(p.heat_release == doctest::Approx(10.0 * p.e_plus));
    }
}

TEST_CASE("profile survives a csv round trip")
{
    ChemParams p;
    p.gamma = 0.2;
    p.e_plus = 6.23e-2;
    p.heat_release = 6.23e-1;
    p.activation = 6.0;
    p.rate = 1.53e4;
    const ZNDProfile prof(p, 1e-8, GridControl{41});
    const fs::path f = scratch("profile.csv");
    {
        io::CsvWriter w(f, {"x", "tau", "u", "e", "z", "p", "T"});
        for (const auto& g : prof.grid()) w.row(std::vector<double>{g.x, g.tau, g.u, g.e, g.z, g.p, g.T});
        w.close();
    }
    const io::CsvTable t = io::read_csv(f);
    const auto x = t.numbers("x"), z = t.numbers("z"), tau = t.numbers("tau");
    REQUIRE(x.size() == prof.grid().size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(x[i] == prof.grid()[i].x);
        CHECK(z[i] == prof.grid()[i].z);
        CHECK(tau[i] == prof.grid()[i].tau);
    }
}
