#include <algorithm>

#include "doctest.h"
#include "support.hpp"
#include "vvc/config.hpp"

using namespace vvc;

TEST_CASE("sections, labels, comments and values")
{
    const auto doc = ConfigDocument::parse("# leading comment\n"
                                           "[scenario]\n"
                                           "name = day one   # trailing\n"
                                           "url = a#b\n"
                                           "\n"
                                           "[input Voltage]\n"
                                           "universe = 19 23 ; semicolon comment\n"
                                           "G = 20.8 21 21 21.2\n",
                                           "mem");
    REQUIRE(doc.sections().size() == 2);
    const auto* sc = doc.section("scenario");
    REQUIRE(sc);
    CHECK(sc->find("name")->value == "day one");
    CHECK(sc->find("url")->value == "a#b");
    CHECK(sc->find("name")->line == 3);
    const auto* v = doc.section("input Voltage");
    REQUIRE(v);
    CHECK(v->type == "input");
    CHECK(v->label == "Voltage");
    CHECK(v->find("universe")->value == "19 23");
    CHECK(doc.sections_of_type("input").size() == 1);
}

TEST_CASE("malformed lines are all reported with line numbers")
{
    try {
        ConfigDocument::parse("orphan = 1\n[ok]\nno equals sign\n[broken\n[ok2]\na = 1\na = 2\n", "bad.cfg");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        const auto& d = e.diagnostics();
        REQUIRE(d.size() == 4);
        CHECK(d[0].span.line == 1);
        CHECK(d[1].span.line == 3);
        CHECK(d[2].span.line == 4);
        CHECK(d[3].span.line == 7);
        CHECK(d[0].source == "bad.cfg");
        CHECK(to_string(d[1]).rfind("bad.cfg:3:", 0) == 0);
    }
}

TEST_CASE("typed reader records problems instead of throwing")
{
    const auto doc = ConfigDocument::parse("[s]\n"
                                           "x = 2.5\n"
                                           "n = +7\n"
                                           "bad = 1.2.3\n"
                                           "b = On\n"
                                           "list = 1, 2 3\n"
                                           "u = -1\n"
                                           "typo = 1\n");
    Diagnostics diags;
    ConfigReader rd(doc, diags);
    const auto* s = doc.section("s");
    CHECK(rd.number(s, "x", 0) == 2.5);
    CHECK(rd.integer(s, "n", 0) == 7);
    CHECK(rd.number(s, "missing", 9) == 9);
    CHECK(diags.empty());
    CHECK(rd.number(s, "bad", 4) == 4);
    CHECK(diags.size() == 1);
    CHECK(rd.flag(s, "b", false));
    CHECK(rd.numbers(s, "list", {}) == std::vector<double>{1, 2, 3});
    CHECK(rd.unsigned_integer(s, "u", 3) == 3);
    CHECK(diags.size() == 2);
    const auto unused = doc.unused_entries();
    REQUIRE(unused.size() == 1);
    CHECK(unused[0].severity == Severity::Warning);
    CHECK(unused[0].message.find("typo") != std::string::npos);
}

TEST_CASE("number lists")
{
    CHECK(parse_number_list("1 -2.5,3e1") == std::vector<double>{1, -2.5, 30});
    CHECK(parse_number_list("")->empty());
    CHECK_FALSE(parse_number_list("1 x").has_value());
}

TEST_CASE("read_fis builds variables, aliases and multi-piece terms")
{
    const auto doc = ConfigDocument::parse("[system]\nname = t\nresolution = 501\n"
                                           "[input Hour]\nuniverse = 0 24\n"
                                           "Peak = 10 10 14 14 | 18 18 22 22\n"
                                           "[output Move]\nuniverse = -1 1\naliases = M, Mv\nunit = steps\n"
                                           "Zero = -1 0 0 1\n");
    Diagnostics diags;
    const auto fis = read_fis(doc, diags);
    CHECK(diags.empty());
    CHECK(fis.name == "t");
    CHECK(fis.resolution == 501);
    REQUIRE(fis.inputs.size() == 1);
    const auto& hour = fis.inputs[0];
    REQUIRE(hour.sets.size() == 1);
    CHECK(hour.sets[0].pieces.size() == 2);
    CHECK(hour.sets[0].degree(12) == 1.0);
    CHECK(hour.sets[0].degree(16) == 0.0);
    CHECK(hour.sets[0].degree(20) == 1.0);
    REQUIRE(fis.outputs.size() == 1);
    CHECK(fis.outputs[0].aliases == std::vector<std::string>{"M", "Mv"});
    CHECK(fis.outputs[0].answers_to("Mv"));
    CHECK(fis.outputs[0].unit == "steps");
}

TEST_CASE("read_fis reports bad terms and sections")
{
    const auto doc = ConfigDocument::parse("[input X]\nuniverse = 0\nA = 1 2 3\n[widget]\n");
    Diagnostics diags;
    read_fis(doc, diags);
    CHECK(count_errors(diags) == 3);
}

TEST_CASE("load_fis on the shipped files")
{
    const auto fis = load_fis(testing::source_path("fis/default.fis"), testing::source_path("rules/default14.rules"));
    CHECK(fis.inputs.size() == 5);
    CHECK(fis.outputs.size() == 2);
    CHECK(fis.rules.size() == 14);
    CHECK(fis.resolution == 1001);
    CHECK(fis.find_output("Tap") == fis.find_output("Taps"));
    CHECK(fis.find_input("Tap") != nullptr);
}

TEST_CASE("load_fis collects diagnostics from both files")
{
    testing::TempDir dir;
    const auto f = dir.write("x.fis", "[input A]\nuniverse = 0 1\nlo = 0 0 0.5 1\n"
                                      "[output Y]\nuniverse = 0 1\nz = 0 0.5 0.5 1\n");
    const auto r = dir.write("x.rules", "If (A is lo) then (Y is z)\nIf (A is) then (Y is z)\nIf (A is hi) then (Y is z)\n");
    Diagnostics diags;
    const auto fis = load_fis(f, r, diags);
    CHECK(fis.rules.size() == 2);
    CHECK(count_errors(diags) == 2);
    CHECK(std::all_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.source == r.string(); }));
    CHECK_THROWS_AS(load_fis(f, r), ParseError);
    CHECK_THROWS_AS(load_fis(f, dir.path() / "none.rules"), IoError);
}
