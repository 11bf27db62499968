#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "../tools/wealthfit/kvdoc.hpp"

using wealthfit::KvDoc;
using wealthfit::format_number;
using wealthfit::report_error;
using wealthfit::usage_error;

TEST_SUITE("kvdoc") {

TEST_CASE("format_number round-trips doubles exactly") {
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(-3.25) == "-3.25");
    const std::vector<double> values = {0.1,    1.0 / 3.0, 6.02214076e23, -123.456,
                                        1e-300, 3.141592653589793};
    for (const double v : values) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("set preserves insertion order and overwrites in place") {
    KvDoc doc;
    doc.set("fit.family", "dagum");
    doc.set("fit.loglik", -84229.0);
    doc.set("fit.converged", true);
    doc.set("fit.n_params", 7);
    doc.set("fit.family", "sm");

    REQUIRE(doc.entries().size() == 4);
    CHECK(doc.entries()[0].first == "fit.family");
    CHECK(doc.entries()[0].second == "sm");
    CHECK(doc.entries()[1].first == "fit.loglik");
    CHECK(doc.get("fit.family") == "sm");
    CHECK(doc.number("fit.loglik") == -84229.0);
    CHECK(doc.flag("fit.converged"));
    CHECK(doc.integer("fit.n_params") == 7);
    CHECK(doc.contains("fit.loglik"));
    CHECK(!doc.contains("fit.bic"));
}

TEST_CASE("typed accessors reject values of the wrong shape") {
    KvDoc doc;
    doc.set("word", "seven");
    doc.set("real", 1.5);
    CHECK_THROWS_AS(doc.get("missing"), report_error);
    CHECK_THROWS_AS(doc.number("word"), report_error);
    CHECK_THROWS_AS(doc.integer("real"), report_error);
    CHECK_THROWS_AS(doc.flag("word"), report_error);
}

TEST_CASE("set rejects malformed keys and multi-line values") {
    KvDoc doc;
    CHECK_THROWS_AS(doc.set("", "x"), std::logic_error);
    CHECK_THROWS_AS(doc.set("has space", "x"), std::logic_error);
    CHECK_THROWS_AS(doc.set("a=b", "x"), std::logic_error);
    CHECK_THROWS_AS(doc.set("key", "line one\nline two"), std::logic_error);
}

TEST_CASE("write emits one key = value line per entry") {
    KvDoc doc;
    doc.set("a", 1);
    doc.set("b.c", "hello world");
    std::ostringstream os;
    doc.write(os);
    CHECK(os.str() == "a = 1\nb.c = hello world\n");
}

TEST_CASE("read skips comments and blanks and trims whitespace") {
    std::istringstream is(
        "# report header\n"
        "\n"
        "  a = 1  \n"
        "b=two words\n"
        "# trailing note\n");
    const KvDoc doc = KvDoc::read(is);
    REQUIRE(doc.entries().size() == 2);
    CHECK(doc.get("a") == "1");
    CHECK(doc.get("b") == "two words");
    CHECK(doc.entries()[0].first == "a");
}

TEST_CASE("read rejects malformed lines with the source prefixed") {
    std::istringstream no_equals("just text\n");
    CHECK_THROWS_AS(KvDoc::read(no_equals), report_error);

    std::istringstream duplicate("a = 1\na = 2\n");
    CHECK_THROWS_AS(KvDoc::read(duplicate), report_error);

    std::istringstream bad_key("bad key = 1\n");
    try {
        KvDoc::read(bad_key, "input.kv");
        FAIL("expected report_error");
    } catch (const report_error& e) {
        CHECK(std::string(e.what()).find("input.kv") == 0);
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("file round trip") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "wealthmix_kvdoc_tests";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "report.kv").string();

    KvDoc doc;
    doc.set("model", "kgen");
    doc.set("alpha", 0.718);
    doc.set("n", 100000);
    doc.write_file(path);

    const KvDoc back = KvDoc::read_file(path);
    REQUIRE(back.entries().size() == 3);
    CHECK(back.get("model") == "kgen");
    CHECK(back.number("alpha") == 0.718);
    CHECK(back.integer("n") == 100000);

    CHECK_THROWS_AS(KvDoc::read_file("/nonexistent/report.kv"), report_error);
    CHECK_THROWS_AS(doc.write_file("/nonexistent/dir/report.kv"), usage_error);
}

}
