#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "infospec/common.hpp"
#include "infospec/io.hpp"

using namespace infospec;

TEST_CASE("format_double round-trips and spells out non-finite values") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 0.40132855411593976}) CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(format_double(kInf) == "inf");
    CHECK(format_double(-kInf) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(json_number(kInf) == "inf");
    CHECK(json_number(0.5) == 0.5);
}

TEST_CASE("config_hash is stable and ignores key insertion order") {
    nlohmann::json a, b;
    a["n"] = 5;
    a["mode"] = "strict";
    b["mode"] = "strict";
    b["n"] = 5;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b["n"] = 6;
    CHECK(config_hash(a) != config_hash(b));
    // FNV-1a 64 of "{}" computed by hand from the published constants
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : std::string("{}")) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    CHECK(config_hash(nlohmann::json::object()) == buf);
}

TEST_CASE("CsvWriter emits the provenance line, header and checked rows") {
    std::ostringstream os;
    nlohmann::json cfg = {{"k", 1}};
    CsvWriter w(os, cfg, {"n", "a", "tag"});
    w << 3 << 0.25 << std::string("x");
    w.end_row();
    CHECK(os.str() == "# infospec " + std::string(kVersion) + " config=" + config_hash(cfg) + "\nn,a,tag\n3,0.25,x\n");
    w << 1;
    CHECK_THROWS_AS(w.end_row(), InputError);
    w << 2.0 << std::string("y");
    CHECK_THROWS_AS(w << 4, InputError);
}
