#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hgsts/core.hpp"
#include "hgsts/io.hpp"
#include "helpers.hpp"

#ifndef HGSTS_CLI_PATH
#define HGSTS_CLI_PATH "./hgsts"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(HGSTS_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[512];
    while (fgets(buf, sizeof buf, p)) r.out += buf;
    int status = pclose(p);
    r.code = WEXITSTATUS(status);
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string tmpfile_path(const std::string& name) { return "/tmp/hgsts_cli_" + name; }

} // namespace

TEST_CASE("verify: fano exit codes at g-max 5 and 6") {
    auto path = tmpfile_path("fano.sts");
    hgsts::write_sts_file(path, hgsts::testing::fano());

    auto r5 = run("verify " + path + " --g-max 5");
    CHECK(r5.code == 0);
    CHECK(r5.out.find("steiner: yes") != std::string::npos);
    CHECK(r5.out.find("girth: > 5") != std::string::npos);

    auto r6 = run("verify " + path + " --g-max 6");
    CHECK(r6.code == 2);
    CHECK(r6.out.find("girth: 6") != std::string::npos);
}

TEST_CASE("verify: malformed file cites the line") {
    auto path = tmpfile_path("bad.sts");
    {
        std::ofstream f(path);
        f << "sts 7 1\n0 1\n";
    }
    auto r = run("verify " + path + " --g-max 5");
    CHECK(r.code == 5);
    CHECK(r.out.find(":2:") != std::string::npos);
}

TEST_CASE("count-erdos and bound") {
    CHECK(run("count-erdos --j 5").out == "0\n");
    CHECK(run("count-erdos --j 4").out == "0\n");
    CHECK(run("count-erdos --j 6").out == "6\n");
    CHECK(run("count-erdos --j 3").code == 4);

    auto b = run("bound --N 7 --g 5");
    CHECK(b.code == 0);
    double v = std::stod(b.out);
    CHECK(v == doctest::Approx(49.0 / 6.0 * (std::log(7.0) - 2.0)).epsilon(1e-12));

    // erd file driven
    auto erd = tmpfile_path("erd.kv");
    {
        std::ofstream f(erd);
        f << "erd_6 = 6\nerd_7 = 20\nerd_8 = 100\n";
    }
    CHECK(run("bound --N 13 --g 8 --erd-file " + erd).code == 0);
    CHECK(run("bound --N 13 --g 6").code == 4); // g >= 6 demands the file
}

TEST_CASE("nibble: determinism, starvation exit, csv header") {
    auto p1 = tmpfile_path("nib_a");
    auto p2 = tmpfile_path("nib_b");
    auto r1 = run("nibble --n 40 --g 6 --seed 9 --coverage 0.8 --out-prefix " + p1);
    auto r2 = run("nibble --n 40 --g 6 --seed 9 --coverage 0.8 --out-prefix " + p2);
    CHECK((r1.code == 0 || r1.code == 3));
    CHECK(r1.code == r2.code);
    CHECK(slurp(p1 + ".csv") == slurp(p2 + ".csv"));
    CHECK(slurp(p1 + ".sts") == slurp(p2 + ".sts"));
    CHECK(slurp(p1 + ".csv").rfind("t,p,rho,f_edge,f_threat,A_size,Xe_min,Xe_mean,"
                                   "Xe_max,TT_mean_sampled,dev_edge,dev_threat\n",
                                   0) == 0);
    // the chosen file parses and is pasch-free
    auto sys = hgsts::read_sts_file(p1 + ".sts");
    CHECK(sys.is_partial_steiner());
    CHECK(!hgsts::scan_pasch(sys).has_value());
    // manifest exists and names the outputs
    auto man = slurp(p1 + ".manifest");
    CHECK(man.find("command = nibble") != std::string::npos);
    CHECK(man.find("digest.csv") != std::string::npos);

    // deep coverage at tiny n starves: distinct exit code
    auto r3 = run("nibble --n 12 --g 6 --seed 1 --coverage 1.0 --out-prefix " +
                  tmpfile_path("nib_starve"));
    CHECK(r3.code == 3);
}

TEST_CASE("nibble: trials fan out with suffixed outputs") {
    auto p = tmpfile_path("nib_t");
    auto r = run("nibble --n 30 --g 6 --seed 4 --coverage 0.7 --trials 2 --jobs 2 "
                 "--out-prefix " + p);
    CHECK((r.code == 0 || r.code == 3));
    CHECK(!slurp(p + ".0.csv").empty());
    CHECK(!slurp(p + ".1.csv").empty());
    CHECK(slurp(p + ".0.csv") != slurp(p + ".1.csv")); // independent substreams
}

TEST_CASE("gadget emission") {
    auto s = run("gadget sphere --g 5");
    CHECK(s.code == 0);
    CHECK(s.out.find("new-vertices=9") != std::string::npos);

    auto pcv = run("gadget pathcover --x 2");
    CHECK(pcv.out.find("vertices=26") != std::string::npos); // 2 + 24 midpoints

    auto bad = run("gadget nosuch --x 2");
    CHECK(bad.code == 4);

    auto sc = tmpfile_path("spherecover.txt");
    auto c = run("gadget spherecover --z 5 --g 4 --out " + sc);
    CHECK(c.code == 0);
    auto text = slurp(sc);
    CHECK(text.rfind("gadget spherecover", 0) == 0);
    // the embedded sts block decomposes the cover: parse it back
    auto pos = text.find("sts ");
    REQUIRE(pos != std::string::npos);
    std::istringstream body(text.substr(pos));
    auto sys = hgsts::read_sts(body, "spherecover");
    CHECK(sys.size() == 10 * 7); // C(5,3) out-decompositions at g=4

    auto cd = run("gadget cycledecomp --x 5 --seed 3");
    CHECK(cd.code == 0);
    CHECK(cd.out.rfind("gadget cycledecomp", 0) == 0);
}

TEST_CASE("generate: success verifies, impossible orders fail loudly") {
    auto out = tmpfile_path("gen15.sts");
    auto r = run("generate --n 15 --g 6 --seed 2 --out " + out);
    REQUIRE(r.code == 0);
    auto sys = hgsts::read_sts_file(out);
    CHECK(hgsts::verify_steiner(sys).ok);
    CHECK(!hgsts::girth(sys, 6).girth.has_value());
    CHECK(!slurp(out + ".manifest").empty());

    auto r2 = run("generate --n 15 --g 6 --seed 2 --out " + tmpfile_path("gen15b.sts"));
    CHECK(slurp(out) == slurp(tmpfile_path("gen15b.sts"))); // rerun determinism

    auto fail = run("generate --n 7 --g 6 --seed 1 --retries 2 --out " +
                    tmpfile_path("gen7.sts"));
    CHECK(fail.code == 3);
    CHECK(fail.out.find("backtracking") != std::string::npos);

    CHECK(run("generate --n 8 --g 5 --out /tmp/x.sts").code == 4); // 8 mod 6 = 2
}

TEST_CASE("generate: config file with flag overrides") {
    auto cfgp = tmpfile_path("pipe.cfg");
    {
        std::ofstream f(cfgp);
        f << "n = 9\ng = 5\nseed = 6\nretries = 3\n"
          << "theta = 0.2\ngamma = 0.01\nrho = 0.1\nnu = 0.05\nbeta = 0.4\n";
    }
    auto out = tmpfile_path("gen9.sts");
    auto r = run("generate --config " + cfgp + " --out " + out);
    CHECK(r.code == 0);
    auto sys = hgsts::read_sts_file(out);
    CHECK(sys.n_vertices() == 9);

    // flags win over the config file
    auto out2 = tmpfile_path("gen13.sts");
    auto r2 = run("generate --config " + cfgp + " --n 13 --out " + out2);
    CHECK(r2.code == 0);
    CHECK(hgsts::read_sts_file(out2).n_vertices() == 13);
}

TEST_CASE("HGSTS_SEED env is the default seed") {
    auto pa = tmpfile_path("env_a");
    auto pb = tmpfile_path("env_b");
    std::string base = "nibble --n 24 --g 6 --coverage 0.6 --out-prefix ";
    std::string cmd1 = "HGSTS_SEED=123 " + std::string(HGSTS_CLI_PATH) + " " + base + pa +
                       " > /dev/null 2>&1";
    std::string cmd2 = std::string(HGSTS_CLI_PATH) + " " + base + pb +
                       " --seed 123 > /dev/null 2>&1";
    REQUIRE(std::system(cmd1.c_str()) != -1);
    REQUIRE(std::system(cmd2.c_str()) != -1);
    CHECK(slurp(pa + ".csv") == slurp(pb + ".csv"));
}
