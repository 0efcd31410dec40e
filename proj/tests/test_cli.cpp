#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int code;
    std::string out;
};

// Runs the CLI with stderr folded into stdout and colors off.
RunResult run(const std::string& args) {
    std::string cmd = std::string("INI_COLOR=0 ") + INI_BIN + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    while (fgets(buf.data(), (int)buf.size(), p)) out += buf.data();
    int status = pclose(p);
    return RunResult{WEXITSTATUS(status), out};
}

std::string write_tmp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/ini_cli_") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("check prints the principal type") {
    auto p = write_tmp("t1.ini", "#lang ini1\ntrue\n");
    auto r = run("check " + p);
    CHECK(r.code == 0);
    CHECK(r.out == "Bool\n");
}

TEST_CASE("check rejects the shared application program") {
    auto p = write_tmp("t2.ini", "#lang ini1\nlet x = coin in (fn y: Bool => x (x) y) x\n");
    auto r = run("check " + p);
    CHECK(r.code == 1);
    CHECK(r.out.find("SharedAcrossTensor") != std::string::npos);
}

TEST_CASE("eval emits exact rationals as json") {
    auto p = write_tmp("t3.ini", "#lang ini1\nlet x = coin in (x, x)\n");
    auto r = run("eval " + p + " --format json");
    CHECK(r.code == 0);
    CHECK(r.out == "{\"(ff,ff)\":\"1/2\",\"(tt,tt)\":\"1/2\"}\n");
}

TEST_CASE("eval on the fresh pair program") {
    auto p = write_tmp("t4.ini",
                       "#lang ini2 layer=I\nsample (sample as in fresh), (sample as in fresh) "
                       "as a, b in (a, b)\n");
    auto r = run("eval " + p + " --model name --format json");
    CHECK(r.code == 0);
    CHECK(r.out == "{\"names\":2,\"value\":\"(n0,n1)\"}\n");
}

TEST_CASE("a model without the primitive is a PrimUnknown error") {
    auto p = write_tmp("t5.ini", "#lang ini1\ncoin\n");
    auto r = run("eval " + p + " --model pset");
    CHECK(r.code == 1);
    CHECK(r.out.find("PrimUnknown") != std::string::npos);
}

TEST_CASE("independence requires a tensor type") {
    auto p = write_tmp("t6.ini", "#lang ini1\nlet x = coin in (x, x)\n");
    auto r = run("independence " + p);
    CHECK(r.code == 1);
    CHECK(r.out.find("not a tensor type") != std::string::npos);
}

TEST_CASE("independence accepts the two-coin tensor") {
    auto p = write_tmp("t7.ini", "#lang ini1\ncoin (x) coin\n");
    auto r = run("independence " + p);
    CHECK(r.code == 0);
    CHECK(r.out.find("product: yes") != std::string::npos);
}

TEST_CASE("independence prints the erased joint for two-level programs") {
    auto p = write_tmp("t8.ini",
                       "#lang ini2 layer=I\n(sample as in coin) (x) (sample as in coin)\n");
    auto r = run("independence " + p);
    CHECK(r.code == 0);
    CHECK(r.out.find("erased joint") != std::string::npos);
    CHECK(r.out.find("product: yes") != std::string::npos);
}

TEST_CASE("translate emits a loadable two-level program") {
    auto p = write_tmp("t9.ini", "#lang ini1\ncoin (x) true\n");
    auto r = run("translate " + p + " --fragment mult");
    CHECK(r.code == 0);
    CHECK(r.out.find("#lang ini2 layer=I") != std::string::npos);
    CHECK(r.out.find("(sample as in coin) (x) (sample as in true)") != std::string::npos);

    // The printed program feeds back into check.
    auto p2 = write_tmp("t9b.ini",
                        "#lang ini2 layer=I\n(sample as in coin) (x) (sample as in true)\n");
    CHECK(run("check " + p2).code == 0);
}

TEST_CASE("suite commands exit zero on green runs") {
    auto eq = run("suite equations --seed 7 --count 5 --depth 3");
    CHECK(eq.code == 0);
    CHECK(eq.out.find("FAIL") == std::string::npos);

    auto so = run("suite soundness --seed 7 --count 20 --depth 5 --model dist");
    CHECK(so.code == 0);

    auto fa = run("suite fullabstraction --seed 7 --count 12 --depth 4");
    CHECK(fa.code == 0);
}

TEST_CASE("deterministic output bytes for fixed inputs") {
    auto a = run("suite soundness --seed 9 --count 15 --depth 5 --model dist");
    auto b = run("suite soundness --seed 9 --count 15 --depth 5 --model dist");
    CHECK(a.out == b.out);
    auto g1 = run("gen --seed 4 --count 5 --depth 4 --layer I");
    auto g2 = run("gen --seed 4 --count 5 --depth 4 --layer I");
    CHECK(g1.out == g2.out);
}

TEST_CASE("gen respects an explicit target type") {
    auto r = run("gen --seed 4 --count 3 --depth 4 --layer ini1 --type \"Bool (x) Bool\"");
    CHECK(r.code == 0);
    // Every generated term typechecks at the requested type.
    int line = 0;
    size_t pos = 0;
    while (pos < r.out.size()) {
        size_t nl = r.out.find('\n', pos);
        std::string term = r.out.substr(pos, nl - pos);
        auto p = write_tmp("gen" + std::to_string(line++) + ".ini", "#lang ini1\n" + term + "\n");
        auto c = run("check " + p);
        CHECK(c.code == 0);
        CHECK(c.out == "Bool (x) Bool\n");
        pos = nl == std::string::npos ? r.out.size() : nl + 1;
    }
    CHECK(line == 3);
}
