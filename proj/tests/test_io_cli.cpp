#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "wpfr/io.hpp"

using namespace wpfr;

namespace {

struct RunOutput {
    int exit_code;
    std::string stdout_text;
};

RunOutput run_cli(const std::string& args) {
    const std::string out_file = "cli_test_stdout.txt";
    const std::string cmd = std::string(WPFR_CLI_PATH) + " " + args + " > " +
                            out_file + " 2> cli_test_stderr.txt";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(out_file.c_str());
    std::remove("cli_test_stderr.txt");
#ifdef _WIN32
    const int code = status;
#else
    const int code = WEXITSTATUS(status);
#endif
    return {code, ss.str()};
}

}  // namespace

TEST_CASE("config parsing") {
    const std::string tmp = "cfg_test.txt";
    {
        std::ofstream out(tmp);
        out << "# comment\n";
        out << "workers = 3\n";
        out << "tolerance = 1e-8\n";
        out << "output = some.csv\n";
    }
    const Config cfg = Config::from_file(tmp);
    CHECK(cfg.get_int("workers", 1) == 3);
    CHECK(cfg.get_double("tolerance", 0.0) == Catch::Approx(1e-8));
    CHECK(cfg.get_string("output") == "some.csv");
    CHECK(cfg.get_int("missing", 7) == 7);
    std::remove(tmp.c_str());

    {
        std::ofstream out(tmp);
        out << "no_equals_sign\n";
    }
    CHECK_THROWS_AS(Config::from_file(tmp), domain_error);
    std::remove(tmp.c_str());
}

TEST_CASE("csv formatting") {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.metadata("note");
    csv.header({"a", "b"});
    csv.row({1.0, 0.5});
    const std::string text = os.str();
    CHECK(text.find("# note\n") == 0);
    CHECK(text.find("a,b\n") != std::string::npos);
    CHECK(text.find("1,0.5\n") != std::string::npos);
}

TEST_CASE("cli geom fig8 prints the closed-form value") {
    const RunOutput r = run_cli("geom fig8 2 2 2");
    REQUIRE(r.exit_code == 0);
    CHECK(std::fabs(std::stod(r.stdout_text) - 5.0563710812901065) < 1e-5);
}

TEST_CASE("cli volumes schedule") {
    const RunOutput r = run_cli("volumes schedule --K 1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("L_multiplier=6") != std::string::npos);
    CHECK(r.stdout_text.find("alpha=0.16666666666666666") != std::string::npos);
    CHECK(r.stdout_text.find("gap=0.2222222222222222") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("nonsense-subcommand").exit_code == kExitInputError);
    CHECK(run_cli("geom fig8 2 2").exit_code == kExitInputError);
    // malformed table file
    {
        std::ofstream out("broken_table.txt");
        out << "1 2 : 1,1=0.5\n";
    }
    CHECK(run_cli("--table broken_table.txt volumes eval -g 1 -n 2 0 0").exit_code ==
          kExitInputError);
    std::remove("broken_table.txt");
    // out-of-domain point
    CHECK(run_cli("geom to-boundary -j 1 1 1 0.999").exit_code ==
          kExitInputError);
}

TEST_CASE("cli byte-identical reruns") {
    const std::string args =
        "enumerate 2 2 2 --cutoff 6 --word-cap 8";
    const RunOutput a = run_cli(args);
    const RunOutput b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(a.stdout_text.find("word,length,type,primitive") != std::string::npos);
    CHECK(a.stdout_text.find("figure_eight") != std::string::npos);

    const std::string sweep =
        "geom sweep --n 5 --from 1 1 1 --to 3 3 3";
    CHECK(run_cli(sweep).stdout_text == run_cli(sweep).stdout_text);
}

TEST_CASE("cli density emits csv with report metadata") {
    const RunOutput r = run_cli(
        "density fig8 --lmin 6 --lmax 16 --n 12 --degree-cap 1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("l,value,method,residual") != std::string::npos);
    CHECK(r.stdout_text.find("# c1=") != std::string::npos);
    CHECK(r.stdout_text.find("# max_violation=") != std::string::npos);
}

TEST_CASE("cli cancel emits the scaled column") {
    const RunOutput r = run_cli("cancel --m 1 --L 10 12");
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("L,m,value,value_over_exp_half_L") !=
          std::string::npos);
    // two data rows
    int lines = 0;
    for (char c : r.stdout_text)
        if (c == '\n') ++lines;
    CHECK(lines == 3);
}

TEST_CASE("cli levelset cross-check residual") {
    const RunOutput r = run_cli(
        "density levelset --l 9 -j 1 --f3 exp-half --method both");
    REQUIRE(r.exit_code == 0);
    std::istringstream is(r.stdout_text);
    std::string line;
    std::getline(is, line);  // header
    double resid = -1.0;
    while (std::getline(is, line)) {
        const auto pos = line.rfind(',');
        resid = std::stod(line.substr(pos + 1));
    }
    CHECK(resid >= 0.0);
    CHECK(resid < 1e-4);
}
