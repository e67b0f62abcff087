#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef NMCAVITY_CLI
#error "NMCAVITY_CLI must name the CLI executable"
#endif

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("nmcavity-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) const {
        const std::string cmd = "cd '" + dir_.string() + "' && '" NMCAVITY_CLI "' " + args + " > stdout.txt 2> stderr.txt";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string read(const std::string& name) const {
        std::ifstream f(dir_ / name, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name, std::ios::binary) << text;
    }

    bool exists(const std::string& name) const { return fs::exists(dir_ / name); }

    fs::path dir_;
};

const char* kShort = " --set time.t_end=10 --set time.n_points=21";

} // namespace

TEST_F(Cli, RunPresetToFileWithCheck) {
    EXPECT_EQ(run(std::string("run --preset figure1 --out a.csv --check") + kShort), 0);
    const auto csv = read("a.csv");
    EXPECT_EQ(csv.substr(0, 14), "t[1/(2Omega)],");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 22);
}

TEST_F(Cli, RunToStdoutIsDeterministic) {
    ASSERT_EQ(run(std::string("run --preset lorentzian") + kShort), 0);
    const auto first = read("stdout.txt");
    ASSERT_EQ(run(std::string("run --preset lorentzian --set solver.threads=4") + kShort), 0);
    EXPECT_EQ(read("stdout.txt"), first);
}

TEST_F(Cli, ConfigFileAndPrintConfig) {
    write("c.cfg", "preset = lorentzian\nspectrum.lambda = 2.5\n");
    ASSERT_EQ(run("run --config c.cfg --print-config"), 0);
    const auto printed = read("stdout.txt");
    EXPECT_NE(printed.find("spectrum.lambda = 2.5\n"), std::string::npos);
    write("echo.cfg", printed);
    ASSERT_EQ(run("run --config echo.cfg --print-config"), 0);
    EXPECT_EQ(read("stdout.txt"), printed);
}

TEST_F(Cli, BothEnginesWriteThreeFiles) {
    ASSERT_EQ(run(std::string("run --preset figure1 --engine both --out cmp.csv") + kShort), 0);
    EXPECT_TRUE(exists("cmp.analytic.csv"));
    EXPECT_TRUE(exists("cmp.rk4.csv"));
    const auto report = read("cmp.discrepancy.csv");
    ASSERT_EQ(report.rfind("max_discrepancy,", 0), 0u);
    EXPECT_LT(std::stod(report.substr(16)), 1e-8);
}

TEST_F(Cli, SweepWritesPerValueFilesAndSummary) {
    ASSERT_EQ(run(std::string("sweep --preset lorentzian --param spectrum.lambda --values 1,10 --out sw") + kShort), 0);
    EXPECT_TRUE(exists("sw.spectrum.lambda=1.csv"));
    EXPECT_TRUE(exists("sw.spectrum.lambda=10.csv"));
    const auto summary = read("sw.summary.csv");
    EXPECT_EQ(summary.substr(0, summary.find('\n')),
              "spectrum.lambda,gamma_minus_inf[2Omega],gamma_plus_inf[2Omega],P_0e_plateau");
}

TEST_F(Cli, RatesSubcommand) {
    ASSERT_EQ(run(std::string("rates --preset figure1 --out r.csv") + kShort), 0);
    EXPECT_EQ(read("r.csv").substr(0, read("r.csv").find('\n')), "t[1/(2Omega)],gamma_minus[2Omega],gamma_plus[2Omega]");
}

TEST_F(Cli, ConfigErrorsExitTwo) {
    EXPECT_EQ(run("run"), 2);
    EXPECT_EQ(run("run --preset nope"), 2);
    EXPECT_EQ(run("run --preset figure1 --set spectrum.lambda1=-1"), 2);
    EXPECT_EQ(run("run --preset figure1 --set bogus=1"), 2);
    EXPECT_EQ(run("sweep --preset figure1 --param spectrum.colour --values 1"), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    write("bad.cfg", "preset = figure1\nspectrum.alpha1 = x\n");
    EXPECT_EQ(run("run --config bad.cfg"), 2);
    EXPECT_NE(read("stderr.txt").find("line 2"), std::string::npos);
}

TEST_F(Cli, NumericalErrorsExitThree) {
    EXPECT_EQ(run(std::string("run --preset figure1 --engine rk4 --set solver.dt=0.01") + kShort), 3);
}

TEST_F(Cli, IoErrorsExitFour) {
    EXPECT_EQ(run(std::string("run --preset figure1 --out /nonexistent-dir/out.csv") + kShort), 4);
    EXPECT_EQ(run("run --config missing.cfg"), 4);
}
