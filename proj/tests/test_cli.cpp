#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("dcsim_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) const {
        const std::string cmd = std::string(DCSIM_PATH) + " " + args + " >" +
                                (dir_ / "stdout.txt").string() + " 2>" +
                                (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path write(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, RecoverSucceeds) {
    EXPECT_EQ(run("recover --out " + (dir_ / "o").string()), 0);
    EXPECT_TRUE(fs::exists(dir_ / "o" / "recover.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "o" / "summary.txt"));
}

TEST_F(Cli, CollinearAnchorsExitTwo) {
    const fs::path cfg = write("c.txt", "anchor = 0,0\nanchor = 1,0\nanchor = 2,0\n");
    EXPECT_EQ(run("home --config " + cfg.string() + " --out " + (dir_ / "o").string()), 2);
    EXPECT_NE(slurp(dir_ / "stderr.txt").find("degenerate"), std::string::npos);
}

TEST_F(Cli, BadInputsExitTwo) {
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("home --dt nope"), 2);
    EXPECT_EQ(run("home --config " + (dir_ / "missing.txt").string()), 2);
    const fs::path cfg = write("bad.txt", "colour = blue\n");
    EXPECT_EQ(run("home --config " + cfg.string()), 2);
}

TEST_F(Cli, UnwritableOutputExitThree) {
    const fs::path blocker = write("file", "x");
    EXPECT_EQ(run("recover --out " + (blocker / "sub").string()), 3);
}

TEST_F(Cli, PrintConfigRoundTrips) {
    EXPECT_EQ(run("formation --seed 5 --print-config"), 0);
    const std::string first = slurp(dir_ / "stdout.txt");
    const fs::path cfg = write("resolved.txt", first);
    EXPECT_EQ(run("formation --config " + cfg.string() + " --print-config"), 0);
    EXPECT_EQ(slurp(dir_ / "stdout.txt"), first);
}

TEST_F(Cli, SameSeedSameBytes) {
    for (const std::string mode : {"home", "noise", "formation"}) {
        const std::string common = mode + " --seed 11 --trials 3 --tmax 5 --out ";
        ASSERT_EQ(run(common + (dir_ / "a").string()), 0) << mode;
        ASSERT_EQ(run(common + (dir_ / "b").string()), 0) << mode;
        const std::string a = slurp(dir_ / "a" / "trajectory.csv");
        EXPECT_FALSE(a.empty());
        EXPECT_EQ(a, slurp(dir_ / "b" / "trajectory.csv")) << mode;
        ASSERT_EQ(run(mode + " --seed 12 --trials 3 --tmax 5 --out " + (dir_ / "c").string()), 0);
        EXPECT_NE(a, slurp(dir_ / "c" / "trajectory.csv")) << mode;
        fs::remove_all(dir_ / "a");
        fs::remove_all(dir_ / "b");
        fs::remove_all(dir_ / "c");
    }
}
