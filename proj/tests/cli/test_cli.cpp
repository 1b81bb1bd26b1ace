#include <filesystem>
#include <fstream>
#include <cstring>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "alm/catalog.hpp"
#include "alm/rates.hpp"
#include "alm_cli/app.hpp"
#include "alm_cli/trace.hpp"

namespace fs = std::filesystem;
using namespace alm;
using namespace alm::cli;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("alm_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int alm(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return run(args, out_, err_);
    }
    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    static std::string slurp(const std::string &p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

} // namespace

TEST_F(Cli, SolveConstantRhoConverges) {
    const std::string t = path("p1.csv");
    ASSERT_EQ(alm({"solve", "P1", "--rho", "10", "--stop", "1e-9", "--out", t}), exit_code::ok) << err_.str();
    const TraceFile tr = read_trace(t);
    ASSERT_FALSE(tr.rows.empty());
    EXPECT_LE(tr.rows.back().residual, 1e-9);
    EXPECT_EQ(tr.header_value("problem"), "P1");
    EXPECT_EQ(tr.rows.front().k, 0);
    EXPECT_FALSE(tr.rows.front().q_ratio.has_value());
    ASSERT_TRUE(tr.rows.back().dist_primal.has_value());
}

TEST_F(Cli, SolveGeometricRhoIsSuperlinear) {
    const std::string t = path("g.csv");
    ASSERT_EQ(alm({"solve", "P1", "--rho-geometric", "10:4", "--stop", "1e-11", "--out", t}), exit_code::ok);
    const std::string text = slurp(t);
    EXPECT_NE(text.find("# classification=Q-superlinear"), std::string::npos);
    ASSERT_EQ(alm({"rates", t, "--problem", "P1"}), exit_code::ok);
    EXPECT_NE(out_.str().find("Q-superlinear"), std::string::npos);
}

TEST_F(Cli, SolveExitCodes) {
    EXPECT_EQ(alm({"solve", "NOPE", "--out", path("x.csv")}), exit_code::usage);
    EXPECT_FALSE(fs::exists(path("x.csv")));
    EXPECT_EQ(alm({"solve", "P1", "--chat", "1e-6", "--out", path("l.csv")}), exit_code::locality_failed);
    EXPECT_EQ(alm({"solve", "P1", "--max-inner", "0", "--out", path("f.csv")}), exit_code::subproblem_failed);
    EXPECT_EQ(alm({"solve", "P1", "--max-outer", "2", "--out", path("m.csv")}), exit_code::max_outer);
    EXPECT_EQ(alm({"solve", "P1", "--rho", "-1", "--out", path("r.csv")}), exit_code::usage);
    EXPECT_EQ(alm({"solve", "P1", "--rho", "1", "--rho-geometric", "1:2"}), exit_code::usage);
    EXPECT_EQ(alm({"solve", "P1", "--x0", "1,2,3", "--out", path("d.csv")}), exit_code::usage);
    EXPECT_EQ(alm({}), exit_code::usage);
    EXPECT_EQ(alm({"frobnicate"}), exit_code::usage);
    EXPECT_EQ(alm({"--help"}), exit_code::ok);
}

TEST_F(Cli, AllCatalogProblemsSolve) {
    for (const std::string &id : catalog_ids())
        EXPECT_EQ(alm({"solve", id, "--out", path(id + ".csv")}), exit_code::ok) << id << err_.str();
}

TEST_F(Cli, RatesConstantRho) {
    const std::string t = path("p1.csv");
    ASSERT_EQ(alm({"solve", "P1", "--rho", "10", "--out", t}), exit_code::ok);
    ASSERT_EQ(alm({"rates", t, "--problem", "P1", "--json"}), exit_code::ok);
    const nlohmann::json j = nlohmann::json::parse(out_.str());
    EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
    EXPECT_EQ(j.at("classification"), "Q-linear");
    EXPECT_LE(j.at("q_hat").get<double>(), 0.5);
    EXPECT_TRUE(j.at("used_known_solution").get<bool>());
    ASSERT_EQ(alm({"rates", t}), exit_code::ok);
    EXPECT_NE(out_.str().find("KKT residual"), std::string::npos);
}

TEST_F(Cli, RatesDataErrors) {
    const std::string t = path("short.csv");
    ASSERT_EQ(alm({"solve", "P1", "--max-outer", "2", "--out", t}), exit_code::max_outer);
    EXPECT_EQ(read_trace(t).rows.size(), 3u);
    EXPECT_EQ(alm({"rates", t}), exit_code::data);
    EXPECT_EQ(alm({"rates", path("missing.csv")}), exit_code::data);
    std::ofstream(path("junk.csv")) << "hello\n";
    EXPECT_EQ(alm({"rates", path("junk.csv")}), exit_code::data);
    const std::string p1 = path("p1.csv");
    ASSERT_EQ(alm({"solve", "P1", "--out", p1}), exit_code::ok);
    EXPECT_EQ(alm({"rates", p1, "--problem", "P2"}), exit_code::data);
    EXPECT_EQ(alm({"rates", p1, "--problem", "NOPE"}), exit_code::usage);
}

TEST_F(Cli, RoundTripReproducesInMemoryRates) {
    for (const std::string &sched : {std::string("--rho=10"), std::string("--rho-geometric=10:4")}) {
        const std::string t = path("rt.csv");
        ASSERT_EQ(alm({"solve", "P1", sched, "--out", t}), exit_code::ok);

        const CatalogProblem c = catalog_problem("P1");
        SolverConfig cfg;
        cfg.rho = sched == "--rho=10" ? RhoSchedule::constant(10) : RhoSchedule::geometric(10, 4);
        const RunTrace run = alm_run(c.problem, c.x0, c.y0, cfg, &c.solution);
        const RateReport mem = estimate_rates(run);
        const RateReport disk = rates_from_trace(read_trace(t), true);
        EXPECT_EQ(mem.distances, disk.distances);
        EXPECT_EQ(mem.ratios, disk.ratios);
        EXPECT_EQ(mem.q_hat, disk.q_hat);
        EXPECT_EQ(mem.tail, disk.tail);
        EXPECT_EQ(mem.classification, disk.classification);
        EXPECT_EQ(mem.used_known_solution, disk.used_known_solution);
    }
}

TEST_F(Cli, IdenticalCommandsGiveIdenticalTraces) {
    for (const std::string &id : {"P1", "P3"}) {
        ASSERT_EQ(alm({"solve", id, "--seed", "7", "--out", path("a.csv")}), exit_code::ok);
        ASSERT_EQ(alm({"solve", id, "--seed", "7", "--out", path("b.csv")}), exit_code::ok);
        EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
        ASSERT_EQ(alm({"diagnose", id, "uqgc", "--seed", "3", "--samples", "50", "--out", path("a.json")}),
                  exit_code::ok);
        ASSERT_EQ(alm({"diagnose", id, "uqgc", "--seed", "3", "--samples", "50", "--out", path("b.json")}),
                  exit_code::ok);
        EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    }
}

TEST_F(Cli, DiagnoseExamples) {
    ASSERT_EQ(alm({"diagnose", "P1", "sosc", "--multiplier", "1,0", "--samples", "256"}), exit_code::ok);
    nlohmann::json j = nlohmann::json::parse(out_.str());
    EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
    EXPECT_EQ(j.at("verdict"), "pass");
    EXPECT_GE(j.at("metrics").at("margin").get<double>(), 0.99);

    ASSERT_EQ(alm({"diagnose", "P1", "uqgc", "--gamma", "0.1", "--kappa", "0.9"}), exit_code::ok);
    EXPECT_EQ(alm({"diagnose", "P1", "uqgc", "--gamma", "0.1", "--kappa", "10"}), exit_code::check_failed);
    ASSERT_EQ(alm({"diagnose", "P1", "semistab"}), exit_code::ok);

    const std::string rep = path("eb.json");
    ASSERT_EQ(alm({"diagnose", "P1", "errbound", "--out", rep}), exit_code::ok);
    j = nlohmann::json::parse(slurp(rep));
    EXPECT_TRUE(j.at("estimate").is_number());
    EXPECT_EQ(alm({"diagnose", "P1", "errbound", "--mode", "multiplier-set", "--samples", "10"}),
              exit_code::check_failed);
    EXPECT_EQ(nlohmann::json::parse(out_.str()).at("excluded"), 10);

    EXPECT_EQ(alm({"diagnose", "P1", "quotient"}), exit_code::ok);
    EXPECT_EQ(alm({"diagnose", "P1", "quotient", "--directions", "1,0;0,1", "--t", "0.1"}), exit_code::ok);
    EXPECT_EQ(alm({"diagnose", "P1", "stepbound", "--samples", "10"}), exit_code::ok);
    EXPECT_EQ(alm({"diagnose", "P3", "semistab"}), exit_code::check_failed);
}

TEST_F(Cli, DiagnoseUsageErrors) {
    EXPECT_EQ(alm({"diagnose", "P1", "bogus"}), exit_code::usage);
    EXPECT_EQ(alm({"diagnose", "NOPE", "sosc"}), exit_code::usage);
    EXPECT_EQ(alm({"diagnose", "P1", "sosc", "--multiplier", "1"}), exit_code::usage);
    EXPECT_EQ(alm({"diagnose", "P1", "errbound", "--mode", "sideways"}), exit_code::usage);
    EXPECT_EQ(alm({"diagnose", "P1", "uqgc", "--rho", "10,abc"}), exit_code::usage);
}

TEST(TraceFormat, ShortestRoundTrip) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int i = 0; i < 2000; ++i) {
        double v;
        const std::uint64_t b = bits(rng);
        std::memcpy(&v, &b, sizeof v);
        if (std::isnan(v))
            continue;
        EXPECT_EQ(parse_double(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(10), "10");
    EXPECT_EQ(parse_double(format_double(kInf)), kInf);
}

TEST(TraceFormat, ParseRejectsMalformedInput) {
    auto parse = [](const std::string &s) {
        std::istringstream in(s);
        return parse_trace(in);
    };
    const std::string head = std::string("# problem=P1\n") + kTraceColumns + "\n";
    EXPECT_NO_THROW(parse(head + "0,10,0,1,0,0,,,\n"));
    EXPECT_THROW(parse("# problem=P1\n0,10,0,1,0,0,,,\n"), DataError);
    EXPECT_THROW(parse(head + "0,10,0,1,0,0,,\n"), DataError);
    EXPECT_THROW(parse(head + "0,10,zero,1,0,0,,,\n"), DataError);
    EXPECT_THROW(parse(head + "0.5,10,0,1,0,0,,,\n"), DataError);
    EXPECT_THROW(parse(head + "0,10,0,1,0,0,,,\n# status=converged\n1,10,0,1,0,0,,,\n"), DataError);
    EXPECT_THROW(parse(""), DataError);

    const TraceFile t = parse(head + "0,10,0,1,0,0,0.5,,\n1,10,0,0.5,0,3,,,0.5\n# status=converged\n");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].dist_primal, 0.5);
    EXPECT_FALSE(t.rows[0].dist_dual.has_value());
    EXPECT_EQ(t.rows[1].inner_iters, 3);
    EXPECT_EQ(t.footer.at(0).second, "converged");
    EXPECT_EQ(format_trace(t), head + "0,10,0,1,0,0,0.5,,\n1,10,0,0.5,0,3,,,0.5\n# status=converged\n");
}

TEST_F(Cli, AtomicWriteReplacesAndLeavesNoTemporaries) {
    const std::string p = path("file.txt");
    write_file_atomic(p, "one");
    write_file_atomic(p, "two");
    EXPECT_EQ(slurp(p), "two");
    int entries = 0;
    for ([[maybe_unused]] const auto &e : fs::directory_iterator(dir_))
        ++entries;
    EXPECT_EQ(entries, 1);
    EXPECT_THROW(write_file_atomic(path("no/such/dir/file.txt"), "x"), std::runtime_error);
}
