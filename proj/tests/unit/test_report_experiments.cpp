#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mdpvol/acceptance.hpp"
#include "mdpvol/config.hpp"
#include "mdpvol/experiments.hpp"
#include "mdpvol/report.hpp"

using namespace mdpvol;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("mdpvol_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig config_for(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    return c;
}

}  // namespace

TEST(Report, FormatNumber) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(Report, CsvQuoting) {
    ReportTable t{{"a", "b"}, {}};
    t.add({1.5, std::string("x,y")});
    t.add({3LL, std::string("plain")});
    EXPECT_EQ(to_csv(t), "a,b\n1.5,\"x,y\"\n3,plain\n");
    EXPECT_THROW(t.add({1.0}), std::exception);
}

TEST(Report, JsonNumbers) {
    EXPECT_EQ(json_number(INFINITY), "inf");
    EXPECT_EQ(json_number(1.25), 1.25);
    JsonSummary s;
    s["b"] = 1;
    s["a"] = 2;
    EXPECT_EQ(to_json_text(s), "{\n  \"b\": 1,\n  \"a\": 2\n}\n");
}

TEST(Report, WriteAtomicCreatesDirectories) {
    const fs::path dir = temp_dir("atomic");
    const fs::path target = dir / "nested" / "out.txt";
    write_atomic(target, "hello\n");
    write_atomic(target, "again\n");
    EXPECT_EQ(read_file(target), "again\n");
    EXPECT_EQ(std::distance(fs::directory_iterator(target.parent_path()), fs::directory_iterator{}), 1);
}

TEST(Experiments, GoldenHeaders) {
    for (Experiment e : {Experiment::Invariant, Experiment::Poisson, Experiment::Rate, Experiment::Ldp,
                         Experiment::Mc, Experiment::Asymptotics, Experiment::Compare}) {
        const fs::path golden = fs::path(MDPVOL_GOLDEN_DIR) / (std::string(to_string(e)) + "_header.csv");
        std::string joined;
        for (const auto& h : experiment_header(e)) {
            joined += (joined.empty() ? "" : ",") + h;
        }
        EXPECT_EQ(joined + "\n", read_file(golden)) << to_string(e);
    }
}

TEST(Experiments, InvariantValues) {
    const ExperimentOutput out = compute_experiment(Experiment::Invariant, config_for(Experiment::Invariant));
    ASSERT_EQ(out.table.rows.size(), 1u);
    EXPECT_NEAR(std::get<double>(out.table.rows[0][0]), 1.6, 1e-12);
    EXPECT_NEAR(std::get<double>(out.table.rows[0][2]), 0.1, 1e-8);
    EXPECT_NEAR(std::get<double>(out.table.rows[0][3]), 0.1 * 0.25 / 4.0, 1e-8);
}

TEST(Experiments, RunIsByteDeterministic) {
    const fs::path a = temp_dir("det_a");
    const fs::path b = temp_dir("det_b");
    for (Experiment e : {Experiment::Rate, Experiment::Compare}) {
        const RunResult ra = run_experiment(e, config_for(e), a);
        const RunResult rb = run_experiment(e, config_for(e), b);
        ASSERT_EQ(ra.files.size(), rb.files.size());
        for (std::size_t i = 0; i < ra.files.size(); ++i) {
            EXPECT_EQ(read_file(ra.files[i]), read_file(rb.files[i]));
        }
    }
}

TEST(Experiments, CompareVanishesAtCenter) {
    ExperimentConfig c = config_for(Experiment::Compare);
    c.params.d_variant = "standard";
    const ExperimentOutput out = compute_experiment(Experiment::Compare, c);
    double best = INFINITY;
    for (const auto& row : out.table.rows) {
        if (std::abs(std::get<double>(row[0]) + 0.05) < 1e-9) {
            best = std::get<double>(row[3]);
        }
    }
    EXPECT_LT(best, 1e-9);
    ASSERT_TRUE(out.summary.has_value());
    EXPECT_LT((*out.summary)["curvature_residual"].get<double>(), 1e-3);
}

TEST(Experiments, ForeignParamsRejected) {
    ExperimentConfig c = config_for(Experiment::Rate);
    c.params.paths = 10;
    EXPECT_THROW(compute_experiment(Experiment::Rate, c), ConfigError);
    EXPECT_THROW(compute_experiment(Experiment::Ldp, config_for(Experiment::Rate)), ConfigError);
}

TEST(AcceptanceHook, QMultiplierBreaksCurvatureCriterion) {
    AcceptanceOptions base;
    EXPECT_TRUE(run_criterion(2, base).passed);
    AcceptanceOptions skewed;
    skewed.q_multiplier = 1.1;
    const CriterionResult r = run_criterion(2, skewed);
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.id, 2);
}

TEST(AcceptanceHook, TextReportFormat) {
    AcceptanceOptions o;
    o.criteria = {3};
    const AcceptanceReport r = run_acceptance(o);
    ASSERT_EQ(r.results.size(), 1u);
    EXPECT_TRUE(r.all_passed());
    EXPECT_EQ(acceptance_text(r).rfind("criterion 3: PASS", 0), 0u);
}
