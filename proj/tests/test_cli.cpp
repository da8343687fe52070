#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

std::string binary(const char* var) {
    const char* path = std::getenv(var);
    REQUIRE_MESSAGE(path != nullptr, var << " must point at the built binary");
    return path;
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    fs::path p = fs::temp_directory_path() / ("gwofi_cli_" + tag + "_" + std::to_string(counter++));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

RunResult run(const std::string& cmd) {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() / "gwofi_cli_io";
    fs::create_directories(dir);
    fs::path out = dir / ("out" + std::to_string(counter));
    fs::path err = dir / ("err" + std::to_string(counter));
    ++counter;
    int status = std::system((cmd + " > " + out.string() + " 2> " + err.string()).c_str());
    REQUIRE(status != -1);
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return fields;
}

// one generated dataset plus a config pointing at it, shared per test case
struct Fixture {
    fs::path dir;
    fs::path config;

    explicit Fixture(const std::string& tag) {
        dir = fresh_dir(tag);
        RunResult gen = run(binary("GWOFI_SYNTH") + " --kind implication --n 120 --extra 3 --seed 9 --out "s +
                            dir.string());
        REQUIRE(gen.code == 0);
        config = dir / "run.ini";
        std::ofstream cfg(config);
        cfg << "data.path = " << (dir / "data.csv").string() << "\n"
            << "data.schema = " << (dir / "schema.tsv").string() << "\n"
            << "data.target = outcome\n"
            << "mining.min_support = 0.05\n"
            << "mining.max_len = 2\n"
            << "split.cv_folds = 3\n"
            << "gwo.pack_size = 6\n"
            << "gwo.iterations = 6\n"
            << "run.seed = 5\n";
    }
    ~Fixture() { fs::remove_all(dir); }
};

} // namespace

TEST_CASE("help exits zero and names every subcommand") {
    RunResult r = run(binary("GWOFI_CLI") + " --help"s);
    CHECK(r.code == 0);
    for (const char* sub : {"mine", "rules", "train", "run", "report"})
        CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("a bare invocation fails") {
    RunResult r = run(binary("GWOFI_CLI"));
    CHECK(r.code == 1);
    CHECK(!r.err.empty());
}

TEST_CASE("missing inputs exit one with usage text") {
    RunResult r = run(binary("GWOFI_CLI") + " mine"s);
    CHECK(r.code == 1);
    CHECK(r.err.find("no dataset given") != std::string::npos);
    CHECK(r.err.find("Usage") != std::string::npos);

    Fixture fx("noschema");
    RunResult r2 = run(binary("GWOFI_CLI") + " mine "s + (fx.dir / "data.csv").string());
    CHECK(r2.code == 1);
    CHECK(r2.err.find("no schema given") != std::string::npos);
}

TEST_CASE("a missing data file exits two") {
    Fixture fx("missingdata");
    std::ofstream cfg(fx.dir / "broken.ini");
    cfg << "data.path = " << (fx.dir / "absent.csv").string() << "\n"
        << "data.schema = " << (fx.dir / "schema.tsv").string() << "\n";
    cfg.close();
    RunResult r = run(binary("GWOFI_CLI") + " mine --config "s + (fx.dir / "broken.ini").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("cannot open") != std::string::npos);
}

TEST_CASE("mine prints an itemset table and mirrors it to a file") {
    Fixture fx("mine");
    std::string base = binary("GWOFI_CLI") + " mine --config "s + fx.config.string();
    RunResult r = run(base);
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() > 1);
    CHECK(lines[0] == "items\tsize\tcount\tsupport");
    long long prev_size = 0;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto f = fields_of(lines[i]);
        REQUIRE(f.size() == 4);
        long long size = std::stoll(f[1]);
        CHECK(size >= prev_size);  // levelwise output: sizes never shrink
        prev_size = size;
        double support = std::stod(f[3]);
        CHECK(support >= 0.05);
        CHECK(support <= 1.0);
        CHECK(std::stoll(f[2]) >= 1);
    }

    RunResult to_file = run(base + " --out " + (fx.dir / "mined").string());
    REQUIRE(to_file.code == 0);
    CHECK(to_file.out.empty());
    CHECK(slurp(fx.dir / "mined" / "itemsets.tsv") == r.out);
}

TEST_CASE("a tighter minimum support keeps fewer itemsets") {
    Fixture fx("minsupport");
    std::string base = binary("GWOFI_CLI") + " mine --config "s + fx.config.string();
    RunResult loose = run(base + " --min-support 0.05");
    RunResult tight = run(base + " --min-support 0.4");
    REQUIRE(loose.code == 0);
    REQUIRE(tight.code == 0);
    CHECK(lines_of(tight.out).size() < lines_of(loose.out).size());
    CHECK(lines_of(tight.out).size() > 1);
}

TEST_CASE("rules sort descending by max confidence within each consequent") {
    Fixture fx("rules");
    RunResult r = run(binary("GWOFI_CLI") + " rules --config "s + fx.config.string() +
                      " --target outcome --min-support 0.05");
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() > 2);
    CHECK(fields_of(lines[0]) ==
          std::vector<std::string>{"antecedent", "consequent", "support", "count", "confidence",
                                   "max_confidence", "kulczynski", "cosine", "imbalance_ratio"});
    std::string prev_consequent;
    double prev_value = 2.0;
    bool planted_seen = false;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto f = fields_of(lines[i]);
        REQUIRE(f.size() == 9);
        double value = std::stod(f[5]);
        if (f[1] == prev_consequent) CHECK(value <= prev_value);
        prev_consequent = f[1];
        prev_value = value;
        if (f[0] == "marker=yes" && f[1] == "outcome=yes") {
            planted_seen = true;
            CHECK(f[4] == "1.0000");  // the planted implication is exact
        }
    }
    CHECK(planted_seen);
}

TEST_CASE("single mode restricts rules to one antecedent item") {
    Fixture fx("singlemode");
    RunResult r = run(binary("GWOFI_CLI") + " rules --config "s + fx.config.string() +
                      " --target outcome --min-support 0.05 --max-len 3 --mode single");
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() > 1);
    for (size_t i = 1; i < lines.size(); ++i) {
        auto f = fields_of(lines[i]);
        CHECK(f[0].find(" & ") == std::string::npos);
    }
}

TEST_CASE("run writes the four report files and train omits the rules") {
    Fixture fx("run");
    fs::path out1 = fx.dir / "out1";
    RunResult r = run(binary("GWOFI_CLI") + " run --config "s + fx.config.string() + " --out " +
                      out1.string());
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "method\tphase\tselected\taccuracy_pct\tsensitivity\tspecificity\tauroc");
    CHECK(fields_of(lines[1])[0] == "naive_bayes+gwofi");
    CHECK(fields_of(lines[1])[1] == "cv");
    CHECK(fields_of(lines[2])[1] == "holdout");
    for (const char* f : {"report.tsv", "rules_outcome.tsv", "trace.log", "model.txt"})
        CHECK(fs::exists(out1 / f));

    fs::path out2 = fx.dir / "trainout";
    RunResult t = run(binary("GWOFI_CLI") + " train --config "s + fx.config.string() + " --out " +
                      out2.string());
    REQUIRE(t.code == 0);
    CHECK(fs::exists(out2 / "report.tsv"));
    CHECK(fs::exists(out2 / "model.txt"));
    CHECK_FALSE(fs::exists(out2 / "rules_outcome.tsv"));
}

TEST_CASE("two runs with the same seed are byte-identical") {
    Fixture fx("determinism");
    fs::path out1 = fx.dir / "a";
    fs::path out2 = fx.dir / "b";
    RunResult r1 = run(binary("GWOFI_CLI") + " run --config "s + fx.config.string() + " --out " +
                       out1.string());
    RunResult r2 = run(binary("GWOFI_CLI") + " run --config "s + fx.config.string() + " --out " +
                       out2.string());
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(r1.out == r2.out);

    size_t n1 = 0;
    for (auto it = fs::directory_iterator(out1); it != fs::directory_iterator(); ++it) {
        ++n1;
        fs::path twin = out2 / it->path().filename();
        REQUIRE(fs::exists(twin));
        CHECK(slurp(it->path()) == slurp(twin));
    }
    size_t n2 = 0;
    for (auto it = fs::directory_iterator(out2); it != fs::directory_iterator(); ++it) ++n2;
    CHECK(n1 == n2);
    CHECK(n1 == 4);
}

TEST_CASE("report re-evaluates the saved model to the same holdout numbers") {
    Fixture fx("report");
    fs::path out = fx.dir / "out";
    RunResult r = run(binary("GWOFI_CLI") + " run --config "s + fx.config.string() + " --out " +
                      out.string());
    REQUIRE(r.code == 0);

    RunResult rep = run(binary("GWOFI_CLI") + " report --config "s + fx.config.string() +
                        " --out " + out.string());
    REQUIRE(rep.code == 0);
    auto rep_lines = lines_of(rep.out);
    REQUIRE(rep_lines.size() == 2);

    auto table = lines_of(slurp(out / "report.tsv"));
    REQUIRE(table.size() == 3);
    auto written = fields_of(table[2]);
    auto recomputed = fields_of(rep_lines[1]);
    REQUIRE(written.size() == 7);
    REQUIRE(recomputed.size() == 7);
    // the method tag differs (no search ran here); every metric must agree
    for (size_t i = 1; i < written.size(); ++i) CHECK(recomputed[i] == written[i]);

    // without the output directory the subcommand cannot find a model
    RunResult bad = run(binary("GWOFI_CLI") + " report --config "s + fx.config.string());
    CHECK(bad.code == 1);
}

TEST_CASE("disabling augmentation switches the method tag") {
    Fixture fx("noaugment");
    RunResult plain = run(binary("GWOFI_CLI") + " train --config "s + fx.config.string() +
                          " --no-augment");
    REQUIRE(plain.code == 0);
    CHECK(fields_of(lines_of(plain.out)[1])[0] == "naive_bayes+gwo");
}

TEST_CASE("the synthesizer writes loadable fixtures for every kind") {
    for (const char* kind : {"conjunction", "mask", "implication", "mixed"}) {
        fs::path dir = fresh_dir("synth_"s + kind);
        RunResult gen = run(binary("GWOFI_SYNTH") + " --kind "s + kind +
                            " --n 60 --extra 3 --seed 4 --out " + dir.string());
        REQUIRE(gen.code == 0);
        CHECK(gen.out.rfind("wrote ", 0) == 0);
        CHECK(fs::exists(dir / "data.csv"));
        CHECK(fs::exists(dir / "schema.tsv"));

        std::ofstream cfg(dir / "mine.ini");
        cfg << "data.path = " << (dir / "data.csv").string() << "\n"
            << "data.schema = " << (dir / "schema.tsv").string() << "\n";
        cfg.close();
        RunResult mined = run(binary("GWOFI_CLI") + " mine --config "s +
                              (dir / "mine.ini").string() + " --min-support 0.2 --max-len 2");
        CHECK(mined.code == 0);
        fs::remove_all(dir);
    }
    RunResult bad = run(binary("GWOFI_SYNTH") + " --kind bogus"s);
    CHECK(bad.code != 0);
}
