// writes synthetic fixture datasets (CSV plus schema) for demos and benchmarks
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gwofi/dataset.hpp"
#include "gwofi/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"synthetic dataset generator"};
    std::string kind = "conjunction";
    std::string out = ".";
    int n = 500;
    int extra = 28;
    double flip = 0.05;
    std::uint64_t seed = 1;
    app.add_option("--kind", kind, "conjunction, mask, implication or mixed")
        ->check(CLI::IsMember({"conjunction", "mask", "implication", "mixed"}));
    app.add_option("--n", n, "row count");
    app.add_option("--extra", extra, "noise feature count");
    app.add_option("--flip", flip, "label flip probability");
    app.add_option("--seed", seed, "seed");
    app.add_option("--out", out, "output directory");
    CLI11_PARSE(app, argc, argv);

    try {
        gwofi::Dataset ds;
        if (kind == "conjunction")
            ds = gwofi::synth::conjunction_dataset(n, 2 + extra, flip, 0.5, seed);
        else if (kind == "mask")
            ds = gwofi::synth::planted_mask_dataset(n, extra, flip, seed);
        else if (kind == "implication")
            ds = gwofi::synth::implication_dataset(n, extra, 0.3, seed);
        else
            ds = gwofi::synth::random_mixed(n, seed);

        std::filesystem::create_directories(out);
        gwofi::save_table(ds, out + "/data.csv");
        gwofi::save_schema(ds.schema, out + "/schema.tsv");
        std::cout << "wrote " << out << "/data.csv (" << ds.n_rows() << " rows, "
                  << ds.schema.size() << " columns)\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
