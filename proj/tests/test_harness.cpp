#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "clad/dm2a.hpp"
#include "clad/harness.hpp"
#include "doctest.h"

using namespace clad;
namespace fs = std::filesystem;

namespace {

std::string write_file(const std::string& name, const std::string& content) {
    const std::string path = (fs::temp_directory_path() / name).string();
    std::ofstream os(path);
    os << content;
    return path;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string tiny_config_text(const std::string& out_dir, const std::string& extra = "") {
    return std::string("# tiny smoke config\n") +
           "[experiment]\n"
           "algorithm = clad\n"
           "seeds = 1,2\n"
           "rounds = 2\n"
           "clusters = 2\n"
           "output = " + out_dir + "\n" +
           "[model]\n"
           "encoder_widths = 6,4\n"
           "dropout = 0.2\n"
           "alpha = 0.8\n"
           "[data]\n"
           "source = synthetic\n"
           "device_types = 2\n"
           "feature_dim = 8\n"
           "attack_classes = 2\n"
           "separation = 0.8\n"
           "noise = 0.04\n"
           "attack_shift = 0.35\n"
           "benign_per_device = 260\n"
           "attack_per_class_per_device = 130\n"
           "seed = 5\n"
           "[partition]\n"
           "clients_per_device = 2\n"
           "samples_per_client = 80\n"
           "benign_fraction = 0.5\n"
           "seed = 9\n"
           "[train]\n"
           "local_epochs = 2\n"
           "batch_size = 32\n"
           "learning_rate = 0.01\n"
           "weight_decay = 1e-4\n" +
           extra;
}

}  // namespace

TEST_CASE("config parsing and field-level validation errors") {
    const std::string bad = write_file("cladsim_bad.ini",
                                       "[experiment]\n"
                                       "algorithm = sorcery\n"
                                       "rounds = 0\n"
                                       "mystery = 1\n"
                                       "[model]\n"
                                       "dropout = 1.5\n"
                                       "[sweep]\n"
                                       "axis = benign_fraction\n");
    std::vector<std::string> errors;
    harness::load_config(bad, errors);
    const harness::ExperimentConfig config = harness::load_config(bad, errors);
    harness::validate_config(config, errors);
    auto has_error = [&](const std::string& needle) {
        for (const std::string& e : errors) {
            if (e.find(needle) != std::string::npos) return true;
        }
        return false;
    };
    CHECK(has_error("experiment.algorithm"));
    CHECK(has_error("experiment.rounds"));
    CHECK(has_error("experiment.mystery: unknown key"));
    CHECK(has_error("model.dropout"));
    CHECK(has_error("experiment.seeds"));
    CHECK(has_error("sweep.values"));
    fs::remove(bad);

    CHECK(harness::cli_validate(bad + ".does.not.exist") == 2);
}

TEST_CASE("a valid config passes validation and the cli agrees") {
    const std::string dir = (fs::temp_directory_path() / "cladsim_cfgtest_out").string();
    const std::string path = write_file("cladsim_ok.ini", tiny_config_text(dir));
    std::vector<std::string> errors;
    const harness::ExperimentConfig config = harness::load_config(path, errors);
    harness::validate_config(config, errors);
    CHECK(errors.empty());
    CHECK(config.algorithm == Algorithm::Clad);
    CHECK(config.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(config.hyper.max_rounds == 2);
    CHECK(config.partition.alpha_default == 0.8);
    CHECK(harness::cli_validate(path) == 0);
    fs::remove(path);
}

TEST_CASE("run_config writes rows, metadata and a summary; reruns are byte-identical") {
    const std::string dir_a = (fs::temp_directory_path() / "cladsim_run_a").string();
    const std::string dir_b = (fs::temp_directory_path() / "cladsim_run_b").string();
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    std::vector<std::string> errors;
    const harness::ExperimentConfig config_a =
        harness::load_config(write_file("cladsim_run_a.ini", tiny_config_text(dir_a)), errors);
    REQUIRE(errors.empty());
    const std::vector<std::string> rows_a = harness::run_config(config_a);
    REQUIRE(rows_a.size() == 2);  // two seeds

    for (const std::string& path : rows_a) {
        const std::string content = read_file(path);
        CHECK(content.rfind("run_id,algorithm,seed,sweep_axis,sweep_value,round,cum_bytes,"
                            "cum_flops,cls_f1,cls_acc,ad_f1,mcc,purity,stabilized\n",
                            0) == 0);
        // rounds are contiguous from zero
        std::istringstream is(content);
        std::string line;
        std::getline(is, line);
        int expected_round = 0;
        while (std::getline(is, line)) {
            std::istringstream cells(line);
            std::string cell;
            for (int i = 0; i < 6; ++i) std::getline(cells, cell, ',');
            CHECK(std::stoi(cell) == expected_round);
            ++expected_round;
        }
        CHECK(expected_round == 3);  // rounds 0..2
    }
    CHECK(fs::exists(fs::path(dir_a) / "summary_clad.csv"));
    CHECK(fs::exists(fs::path(dir_a) / "meta_clad_seed1.json"));

    const harness::ExperimentConfig config_b =
        harness::load_config(write_file("cladsim_run_b.ini", tiny_config_text(dir_b)), errors);
    const std::vector<std::string> rows_b = harness::run_config(config_b);
    for (std::size_t i = 0; i < rows_a.size(); ++i) {
        CHECK(read_file(rows_a[i]) == read_file(rows_b[i]));
    }
    CHECK(read_file((fs::path(dir_a) / "summary_clad.csv").string()) ==
          read_file((fs::path(dir_b) / "summary_clad.csv").string()));

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("save_models writes loadable checkpoints of the final cluster models") {
    const std::string dir = (fs::temp_directory_path() / "cladsim_ckpt_out").string();
    fs::remove_all(dir);
    std::vector<std::string> errors;
    harness::ExperimentConfig config = harness::load_config(
        write_file("cladsim_ckpt.ini", tiny_config_text(dir)), errors);
    REQUIRE(errors.empty());
    config.seeds = {1};
    config.save_models = true;
    harness::run_config(config);
    const std::string ckpt = (fs::path(dir) / "models_clad_seed1" / "model_0.ckpt").string();
    REQUIRE(fs::exists(ckpt));
    const Dm2aModel model = load_checkpoint(ckpt);
    CHECK(model.config.input_dim == 8);
    CHECK(model.config.encoder_widths == std::vector<std::size_t>{6, 4});
    CHECK(fs::exists(fs::path(dir) / "models_clad_seed1" / "model_1.ckpt"));
    fs::remove_all(dir);
}

TEST_CASE("sweep produces one run group per value") {
    const std::string dir = (fs::temp_directory_path() / "cladsim_sweep").string();
    fs::remove_all(dir);
    std::vector<std::string> errors;
    const harness::ExperimentConfig config = harness::load_config(
        write_file("cladsim_sweep.ini", tiny_config_text(dir,
                                                         "[sweep]\n"
                                                         "axis = benign_fraction\n"
                                                         "values = 0.3,0.6\n")),
        errors);
    REQUIRE(errors.empty());
    const std::vector<std::string> rows = harness::run_config(config);
    CHECK(rows.size() == 4);  // 2 values x 2 seeds
    std::set<std::string> names;
    for (const std::string& p : rows) names.insert(fs::path(p).filename().string());
    CHECK(names.count("rows_clad_benign_fraction=0.3_seed1.csv"));
    CHECK(names.count("rows_clad_benign_fraction=0.3_seed2.csv"));
    CHECK(names.count("rows_clad_benign_fraction=0.6_seed1.csv"));
    CHECK(names.count("rows_clad_benign_fraction=0.6_seed2.csv"));
    fs::remove_all(dir);
}

TEST_CASE("CLADSIM_OUTPUT overrides the configured output directory") {
    const std::string path = write_file("cladsim_env.ini", tiny_config_text("configured/dir"));
    setenv("CLADSIM_OUTPUT", "/tmp/cladsim_env_override", 1);
    std::vector<std::string> errors;
    const harness::ExperimentConfig config = harness::load_config(path, errors);
    unsetenv("CLADSIM_OUTPUT");
    CHECK(config.output_dir == "/tmp/cladsim_env_override");
    const harness::ExperimentConfig plain = harness::load_config(path, errors);
    CHECK(plain.output_dir == "configured/dir");
    fs::remove(path);
}

TEST_CASE("budget parsing") {
    const harness::Budget mb = harness::parse_budget("13MB");
    CHECK(mb.kind == harness::Budget::Kind::Bytes);
    CHECK(mb.amount == doctest::Approx(13.0 * 1048576.0));
    const harness::Budget gf = harness::parse_budget("20GFLOP");
    CHECK(gf.kind == harness::Budget::Kind::Flops);
    CHECK(gf.amount == doctest::Approx(2e10));
    CHECK_THROWS_AS(harness::parse_budget("12parsecs"), std::runtime_error);
}

TEST_CASE("report: curves, budget snapshots and the relative gain column") {
    const std::string dir = (fs::temp_directory_path() / "cladsim_report").string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    const char* header =
        "run_id,algorithm,seed,sweep_axis,sweep_value,round,cum_bytes,cum_flops,"
        "cls_f1,cls_acc,ad_f1,mcc,purity,stabilized\n";
    // two algorithms, one seed each, two rounds; the known table pair
    {
        std::ofstream os(fs::path(dir) / "rows_clad_u=0.8_seed1.csv");
        os << header;
        os << "clad_u=0.8,clad,1,unlabeled_fraction,0.8,0,0,0,0.100000,0.1,0.2,0.1,nan,0\n";
        os << "clad_u=0.8,clad,1,unlabeled_fraction,0.8,1,1000,100,0.656000,0.7,0.834,0.5,1.0,1\n";
    }
    {
        std::ofstream os(fs::path(dir) / "rows_fedavg_u=0.8_seed1.csv");
        os << header;
        os << "fedavg_u=0.8,fedavg,1,unlabeled_fraction,0.8,0,0,0,0.100000,0.1,0.2,0.1,nan,0\n";
        os << "fedavg_u=0.8,fedavg,1,unlabeled_fraction,0.8,1,1000,100,0.524000,0.6,0.788,0.4,nan,1\n";
    }
    const std::vector<std::string> outputs =
        harness::write_report(dir, {harness::parse_budget("26MB")});
    CHECK(fs::exists(fs::path(dir) / "curve_round_clad_u=0.8.csv"));
    CHECK(fs::exists(fs::path(dir) / "curve_bytes_fedavg_u=0.8.csv"));
    CHECK(fs::exists(fs::path(dir) / "curve_flops_clad_u=0.8.csv"));
    const std::string table = read_file((fs::path(dir) / "budget_table.csv").string());
    CHECK(table.find("at_26MB") != std::string::npos);
    CHECK(table.find("gain_26MB") != std::string::npos);
    // (0.656 - 0.524) / 0.524 = +25.2%
    CHECK(table.find("clad_u=0.8,clad,unlabeled_fraction=0.800000,cls_f1,0.656000,+25.2%") !=
          std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("report: a single algorithm gets no gain columns") {
    const std::string dir = (fs::temp_directory_path() / "cladsim_report_single").string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream os(fs::path(dir) / "rows_clad_seed1.csv");
        os << "run_id,algorithm,seed,sweep_axis,sweep_value,round,cum_bytes,cum_flops,"
              "cls_f1,cls_acc,ad_f1,mcc,purity,stabilized\n";
        os << "clad,clad,1,none,nan,0,0,0,0.5,0.5,0.5,0.5,nan,0\n";
    }
    harness::write_report(dir, {harness::parse_budget("1MB")});
    const std::string table = read_file((fs::path(dir) / "budget_table.csv").string());
    CHECK(table.find("gain_") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("synthetic devices materialize as loadable csv files") {
    const std::string dir = (fs::temp_directory_path() / "cladsim_synth_out").string();
    fs::remove_all(dir);
    std::vector<std::string> errors;
    const harness::ExperimentConfig config = harness::load_config(
        write_file("cladsim_synth.ini", tiny_config_text(dir)), errors);
    REQUIRE(errors.empty());
    const std::vector<std::string> paths = harness::write_synthetic_devices(config, dir);
    REQUIRE(paths.size() == 2);
    const data::Dataset device = data::load_csv(paths[0], "label", "benign");
    CHECK(device.feature_dim == 8);
    CHECK(device.class_count == 3);
    CHECK(device.size() == 260 + 2 * 130);
    fs::remove_all(dir);
}
