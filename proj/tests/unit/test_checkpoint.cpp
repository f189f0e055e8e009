#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "akgp/checkpoint.hpp"
#include "oracles.hpp"

using namespace akgp;
namespace fs = std::filesystem;

TEST_CASE("checkpoint round trip restores predictions exactly") {
    std::mt19937_64 rng(50);
    const fs::path dir = fs::temp_directory_path() / "akgp_ckpt_test";
    fs::create_directories(dir);
    for (const char* name : {"rbf", "ak", "ak-mask", "ak-nnx2", "gibbs", "dkl"}) {
        CAPTURE(name);
        kernels::KernelOptions o;
        o.grid = {0.02, 0.7, 5};
        o.hidden_dim = 6;
        gpr::GPRModel m(kernels::make_kernel(name, o, rng), 0.2);
        const Matrix X = oracle::uniform_matrix(9, 2, -1, 1, rng);
        m.add_data(X, X.col(0) - X.col(1));
        Normalizer norm;
        norm.input_center = Vector::Constant(2, 5.0);
        norm.input_half_range = Vector::Constant(2, 2.5);
        norm.target_mean = 1.25;
        norm.target_std = 0.3;

        const fs::path path = dir / (std::string(name) + ".json");
        gpr::save_checkpoint(path, m, norm);
        const gpr::Checkpoint c = gpr::load_checkpoint(path);
        CHECK(c.model.kernel().name() == std::string(name));
        CHECK(c.model.params() == m.params());
        CHECK(c.model.X_train() == m.X_train());
        const Matrix Xs = oracle::uniform_matrix(4, 2, -1, 1, rng);
        CHECK(c.model.predict(Xs).mean == m.predict(Xs).mean);
        REQUIRE(c.normalizer.has_value());
        CHECK(c.normalizer->target_std == 0.3);
    }
    fs::remove_all(dir);
}

TEST_CASE("malformed checkpoints are rejected") {
    const fs::path path = fs::temp_directory_path() / "akgp_bad_ckpt.json";
    {
        std::ofstream out(path);
        out << R"({"format": "something-else", "version": 1})";
    }
    CHECK_THROWS(gpr::load_checkpoint(path));
    {
        std::ofstream out(path);
        out << "not json";
    }
    CHECK_THROWS(gpr::load_checkpoint(path));
    fs::remove(path);
    CHECK_THROWS(gpr::load_checkpoint(path));
}
