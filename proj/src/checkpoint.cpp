#include "akgp/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace akgp::gpr {

using nlohmann::json;

namespace {

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vector_from(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json kernel_structure(const kernels::Kernel& k) {
    json s;
    s["name"] = k.name();
    s["input_dim"] = k.input_dim();
    if (const auto* ak = dynamic_cast<const kernels::AttentiveKernel*>(&k)) {
        s["hidden_dim"] = ak->net().hidden_dim();
        s["l_min"] = ak->grid().l_min;
        s["l_max"] = ak->grid().l_max;
        s["num_lengthscales"] = ak->grid().count;
    } else if (const auto* gibbs = dynamic_cast<const kernels::GibbsKernel*>(&k)) {
        s["hidden_dim"] = gibbs->net().hidden_dim();
        s["l_min"] = gibbs->l_min();
        s["l_max"] = gibbs->l_max();
    } else if (const auto* dkl = dynamic_cast<const kernels::DeepKernel*>(&k)) {
        s["hidden_dim"] = dkl->net().hidden_dim();
        s["feature_dim"] = dkl->net().out_dim();
    }
    return s;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const GPRModel& model,
                     const std::optional<Normalizer>& normalizer) {
    json doc;
    doc["format"] = "akgp-checkpoint";
    doc["version"] = kCheckpointVersion;
    doc["kernel"] = kernel_structure(model.kernel());
    doc["params"] = to_json(model.params());
    if (normalizer) {
        doc["normalizer"] = {{"input_center", to_json(normalizer->input_center)},
                             {"input_half_range", to_json(normalizer->input_half_range)},
                             {"target_mean", normalizer->target_mean},
                             {"target_std", normalizer->target_std}};
    }
    json rows = json::array();
    for (Eigen::Index i = 0; i < model.X_train().rows(); ++i) rows.push_back(to_json(model.X_train().row(i).transpose()));
    doc["X_train"] = std::move(rows);
    doc["y_train"] = to_json(model.y_train());

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
    out << doc.dump(1) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read checkpoint " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("checkpoint " + path.string() + ": " + e.what());
    }
    if (doc.value("format", "") != "akgp-checkpoint") throw ParseError("not an akgp checkpoint: " + path.string());
    if (doc.value("version", 0) != kCheckpointVersion) {
        throw ParseError("unsupported checkpoint version " + std::to_string(doc.value("version", 0)));
    }
    try {
        const json& ks = doc.at("kernel");
        kernels::KernelOptions opts;
        opts.input_dim = ks.at("input_dim").get<Eigen::Index>();
        opts.hidden_dim = ks.value("hidden_dim", opts.hidden_dim);
        opts.grid.l_min = ks.value("l_min", opts.grid.l_min);
        opts.grid.l_max = ks.value("l_max", opts.grid.l_max);
        opts.grid.count = ks.value("num_lengthscales", opts.grid.count);
        opts.dkl_feature_dim = ks.value("feature_dim", 0);
        std::mt19937_64 rng(0);
        auto kernel = kernels::make_kernel(ks.at("name").get<std::string>(), opts, rng);

        GPRModel model(std::move(kernel));
        const Vector y = vector_from(doc.at("y_train"));
        Matrix X(y.size(), opts.input_dim);
        const json& rows = doc.at("X_train");
        if (static_cast<Eigen::Index>(rows.size()) != y.size()) throw ParseError("checkpoint: X/y row mismatch");
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const Vector row = vector_from(rows.at(static_cast<std::size_t>(i)));
            if (row.size() != opts.input_dim) throw ParseError("checkpoint: bad X_train row width");
            X.row(i) = row.transpose();
        }
        model.set_params(vector_from(doc.at("params")));
        model.add_data(X, y);

        Checkpoint cp{std::move(model), std::nullopt};
        if (doc.contains("normalizer")) {
            const json& nj = doc.at("normalizer");
            Normalizer n;
            n.input_center = vector_from(nj.at("input_center"));
            n.input_half_range = vector_from(nj.at("input_half_range"));
            n.target_mean = nj.at("target_mean").get<double>();
            n.target_std = nj.at("target_std").get<double>();
            n.validate();
            cp.normalizer = n;
        }
        return cp;
    } catch (const json::exception& e) {
        throw ParseError("checkpoint " + path.string() + ": " + e.what());
    }
}

}  // namespace akgp::gpr
