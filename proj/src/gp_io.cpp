#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpmpc/errors.hpp"
#include "gpmpc/gp_model.hpp"

namespace gpmpc {

using nlohmann::json;

void write_training_csv(const std::string& path, const TrainingData& data) {
    detail::require(data.inputs.cols() == data.targets.size(), "number of inputs and targets differ");
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index d = 0; d < data.inputs.rows(); ++d) {
        out << 'x' << (d + 1) << ',';
    }
    out << "y\n";
    for (Eigen::Index i = 0; i < data.inputs.cols(); ++i) {
        for (Eigen::Index d = 0; d < data.inputs.rows(); ++d) {
            out << data.inputs(d, i) << ',';
        }
        out << data.targets[i] << '\n';
    }
}

TrainingData read_training_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ContractError(path + ": empty file");
    }
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            header.push_back(cell);
        }
    }
    if (header.size() < 2 || header.back() != "y") {
        throw ContractError(path + ": header must be x1,...,xn,y");
    }
    const std::size_t n = header.size() - 1;
    for (std::size_t d = 0; d < n; ++d) {
        if (header[d] != "x" + std::to_string(d + 1)) {
            throw ContractError(path + ": header must be x1,...,xn,y");
        }
    }
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::size_t cols = 0;
        while (std::getline(ss, cell, ',')) {
            values.push_back(std::stod(cell));
            ++cols;
        }
        if (cols != n + 1) {
            throw ContractError(path + ": row " + std::to_string(rows + 1) + " has the wrong number of fields");
        }
        ++rows;
    }
    TrainingData data;
    data.inputs.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows));
    data.targets.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t d = 0; d < n; ++d) {
            data.inputs(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) = values[i * (n + 1) + d];
        }
        data.targets[static_cast<Eigen::Index>(i)] = values[i * (n + 1) + n];
    }
    return data;
}

std::string model_to_json(const GpModel& model) {
    const auto& x = model.inputs();
    json j;
    j["n"] = x.rows();
    j["N"] = x.cols();
    j["X"] = std::vector<double>(x.data(), x.data() + x.size());  // column-major
    j["Y"] = std::vector<double>(model.targets().data(), model.targets().data() + model.targets().size());
    const auto& l = model.hyper().lengthscales;
    j["lengthscales"] = std::vector<double>(l.data(), l.data() + l.size());
    j["signal_variance"] = model.hyper().signal_variance;
    j["noise_variance"] = model.hyper().noise_variance;
    return j.dump();
}

GpModel model_from_json(const std::string& text) {
    const json j = json::parse(text);
    const auto n = j.at("n").get<Eigen::Index>();
    const auto count = j.at("N").get<Eigen::Index>();
    const auto xs = j.at("X").get<std::vector<double>>();
    const auto ys = j.at("Y").get<std::vector<double>>();
    const auto ls = j.at("lengthscales").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(xs.size()) != n * count || static_cast<Eigen::Index>(ys.size()) != count ||
        static_cast<Eigen::Index>(ls.size()) != n) {
        throw ContractError("model JSON arrays do not match n and N");
    }
    KernelHyper hyper;
    hyper.lengthscales = Eigen::Map<const Eigen::VectorXd>(ls.data(), n);
    hyper.signal_variance = j.at("signal_variance").get<double>();
    hyper.noise_variance = j.at("noise_variance").get<double>();
    return GpModel(Eigen::Map<const Eigen::MatrixXd>(xs.data(), n, count),
                   Eigen::Map<const Eigen::VectorXd>(ys.data(), count), hyper);
}

void save_model(const std::string& path, const GpModel& model) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << model_to_json(model) << '\n';
}

GpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace gpmpc
