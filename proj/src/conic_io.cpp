#include <cmath>
#include <limits>

#include <json.hpp>

#include "gpmpc/conic.hpp"
#include "gpmpc/errors.hpp"

namespace gpmpc {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(row);
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

json bounds_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::isfinite(v[i])) {
            out.push_back(v[i]);
        } else {
            out.push_back(nullptr);
        }
    }
    return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ContractError("matrix row has the wrong length");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return m;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
    }
    return v;
}

Eigen::VectorXd bounds_from_json(const json& j, double missing) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const json& e = j.at(static_cast<std::size_t>(i));
        v[i] = e.is_null() ? missing : e.get<double>();
    }
    return v;
}

}  // namespace

std::string program_to_json(const ConicProgram& prog) {
    json j;
    j["dim"] = prog.dim();
    j["P"] = matrix_to_json(prog.P);
    j["q"] = vector_to_json(prog.q);
    j["A_eq"] = matrix_to_json(prog.A_eq);
    j["b_eq"] = vector_to_json(prog.b_eq);
    j["lb"] = bounds_to_json(prog.lb);
    j["ub"] = bounds_to_json(prog.ub);
    json cones = json::array();
    for (const auto& cone : prog.cones) {
        json c;
        c["F"] = matrix_to_json(cone.F);
        c["g"] = vector_to_json(cone.g);
        c["c"] = vector_to_json(cone.c);
        c["d0"] = cone.d0;
        cones.push_back(c);
    }
    j["cones"] = cones;
    return j.dump(2);
}

ConicProgram program_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const auto d = j.at("dim").get<Eigen::Index>();
        ConicProgram prog;
        prog.P = matrix_from_json(j.at("P"), d);
        prog.q = vector_from_json(j.at("q"));
        prog.A_eq = matrix_from_json(j.at("A_eq"), d);
        prog.b_eq = vector_from_json(j.at("b_eq"));
        const double inf = std::numeric_limits<double>::infinity();
        prog.lb = bounds_from_json(j.at("lb"), -inf);
        prog.ub = bounds_from_json(j.at("ub"), inf);
        for (const auto& c : j.at("cones")) {
            SecondOrderCone cone;
            cone.F = matrix_from_json(c.at("F"), d);
            cone.g = vector_from_json(c.at("g"));
            cone.c = vector_from_json(c.at("c"));
            cone.d0 = c.at("d0").get<double>();
            prog.cones.push_back(cone);
        }
        prog.validate();
        return prog;
    } catch (const json::exception& e) {
        throw ContractError(std::string("malformed conic program json: ") + e.what());
    }
}

}  // namespace gpmpc
