#pragma once

// JSON interchange for POVMs and dilations:
// {dimension, outcomes: [{label, location, effect: [[re, im], ...] row-major}]}

#include <fstream>
#include <string>

#include <json.hpp>

#include "opint/core.hpp"
#include "opint/naimark.hpp"
#include "opint/povm.hpp"

namespace opint::io {

using json = nlohmann::json;

inline json matrix_to_json(const Matrix& m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
    return out;
}

inline Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols)
{
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols)
        throw Error(ErrorKind::DimensionMismatch, "matrix entry count does not match its shape");
    Matrix m(rows, cols);
    for (Eigen::Index k = 0; k < rows * cols; ++k) {
        const json& e = j[static_cast<std::size_t>(k)];
        if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::IoFailure, "matrix entries must be [re, im]");
        m(k / cols, k % cols) = cplx{e[0].get<double>(), e[1].get<double>()};
    }
    return m;
}

inline json to_json(const DiscretePovm& e)
{
    json out;
    out["dimension"] = e.dim();
    out["normalized"] = e.flags().normalized;
    out["projection_valued"] = e.flags().projection_valued;
    out["outcomes"] = json::array();
    for (std::size_t i = 0; i < e.size(); ++i)
        out["outcomes"].push_back({{"label", e.outcome(i).label},
                                   {"location", e.outcome(i).location},
                                   {"effect", matrix_to_json(e.effect(i).matrix())}});
    return out;
}

inline DiscretePovm povm_from_json(const json& j)
{
    try {
        const auto d = j.at("dimension").get<std::size_t>();
        std::vector<Outcome> outs;
        std::vector<Effect> effs;
        for (const json& o : j.at("outcomes")) {
            outs.push_back({o.at("label").get<std::string>(), o.at("location").get<double>()});
            effs.emplace_back(matrix_from_json(o.at("effect"), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
        }
        PovmFlags flags{j.value("normalized", false), j.value("projection_valued", false)};
        return DiscretePovm(ModelSpace(d), std::move(outs), std::move(effs), flags);
    } catch (const json::exception& ex) {
        throw Error(ErrorKind::IoFailure, std::string("malformed POVM JSON: ") + ex.what());
    }
}

inline json to_json(const NaimarkDilation& dil, std::size_t d)
{
    json out;
    out["dimension"] = d;
    out["dilation_dim"] = dil.dilation_dim;
    out["minimal"] = dil.minimal;
    out["isometry"] = matrix_to_json(dil.isometry);
    out["blocks"] = json::array();
    for (std::size_t i = 0; i < dil.block_ranks.size(); ++i)
        out["blocks"].push_back({{"offset", dil.block_offsets[i]}, {"rank", dil.block_ranks[i]}});
    return out;
}

inline DiscretePovm load_povm(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path);
    try {
        return povm_from_json(json::parse(in));
    } catch (const json::parse_error& ex) {
        throw Error(ErrorKind::IoFailure, std::string("cannot parse ") + path + ": " + ex.what());
    }
}

inline void save_povm(const DiscretePovm& e, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path);
    out << to_json(e).dump(2) << '\n';
}

} // namespace opint::io
