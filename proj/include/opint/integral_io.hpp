#pragma once

// JSON views of integration verdicts, domain certificates and operator blocks.

#include <string>

#include <json.hpp>

#include "opint/certificates.hpp"
#include "opint/measure.hpp"
#include "opint/operator_integrals.hpp"
#include "opint/povm_io.hpp"

namespace opint::io {

inline json to_json(const IntegrationVerdict& v)
{
    json out{{"status", std::string(to_string(v.status))},
             {"value", {v.value.real(), v.value.imag()}},
             {"evidence", json::array()}};
    for (const EvidenceRow& r : v.evidence)
        out["evidence"].push_back({r.horizon, r.partial.real(), r.partial.imag()});
    if (v.fit)
        out["fit"] = {{"slope", v.fit->slope},
                      {"intercept", v.fit->intercept},
                      {"residual", v.fit->residual},
                      {"power_law", v.fit->power_law}};
    if (v.extrapolated) out["extrapolated"] = {v.extrapolated->real(), v.extrapolated->imag()};
    if (v.tail_exponent != 0.0) out["tail_exponent"] = v.tail_exponent;
    return out;
}

inline json to_json(const DomainCertificate& c)
{
    json out{{"vector", c.vector_id},
             {"kind", std::string(to_string(c.kind))},
             {"verdict", std::string(to_string(c.verdict))},
             {"rule", c.rule},
             {"evidence", json::array()}};
    for (const IntegrationVerdict& v : c.evidence) out["evidence"].push_back(to_json(v));
    return out;
}

inline json to_json(const OperatorIntegral& op)
{
    json out{{"kind", std::string(to_string(op.kind))},
             {"rows", op.matrix.rows()},
             {"cols", op.matrix.cols()},
             {"symmetric", op.symmetric},
             {"certified", op.certified},
             {"matrix", matrix_to_json(op.matrix)},
             {"domain_basis", matrix_to_json(op.domain_basis)},
             {"certificates", json::array()}};
    for (const DomainCertificate& c : op.certificates) out["certificates"].push_back(to_json(c));
    return out;
}

} // namespace opint::io
