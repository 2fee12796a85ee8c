#pragma once

#include <json.hpp>

#include "perturb.hpp"

namespace centerlab {

using json = nlohmann::ordered_json;

inline json poly_to_json(const MPoly& p)
{
    json terms = json::array();
    if (p.is_zero()) return terms;
    const auto& t = p.table();
    for (auto& [e, c] : p.terms()) {
        json ex = json::object();
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) ex[t->name(i)] = e[i];
        terms.push_back({{"coeff_num", c.get_num().get_str()}, {"coeff_den", c.get_den().get_str()}, {"exponents", ex}});
    }
    return terms;
}

inline MPoly poly_from_json(const json& terms, const VarTablePtr& t)
{
    MPoly p(t);
    for (auto& term : terms) {
        Rational c(Integer(term.at("coeff_num").get<std::string>()), Integer(term.at("coeff_den").get<std::string>()));
        c.canonicalize();
        Exponents e(t->size(), 0);
        for (auto& [name, pw] : term.at("exponents").items()) e[t->require(name)] = pw.get<std::uint32_t>();
        p += MPoly::monomial(t, e, c);
    }
    return p;
}

struct ReportConstant {
    unsigned k = 0, degree = 0, ordinal = 0; // ordinal counts nonzero constants, 0 when V = 0
    RatFunc V;
};

struct ReportCondition {
    int eps_order = 0;
    MPoly poly;
    std::string kind, action;
    unsigned degree = 0;
};

struct AnalysisReport {
    VarTablePtr table;
    json input = json::object();
    std::string linear_class;
    json perturbation = json::object();
    std::vector<ReportConstant> liapunov;
    std::vector<ReportCondition> conditions;
    json structure = json::object();
    json qhomog = json::object();
    json numeric = json::object();
    std::vector<std::string> warnings;
    json timings = json::object();
};

inline json to_json(const AnalysisReport& r)
{
    json j;
    j["input"] = r.input;
    j["input"]["variables"] = r.table ? r.table->names() : std::vector<std::string>{};
    j["class"] = r.linear_class;
    j["perturbation"] = r.perturbation;
    j["liapunov"] = json::array();
    for (auto& c : r.liapunov)
        j["liapunov"].push_back({{"k", c.k},
                                 {"degree", c.degree},
                                 {"ordinal", c.ordinal},
                                 {"num_terms", poly_to_json(c.V.num())},
                                 {"den_terms", poly_to_json(c.V.den())},
                                 {"canonical", c.V.to_string()}});
    j["conditions"] = json::array();
    for (auto& c : r.conditions)
        j["conditions"].push_back({{"eps_order", c.eps_order},
                                   {"poly", c.poly.to_string()},
                                   {"terms", poly_to_json(c.poly)},
                                   {"kind", c.kind},
                                   {"degree", c.degree},
                                   {"action", c.action}});
    j["structure"] = r.structure;
    j["qhomog"] = r.qhomog;
    j["numeric"] = r.numeric;
    j["warnings"] = r.warnings;
    j["timings"] = r.timings;
    return j;
}

inline AnalysisReport report_from_json(const json& j)
{
    AnalysisReport r;
    r.input = j.at("input");
    auto names = r.input.at("variables").get<std::vector<std::string>>();
    r.input.erase("variables");
    std::vector<std::string> ps;
    for (std::size_t i = 3; i < names.size(); ++i) ps.push_back(names[i]);
    r.table = VarTable::make(ps);
    r.linear_class = j.at("class").get<std::string>();
    r.perturbation = j.at("perturbation");
    for (auto& c : j.at("liapunov"))
        r.liapunov.push_back({c.at("k").get<unsigned>(), c.at("degree").get<unsigned>(), c.at("ordinal").get<unsigned>(),
                              RatFunc::raw(poly_from_json(c.at("num_terms"), r.table),
                                           poly_from_json(c.at("den_terms"), r.table))});
    for (auto& c : j.at("conditions"))
        r.conditions.push_back({c.at("eps_order").get<int>(), poly_from_json(c.at("terms"), r.table),
                                c.at("kind").get<std::string>(), c.at("action").get<std::string>(),
                                c.at("degree").get<unsigned>()});
    r.structure = j.at("structure");
    r.qhomog = j.at("qhomog");
    r.numeric = j.at("numeric");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.timings = j.at("timings");
    return r;
}

inline std::string render_text(const json& j)
{
    std::ostringstream os;
    os << "class: " << j.value("class", "") << "\n";
    if (!j["perturbation"].empty()) os << "perturbation: " << j["perturbation"].value("kind", "") << "\n";
    for (auto& c : j["liapunov"]) {
        os << "degree " << c["degree"].get<unsigned>() << ": ";
        if (unsigned o = c["ordinal"].get<unsigned>()) os << "V" << o << " = " << c["canonical"].get<std::string>() << "\n";
        else os << "V = 0\n";
    }
    if (!j["conditions"].empty()) {
        os << "center conditions:\n";
        for (auto& c : j["conditions"])
            os << "  [eps^" << c["eps_order"].get<int>() << ", " << c["kind"].get<std::string>() << "] "
               << c["poly"].get<std::string>() << " = 0  -> " << c["action"].get<std::string>() << "\n";
    }
    for (auto* key : {"structure", "qhomog", "numeric"})
        if (!j[key].empty()) os << key << ": " << j[key].dump() << "\n";
    for (auto& w : j["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
    return os.str();
}

} // namespace centerlab
