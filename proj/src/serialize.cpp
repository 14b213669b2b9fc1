#include "bps/serialize.hpp"

#include <json.hpp>

namespace bps {

using nlohmann::ordered_json;

namespace {
std::string coef_str(const Coef& c) {
    if (denominator(c) == 1) return numerator(c).str();
    return numerator(c).str() + "/" + denominator(c).str();
}
Coef coef_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Coef(Int(s));
    return Coef(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}
Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}
}  // namespace

const char* side_name(Side s) {
    switch (s) {
        case Side::minus: return "minus";
        case Side::plus: return "plus";
        default: return "exact";
    }
}

Side side_from_name(const std::string& name) {
    if (name == "minus" || name == "-") return Side::minus;
    if (name == "plus" || name == "+") return Side::plus;
    if (name == "exact" || name == "0" || name.empty()) return Side::exact;
    throw DomainError("unknown side: " + name);
}

ordered_json to_json(const WLaurent& p) {
    ordered_json arr = ordered_json::array();
    for (const auto& [k, c] : p.terms()) arr.push_back({k, coef_str(c)});
    return arr;
}

ordered_json to_json(const QSeries& s) {
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : s.terms())
        terms.push_back({{"q", e.str()}, {"w", to_json(c)}});
    return ordered_json{{"type", "qseries"}, {"qmax", s.qmax().str()}, {"terms", terms}};
}

ordered_json to_json(const PoleSeries& s) {
    return ordered_json{
        {"type", "poleseries"}, {"den", s.den}, {"body", to_json(s.body)}};
}

ordered_json to_json(const PoleCoeff& c) {
    return ordered_json{{"den", c.den}, {"num", to_json(c.num)}};
}

ordered_json to_json(const Polarization& j) {
    return ordered_json{{"m", j.m.str()}, {"n", j.n.str()}, {"side", side_name(j.side)}};
}

ordered_json to_json(const InvariantRecord& r) {
    ordered_json betti = ordered_json::array();
    for (const auto& b : r.poincare) betti.push_back(b.str());
    return ordered_json{{"ell", r.ell},
                        {"r", r.gamma.r},
                        {"c1", {r.gamma.c1.cC, -r.gamma.c1.cF}},
                        {"c2", r.gamma.c2.str()},
                        {"J", to_json(r.j)},
                        {"dim", r.dim},
                        {"betti", betti},
                        {"euler", r.euler.str()},
                        {"warnings", r.warnings}};
}

ordered_json to_json(const Wall& w) {
    ordered_json decs = ordered_json::array();
    for (const auto& d : w.decompositions) {
        ordered_json parts = ordered_json::array();
        for (const auto& c : d)
            parts.push_back({{"r", c.gamma.r},
                             {"c1", {c.gamma.c1.cC, c.gamma.c1.cF}},
                             {"c2", c.gamma.c2.str()},
                             {"mult", c.multiplicity}});
        decs.push_back(parts);
    }
    return ordered_json{{"m", w.m}, {"n", w.n}, {"decompositions", decs}};
}

QSeries qseries_from_json(const ordered_json& j) {
    QSeries s(rat_parse(j.at("qmax").get<std::string>()));
    for (const auto& t : j.at("terms")) {
        WLaurent c;
        for (const auto& kc : t.at("w"))
            c.add_term(kc.at(0).get<long long>(), coef_parse(kc.at(1).get<std::string>()));
        s.add_term(rat_parse(t.at("q").get<std::string>()), c);
    }
    return s;
}

PoleSeries poleseries_from_json(const ordered_json& j) {
    return PoleSeries(j.at("den").get<std::vector<int>>(), qseries_from_json(j.at("body")));
}

std::string canonical_dump(const ordered_json& j) { return j.dump(); }

std::string content_hash(const std::string& payload) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

}  // namespace bps
