#include "daniell/serialize.hpp"

namespace daniell {

using nlohmann::json;

namespace {

BigInt integer_from(const json& j, const char* key)
{
    if (!j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
    const auto& v = j.at(key);
    try {
        if (v.is_string()) return BigInt(v.get<std::string>());
        if (v.is_number_integer()) return BigInt(v.get<long long>());
    } catch (const std::exception&) {
    }
    throw DomainError(std::string("field '") + key + "' is not an integer");
}

bool flag_from(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_boolean())
        throw DomainError(std::string("missing boolean field '") + key + "'");
    return j.at(key).get<bool>();
}

Rational coeff_from(const json& j)
{
    const BigInt den = integer_from(j, "coeff_den");
    if (den == 0) throw DomainError("zero coefficient denominator");
    return Rational(integer_from(j, "coeff_num"), den);
}

}  // namespace

json rational_to_json(const Rational& q)
{
    return {{"num", numerator(q).str()}, {"den", denominator(q).str()}};
}

Rational rational_from_json(const json& j)
{
    if (!j.is_object()) throw DomainError("rational must be an object {num, den}");
    const BigInt den = integer_from(j, "den");
    if (den == 0) throw DomainError("zero denominator");
    return Rational(integer_from(j, "num"), den);
}

json interval_to_json(const Interval& iv)
{
    return {{"lo", rational_to_json(iv.lo())},
            {"hi", rational_to_json(iv.hi())},
            {"lo_closed", iv.lo_closed()},
            {"hi_closed", iv.hi_closed()}};
}

Interval interval_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) throw DomainError("interval needs lo and hi");
    return Interval(rational_from_json(j.at("lo")), rational_from_json(j.at("hi")), flag_from(j, "lo_closed"),
                    flag_from(j, "hi_closed"));
}

json to_json(const StepFunction1D& f)
{
    json out = json::array();
    for (const auto& p : f.parts()) {
        json e = interval_to_json(p.interval);
        e["coeff_num"] = numerator(p.coeff).str();
        e["coeff_den"] = denominator(p.coeff).str();
        out.push_back(std::move(e));
    }
    return out;
}

StepFunction1D step1d_from_json(const json& j)
{
    if (!j.is_array()) throw DomainError("step function must be a JSON array");
    std::vector<Part> parts;
    for (const auto& e : j) parts.push_back({interval_from_json(e), coeff_from(e)});
    return StepFunction1D::canonicalize(parts);
}

json to_json(const Rectangle& r)
{
    json axes = json::array();
    for (const auto& iv : r.axes()) axes.push_back(interval_to_json(iv));
    return {{"axes", axes}};
}

Rectangle rectangle_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("axes") || !j.at("axes").is_array())
        throw DomainError("rectangle needs an axes array");
    std::vector<Interval> axes;
    for (const auto& a : j.at("axes")) axes.push_back(interval_from_json(a));
    return Rectangle(std::move(axes));
}

json to_json(const StepFunctionND& f)
{
    json parts = json::array();
    for (const auto& p : f.parts()) {
        json e = to_json(p.rect);
        e["coeff_num"] = numerator(p.coeff).str();
        e["coeff_den"] = denominator(p.coeff).str();
        parts.push_back(std::move(e));
    }
    return {{"dim", f.dim()}, {"parts", parts}};
}

StepFunctionND stepnd_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("dim") || !j.contains("parts")) throw DomainError("step function needs dim and parts");
    const auto dim = j.at("dim").get<std::size_t>();
    std::vector<PartND> parts;
    for (const auto& e : j.at("parts")) {
        Rectangle r = rectangle_from_json(e);
        if (r.dim() != dim) throw DomainError("part dimension differs from dim");
        parts.push_back({std::move(r), coeff_from(e)});
    }
    return StepFunctionND::canonicalize(dim, parts);
}

json to_json(const Enclosure& e)
{
    return {{"value", e.value()}, {"lower", e.lower},      {"upper", e.upper},
            {"width", e.width()}, {"evals", e.evaluations}, {"mesh", e.mesh}};
}

}  // namespace daniell
