#include "bfmix/potential_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bfmix/error.hpp"

namespace bfmix::io {

using nlohmann::json;

namespace {

json parse_object(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("<document>", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("<document>", "expected an object");
    return j;
}

void expect_type(const json& j, const char* type) {
    if (!j.contains("type")) throw ValidationError("type", "missing");
    if (!j["type"].is_string() || j["type"].get<std::string>() != type)
        throw ValidationError("type", std::string("expected \"") + type + "\"");
}

std::vector<double> number_array(const json& j, const char* field) {
    if (!j.contains(field)) throw ValidationError(field, "missing");
    if (!j[field].is_array()) throw ValidationError(field, "expected an array");
    std::vector<double> out;
    for (const auto& x : j[field]) {
        if (!x.is_number()) throw ValidationError(field, "expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

FourierPotential parse_fourier(const std::string& text) {
    const json j = parse_object(text);
    expect_type(j, "fourier");
    if (!j.contains("cutoff") || !j["cutoff"].is_number_integer())
        throw ValidationError("cutoff", "missing or not an integer");
    const int cutoff = j["cutoff"].get<int>();
    if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw ValidationError("coeffs", "missing or not an array");
    std::vector<FourierPotential::Entry> entries;
    for (const auto& row : j["coeffs"]) {
        if (!row.is_array() || row.size() != 4) throw ValidationError("coeffs", "rows must be [kx,ky,kz,value]");
        for (int i = 0; i < 3; ++i)
            if (!row[i].is_number_integer()) throw ValidationError("coeffs", "mode components must be integers");
        if (!row[3].is_number()) throw ValidationError("coeffs", "value must be a number");
        entries.emplace_back(Vec3i{row[0].get<int>(), row[1].get<int>(), row[2].get<int>()}, row[3].get<double>());
    }
    std::string label;
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw ValidationError("label", "expected a string");
        label = j["label"].get<std::string>();
    }
    return FourierPotential::from_coefficients(entries, cutoff, label);
}

RadialPotential parse_radial(const std::string& text) {
    const json j = parse_object(text);
    expect_type(j, "radial");
    const std::string grid = j.value("grid", std::string("uniform"));
    auto samples = number_array(j, "samples");
    if (grid == "uniform") {
        if (!j.contains("r_max") || !j["r_max"].is_number()) throw ValidationError("r_max", "missing or not a number");
        return RadialPotential::uniform(j["r_max"].get<double>(), std::move(samples));
    }
    if (grid == "nodes") return RadialPotential(number_array(j, "r"), std::move(samples));
    throw ValidationError("grid", "expected \"uniform\" or \"nodes\"");
}

std::string fourier_to_json(const FourierPotential& V) {
    json j;
    j["type"] = "fourier";
    j["cutoff"] = V.cutoff();
    if (!V.label().empty()) j["label"] = V.label();
    json rows = json::array();
    for (const auto& [k, v] : V.entries()) rows.push_back(json::array({k.x, k.y, k.z, v}));
    j["coeffs"] = rows;
    return j.dump(1);
}

std::string radial_to_json(const RadialPotential& v) {
    json j;
    j["type"] = "radial";
    j["grid"] = "nodes";
    j["r"] = v.r();
    j["samples"] = v.values();
    return j.dump(1);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path.string(), "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FourierPotential load_fourier(const std::filesystem::path& path) { return parse_fourier(read_text(path)); }
RadialPotential load_radial(const std::filesystem::path& path) { return parse_radial(read_text(path)); }

}  // namespace bfmix::io
