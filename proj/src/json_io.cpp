#include "json_io.hpp"

#include "rtmhd/errors.hpp"

namespace rtmhd {

namespace {

double number(const Json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorKind::Config, std::string("missing key '") + key + "'");
    if (!j.at(key).is_number())
        throw Error(ErrorKind::Config, std::string("key '") + key + "' must be a number");
    return j.at(key).get<double>();
}

double number_or(const Json& j, const char* key, double fallback) {
    return j.contains(key) ? number(j, key) : fallback;
}

}  // namespace

Json profile_to_json(const ProfileSpec& spec) {
    Json bumps = Json::array();
    for (const auto& b : spec.bumps)
        bumps.push_back({{"amp", b.amplitude}, {"center", b.center}, {"half_width", b.half_width}});
    return {{"base_density", spec.base_density}, {"bumps", bumps}};
}

ProfileSpec profile_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Config, "profile must be an object");
    ProfileSpec s;
    s.base_density = number(j, "base_density");
    if (!j.contains("bumps") || !j.at("bumps").is_array())
        throw Error(ErrorKind::Config, "profile.bumps must be an array");
    for (const auto& b : j.at("bumps"))
        s.bumps.push_back({number(b, "amp"), number(b, "center"), number(b, "half_width")});
    return s;
}

Json params_to_json(const PhysicalParams& p) { return {{"mu", p.mu}, {"g", p.g}, {"L", p.L}}; }

PhysicalParams params_from_json(const Json& j, const PhysicalParams& d) {
    return {number_or(j, "mu", d.mu), number_or(j, "g", d.g), number_or(j, "L", d.L)};
}

Json magnetic_to_json(const MagneticConfig& m) {
    return {{"orientation", to_string(m.orientation)}, {"M", m.magnitude}};
}

MagneticConfig magnetic_from_json(const Json& j, const MagneticConfig& d) {
    MagneticConfig m = d;
    if (j.contains("orientation")) {
        if (!j.at("orientation").is_string())
            throw Error(ErrorKind::Config, "magnetic.orientation must be a string");
        try {
            m.orientation = orientation_from_string(j.at("orientation").get<std::string>().c_str());
        } catch (const Error& e) {
            throw Error(ErrorKind::Config, e.what());
        }
    }
    m.magnitude = number_or(j, "M", d.magnitude);
    return m;
}

Json grid_to_json(const Grid1D& g) { return {{"half_length", g.half_length}, {"n", g.n}}; }

Grid1D grid_from_json(const Json& j, const Grid1D& d) {
    Grid1D g = d;
    g.half_length = number_or(j, "half_length", d.half_length);
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer()) throw Error(ErrorKind::Config, "grid.n must be an integer");
        g.n = j.at("n").get<int>();
    }
    return g;
}

}  // namespace rtmhd
