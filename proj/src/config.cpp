#include "rtmhd/config.hpp"

#include "json_io.hpp"
#include "rtmhd/errors.hpp"
#include "rtmhd/io.hpp"

namespace rtmhd {

namespace {

const char* const kSections[] = {"profile", "params", "magnetic", "grid", "sweep", "verify", "output_dir", "xi"};

}  // namespace

void RunConfig::validate() const {
    try {
        params.validate();
        mag.validate();
        const Grid1D checked(grid.half_length, grid.n);
        const DensityProfile p = DensityProfile::build(profile, checked);
        p.require_grid(checked);
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, e.what());
    }
    if (sweep_radius && !(*sweep_radius > 0.0)) throw Error(ErrorKind::Config, "sweep.radius must be > 0");
    if (!(verify.dt_factor > 0.0) || !(verify.T_factor > 0.0) || !(verify.sharpness_T_factor > 0.0))
        throw Error(ErrorKind::Config, "verify factors must be > 0");
    if (verify.sharpness_count < 1) throw Error(ErrorKind::Config, "verify.sharpness_count must be >= 1");
    if (output_dir.empty()) throw Error(ErrorKind::Config, "output_dir must not be empty");
}

RunConfig config_from_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* s : kSections) known = known || key == s;
        if (!known) throw Error(ErrorKind::Config, "unknown config section '" + key + "'");
    }
    RunConfig c;
    try {
        if (!j.contains("profile")) throw Error(ErrorKind::Config, "missing section 'profile'");
        c.profile = profile_from_json(j.at("profile"));
        if (j.contains("params")) c.params = params_from_json(j.at("params"), c.params);
        if (j.contains("magnetic")) c.mag = magnetic_from_json(j.at("magnetic"), c.mag);
        if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"), c.grid);
        if (j.contains("sweep") && j.at("sweep").contains("radius"))
            c.sweep_radius = j.at("sweep").at("radius").get<double>();
        if (j.contains("verify")) {
            const Json& v = j.at("verify");
            c.verify.dt_factor = v.value("dt_factor", c.verify.dt_factor);
            c.verify.T_factor = v.value("T_factor", c.verify.T_factor);
            c.verify.sharpness_T_factor = v.value("sharpness_T_factor", c.verify.sharpness_T_factor);
            c.verify.sharpness_count = v.value("sharpness_count", c.verify.sharpness_count);
            if (v.contains("seeds")) c.verify.seeds = v.at("seeds").get<std::vector<std::uint64_t>>();
        }
        if (j.contains("xi")) {
            const auto v = j.at("xi").get<std::vector<double>>();
            if (v.size() != 2) throw Error(ErrorKind::Config, "xi must have two components");
            c.xi = Frequency{v[0], v[1]};
        }
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Config, std::string("config field has the wrong type: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, e.what());
    }
    return config_from_text(text);
}

std::string config_to_text(const RunConfig& c) {
    Json j;
    j["profile"] = profile_to_json(c.profile);
    j["params"] = params_to_json(c.params);
    j["magnetic"] = magnetic_to_json(c.mag);
    j["grid"] = grid_to_json(c.grid);
    j["sweep"] = Json::object();
    if (c.sweep_radius) j["sweep"]["radius"] = *c.sweep_radius;
    j["verify"] = {{"dt_factor", c.verify.dt_factor},
                   {"T_factor", c.verify.T_factor},
                   {"sharpness_T_factor", c.verify.sharpness_T_factor},
                   {"sharpness_count", c.verify.sharpness_count},
                   {"seeds", c.verify.seeds}};
    j["output_dir"] = c.output_dir;
    if (c.xi) j["xi"] = {c.xi->xi1, c.xi->xi2};
    return j.dump();
}

}  // namespace rtmhd
