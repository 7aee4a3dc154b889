#include "dyadic/signal_io.hpp"

#include "dyadic/errors.hpp"

#include <fstream>
#include <sstream>

namespace dyadic {

nlohmann::json signal_to_json(const GridFunction& f) {
    nlohmann::json j;
    j["mesh_exponent"] = f.mesh_exponent();
    j["origin"] = f.box().origin;
    j["extent"] = f.box().extent;
    j["value_dim"] = f.value_dim();
    j["values"] = std::vector<double>(f.values().begin(), f.values().end());
    return j;
}

GridFunction signal_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw DataError("signal: expected a JSON object");
        auto m = j.at("mesh_exponent").get<int>();
        auto origin = j.at("origin").get<std::vector<std::int64_t>>();
        auto extent = j.at("extent").get<std::vector<std::int64_t>>();
        auto value_dim = j.contains("value_dim") ? j.at("value_dim").get<std::size_t>() : std::size_t{1};
        auto values = j.at("values").get<std::vector<double>>();
        return make_grid_function(std::move(values), std::move(extent), m, std::move(origin), value_dim);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("signal: ") + e.what());
    }
}

GridFunction parse_signal(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::ostringstream os;
        os << "signal parse error at byte " << e.byte << ": " << e.what();
        throw DataError(os.str());
    }
    return signal_from_json(j);
}

GridFunction read_signal_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open signal file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_signal(buf.str());
}

void write_signal_file(const GridFunction& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write signal file '" + path + "'");
    out << signal_to_json(f).dump() << '\n';
}

} // namespace dyadic
