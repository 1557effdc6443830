#include "crossguard/scenario.hpp"

#include "crossguard/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace crossguard {

namespace {

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& where)
{
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ScenarioError(where + ": cannot parse number '" + text + "'");
    return value;
}

// Shortest text that reads back to the same double.
std::string fmt(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

} // namespace

void ScenarioConfig::validate() const
{
    if (!(tau > 0.0))
        throw ScenarioError("tau must be positive");
    if (vehicles.empty())
        throw ScenarioError("scenario has no vehicles");
    if (std::none_of(vehicles.begin(), vehicles.end(),
                     [](const VehicleSpec& v) { return v.params.controlled; }))
        throw ScenarioError("scenario needs at least one controlled vehicle");
    std::set<int> ids;
    for (const auto& v : vehicles) {
        if (!ids.insert(v.id).second)
            throw ScenarioError("duplicate vehicle id " + std::to_string(v.id));
        try {
            v.params.validate();
            v.noise.validate();
        } catch (const std::invalid_argument& e) {
            throw ScenarioError("vehicle " + std::to_string(v.id) + ": " + e.what());
        }
        if (v.initial.v < v.params.v_min || v.initial.v > v.params.v_max)
            throw ScenarioError("vehicle " + std::to_string(v.id) + ": initial speed outside bounds");
        if (v.params.controlled &&
            (v.desired < v.params.input_min || v.desired > v.params.input_max))
            throw ScenarioError("vehicle " + std::to_string(v.id) + ": desired input outside bounds");
    }
}

std::vector<VehicleParams> ScenarioConfig::fleet() const
{
    std::vector<VehicleParams> out;
    for (const auto& v : vehicles)
        out.push_back(v.params);
    return out;
}

ScenarioConfig parse_scenario(std::istream& in, const std::string& origin)
{
    ScenarioConfig cfg;
    double drag = VehicleParams{}.drag_b;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;
        if (line.rfind("vehicle,", 0) == 0) {
            const auto f = split(line, ',');
            if (f.size() != 20)
                throw ScenarioError(where + ": vehicle line needs 20 fields, got " +
                                    std::to_string(f.size()));
            auto num = [&](std::size_t i) { return parse_number<double>(f[i], where); };
            VehicleSpec v;
            v.id = parse_number<int>(f[1], where);
            if (f[2] != "0" && f[2] != "1")
                throw ScenarioError(where + ": controlled flag must be 0 or 1");
            v.params.controlled = f[2] == "1";
            v.initial = {num(3), num(4)};
            v.params.alpha = num(5);
            v.params.beta = num(6);
            v.params.v_min = num(7);
            v.params.v_max = num(8);
            v.params.input_min = num(9);
            v.params.input_max = num(10);
            v.params.d_y_min = num(11);
            v.params.d_y_max = num(12);
            v.params.d_v_min = num(13);
            v.params.d_v_max = num(14);
            v.noise = {num(15), num(16), num(17), num(18)};
            v.params.drag_b = drag;
            if (f[19] != "-")
                v.desired = num(19);
            else if (v.params.controlled)
                v.desired = 1.0;
            cfg.vehicles.push_back(v);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(where + ": unrecognized line '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "tau")
            cfg.tau = parse_number<double>(value, where);
        else if (key == "steps")
            cfg.steps = parse_number<std::size_t>(value, where);
        else if (key == "seed")
            cfg.seed = parse_number<std::uint64_t>(value, where);
        else if (key == "drag")
            drag = parse_number<double>(value, where);
        else
            throw ScenarioError(where + ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError("cannot open scenario file " + path.string());
    return parse_scenario(in, path.string());
}

std::string format_scenario(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    os << "tau=" << fmt(cfg.tau) << "\nsteps=" << cfg.steps << "\nseed=" << cfg.seed << "\n";
    double drag = VehicleParams{}.drag_b;
    bool drag_written = false;
    for (const auto& v : cfg.vehicles) {
        if (!drag_written || v.params.drag_b != drag) {
            drag = v.params.drag_b;
            os << "drag=" << fmt(drag) << "\n";
            drag_written = true;
        }
        const auto& p = v.params;
        os << "vehicle," << v.id << "," << (p.controlled ? 1 : 0) << "," << fmt(v.initial.y) << ","
           << fmt(v.initial.v) << "," << fmt(p.alpha) << "," << fmt(p.beta) << "," << fmt(p.v_min)
           << "," << fmt(p.v_max) << "," << fmt(p.input_min) << "," << fmt(p.input_max) << ","
           << fmt(p.d_y_min) << "," << fmt(p.d_y_max) << "," << fmt(p.d_v_min) << ","
           << fmt(p.d_v_max) << "," << fmt(v.noise.delta_y_min) << "," << fmt(v.noise.delta_y_max)
           << "," << fmt(v.noise.delta_v_min) << "," << fmt(v.noise.delta_v_max) << ","
           << (p.controlled ? fmt(v.desired) : std::string("-")) << "\n";
    }
    return os.str();
}

} // namespace crossguard
