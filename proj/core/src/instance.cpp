#include "ringfuse/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ringfuse/rng.hpp"

namespace ringfuse {
namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Splits "KEY : value" / "KEY: value" / "KEY value" header lines.
bool split_header(const std::string& line, std::string& key, std::string& value) {
    auto colon = line.find(':');
    if (colon != std::string::npos) {
        key = trim(line.substr(0, colon));
        value = trim(line.substr(colon + 1));
        return !key.empty();
    }
    std::istringstream ss(line);
    if (!(ss >> key)) return false;
    std::getline(ss, value);
    value = trim(value);
    return true;
}

bool parse_double(const std::string& tok, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(tok, &pos);
        return pos == tok.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace

double Instance::bounding_box_diagonal() const {
    if (cities.empty()) return 0.0;
    double xmin = cities[0].x, xmax = cities[0].x;
    double ymin = cities[0].y, ymax = cities[0].y;
    for (const auto& c : cities) {
        xmin = std::min(xmin, c.x);
        xmax = std::max(xmax, c.x);
        ymin = std::min(ymin, c.y);
        ymax = std::max(ymax, c.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

Point2 Instance::centroid() const {
    Point2 c{};
    for (const auto& city : cities) c += city.pos();
    return (1.0 / static_cast<double>(cities.size())) * c;
}

Instance parse_instance(std::istream& in) {
    Instance inst;
    std::string line;
    int lineno = 0;
    long dimension = -1;
    bool saw_type = false, saw_ewt = false, in_coords = false;

    std::vector<bool> seen;
    long coords_read = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "EOF") break;

        if (!in_coords) {
            if (t == "NODE_COORD_SECTION") {
                if (dimension < 0) throw ParseError(lineno, "NODE_COORD_SECTION before DIMENSION");
                if (!saw_type) throw ParseError(lineno, "missing TYPE header");
                if (!saw_ewt) throw ParseError(lineno, "missing EDGE_WEIGHT_TYPE header");
                in_coords = true;
                seen.assign(static_cast<size_t>(dimension), false);
                inst.cities.resize(static_cast<size_t>(dimension));
                continue;
            }
            std::string key, value;
            if (!split_header(t, key, value)) throw ParseError(lineno, "malformed header line");
            if (key == "NAME") {
                inst.name = value;
            } else if (key == "TYPE") {
                if (value != "TSP") throw ParseError(lineno, "unsupported TYPE '" + value + "' (expected TSP)");
                saw_type = true;
            } else if (key == "DIMENSION") {
                try {
                    dimension = std::stol(value);
                } catch (const std::exception&) {
                    throw ParseError(lineno, "non-numeric DIMENSION '" + value + "'");
                }
                if (dimension < 1) throw ParseError(lineno, "DIMENSION must be >= 1");
            } else if (key == "EDGE_WEIGHT_TYPE") {
                if (value != "EUC_2D")
                    throw ParseError(lineno, "unsupported EDGE_WEIGHT_TYPE '" + value + "' (only EUC_2D)");
                saw_ewt = true;
            } else if (key == "COMMENT") {
                // ignored
            } else {
                throw ParseError(lineno, "unknown header key '" + key + "'");
            }
        } else {
            std::istringstream ss(t);
            std::string idx_tok, x_tok, y_tok, extra;
            if (!(ss >> idx_tok >> x_tok >> y_tok))
                throw ParseError(lineno, "expected 'index x y'");
            if (ss >> extra) throw ParseError(lineno, "trailing tokens after coordinates");
            long idx;
            try {
                idx = std::stol(idx_tok);
            } catch (const std::exception&) {
                throw ParseError(lineno, "non-numeric node index '" + idx_tok + "'");
            }
            if (idx < 1 || idx > dimension)
                throw ParseError(lineno, "node index " + std::to_string(idx) + " out of range 1.." +
                                             std::to_string(dimension));
            if (seen[static_cast<size_t>(idx - 1)])
                throw ParseError(lineno, "duplicate node index " + std::to_string(idx));
            double x, y;
            if (!parse_double(x_tok, x) || !parse_double(y_tok, y))
                throw ParseError(lineno, "non-numeric coordinate");
            seen[static_cast<size_t>(idx - 1)] = true;
            inst.cities[static_cast<size_t>(idx - 1)] = City{static_cast<int>(idx - 1), x, y};
            ++coords_read;
        }
    }

    if (!in_coords) throw ParseError(lineno, "missing NODE_COORD_SECTION");
    if (coords_read != dimension)
        throw ParseError(lineno, "expected " + std::to_string(dimension) + " coordinate lines, got " +
                                     std::to_string(coords_read));
    for (size_t i = 0; i < inst.cities.size(); ++i)
        for (size_t j = i + 1; j < inst.cities.size(); ++j)
            if (inst.cities[i].x == inst.cities[j].x && inst.cities[i].y == inst.cities[j].y)
                throw ParseError(lineno, "duplicate coordinates for cities " + std::to_string(i + 1) +
                                             " and " + std::to_string(j + 1));
    return inst;
}

Instance parse_instance_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open instance file: " + path);
    return parse_instance(f);
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out.precision(17);
    out << "NAME : " << inst.name << "\n";
    out << "TYPE : TSP\n";
    out << "DIMENSION : " << inst.size() << "\n";
    out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
    out << "NODE_COORD_SECTION\n";
    for (const auto& c : inst.cities) out << (c.id + 1) << " " << c.x << " " << c.y << "\n";
    out << "EOF\n";
    return out.str();
}

Instance generate_instance(int n, std::uint64_t seed, double box) {
    if (n < 1) throw std::invalid_argument("generate_instance: n must be >= 1");
    if (!(box > 0.0)) throw std::invalid_argument("generate_instance: box must be > 0");
    Rng rng(seed);
    Instance inst;
    inst.name = "uniform-n" + std::to_string(n) + "-s" + std::to_string(seed);
    inst.cities.reserve(static_cast<size_t>(n));
    while (inst.size() < n) {
        const double x = rng.uniform(0.0, box);
        const double y = rng.uniform(0.0, box);
        bool dup = false;
        for (const auto& c : inst.cities) dup = dup || (c.x == x && c.y == y);
        if (dup) continue;
        inst.cities.push_back(City{inst.size(), x, y});
    }
    return inst;
}

double tour_length(const Instance& inst, std::span<const int> order) {
    const int n = inst.size();
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument("tour_length: order size does not match instance");
    std::vector<bool> used(static_cast<size_t>(n), false);
    for (int id : order) {
        if (id < 0 || id >= n || used[static_cast<size_t>(id)])
            throw std::invalid_argument("tour_length: order is not a permutation");
        used[static_cast<size_t>(id)] = true;
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += inst.distance(order[static_cast<size_t>(i)], order[static_cast<size_t>((i + 1) % n)]);
    return total;
}

Tour make_tour(const Instance& inst, std::vector<int> order) {
    Tour t;
    t.length = tour_length(inst, order);
    t.order = std::move(order);
    return t;
}

std::string tour_to_json(const Instance& inst, const Tour& tour) {
    std::ostringstream out;
    out.precision(12);
    out << "{\"instance_name\": \"" << inst.name << "\", \"order\": [";
    for (size_t i = 0; i < tour.order.size(); ++i) {
        if (i) out << ", ";
        out << tour.order[i];
    }
    out << "], \"length\": " << tour.length << "}";
    return out.str();
}

std::string instance_to_csv(const Instance& inst) {
    std::ostringstream out;
    out.precision(17);
    out << "id,x,y\n";
    for (const auto& c : inst.cities) out << c.id << "," << c.x << "," << c.y << "\n";
    return out.str();
}

} // namespace ringfuse
