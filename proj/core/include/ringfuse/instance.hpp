#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ringfuse/geometry.hpp"

namespace ringfuse {

struct City {
    int id = 0;
    double x = 0.0;
    double y = 0.0;

    Point2 pos() const { return {x, y}; }
};

/// A planar Euclidean TSP instance. Immutable after construction.
struct Instance {
    std::string name;
    std::vector<City> cities;

    int size() const { return static_cast<int>(cities.size()); }
    Point2 pos(int i) const { return cities[i].pos(); }
    double distance(int i, int j) const { return dist(pos(i), pos(j)); }

    /// Diagonal of the axis-aligned bounding box of the cities.
    double bounding_box_diagonal() const;
    Point2 centroid() const;
};

struct Tour {
    std::vector<int> order; // permutation of 0..N-1
    double length = 0.0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Parse the EUC_2D TSPLIB subset. Distances are kept in full double
/// precision; the TSPLIB integer-rounding convention is not applied.
Instance parse_instance(std::istream& in);
Instance parse_instance_file(const std::string& path);

std::string serialize_instance(const Instance& inst);

/// n cities i.i.d. uniform on [0, box]^2. Duplicate draws are re-sampled.
/// Pure function of (n, seed, box).
Instance generate_instance(int n, std::uint64_t seed, double box);

/// Cyclic Euclidean tour length. Throws std::invalid_argument if `order`
/// is not a permutation of 0..N-1.
double tour_length(const Instance& inst, std::span<const int> order);

Tour make_tour(const Instance& inst, std::vector<int> order);

/// JSON object {instance_name, order, length}.
std::string tour_to_json(const Instance& inst, const Tour& tour);

/// CSV dump "id,x,y" with header.
std::string instance_to_csv(const Instance& inst);

} // namespace ringfuse
