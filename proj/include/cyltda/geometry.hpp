#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cyltda {

/// Death coordinate of a feature that is never absorbed or killed.
inline constexpr double kEssential = std::numeric_limits<double>::infinity();

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double squared_distance(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

/// Strict total order on points: (x, y) lexicographic.
inline bool lex_less(Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

/// Rectangular sampling window [x_min, x_max] x [y_min, y_max].
/// The cross-section A = [y_min, y_max] plays the role of the bounded
/// direction of the cylinder; the x-axis is the growing direction.
struct Window {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }

    bool contains(Point p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }

    Window dilated(double margin) const {
        return Window{x_min - margin, x_max + margin, y_min - margin, y_max + margin};
    }

    /// Window of x-length `len` centered at 0 with cross-section [0, h].
    static Window centered(double len, double h) {
        return Window{-len / 2.0, len / 2.0, 0.0, h};
    }
};

inline void validate_window(const Window& w) {
    if (!(w.x_max > w.x_min) || !(w.y_max > w.y_min))
        throw std::invalid_argument("window: empty or inverted extent");
}

}  // namespace cyltda
