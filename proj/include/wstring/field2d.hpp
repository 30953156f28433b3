#pragma once

#include <complex>
#include <string>
#include <vector>

namespace wstring {

// Square node-centered grid on [-R, R]^2, optionally shifted by a
// sub-cell offset so string points never land exactly on nodes.
struct Grid2D {
    double R = 8.0;
    int n = 257; // odd, >= 65
    double offset_x = 0.0;
    double offset_y = 0.0;

    double h() const { return 2.0 * R / (n - 1); }
    double x(int i) const { return -R + offset_x + i * h(); }
    double y(int j) const { return -R + offset_y + j * h(); }
    std::complex<double> node(int i, int j) const { return {x(i), y(j)}; }

    bool operator==(const Grid2D&) const = default;

    // Validates shape and applies an h/3 offset (retrying with smaller
    // fractions) when a string point coincides with a node.
    static Grid2D make(double R, int n, const std::vector<std::complex<double>>& strings);
};

struct Field2D {
    Grid2D grid;
    std::vector<double> v; // index i + n*j, x fastest

    Field2D() = default;
    explicit Field2D(const Grid2D& g) : grid(g), v(static_cast<size_t>(g.n) * g.n, 0.0) {}

    double& at(int i, int j) { return v[static_cast<size_t>(i) + static_cast<size_t>(grid.n) * j]; }
    double at(int i, int j) const {
        return v[static_cast<size_t>(i) + static_cast<size_t>(grid.n) * j];
    }

    double max_abs() const;
    double max_abs_interior() const; // excludes the boundary ring

    // Bilinear interpolation at an arbitrary point inside the grid hull.
    double interp(double x, double y) const;
    // Bicubic (Hermite) interpolation, for measurements that cannot
    // afford the O(h^2) bilinear error.
    double interp_cubic(double x, double y) const;

    // CSV rows x,y,value with shortest round-trip formatting.
    void write_csv(const std::string& path) const;
    static Field2D read_csv(const std::string& path);

    // Little-endian binary: int64 n, double R, then n*n doubles with the
    // x index fastest.  Sub-cell offsets are not part of the format.
    void write_binary(const std::string& path) const;
    static Field2D read_binary(const std::string& path);
};

} // namespace wstring
