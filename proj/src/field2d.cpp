#include "wstring/field2d.hpp"
#include "wstring/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wstring {
namespace {

bool hits_node(const Grid2D& g, std::complex<double> s) {
    auto on_axis = [&](double coord, double origin) {
        const double t = (coord - origin) / g.h();
        const double nearest = std::round(t);
        return nearest >= 0 && nearest < g.n && std::abs(t - nearest) * g.h() < 1e-9;
    };
    return on_axis(s.real(), -g.R + g.offset_x) && on_axis(s.imag(), -g.R + g.offset_y);
}

void format_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

} // namespace

Grid2D Grid2D::make(double R, int n, const std::vector<std::complex<double>>& strings) {
    if (!(R > 0.0)) throw ConfigError("grid half-width must be positive");
    if (n < 65 || n % 2 == 0) {
        std::ostringstream msg;
        msg << "grid node count must be odd and at least 65, got " << n;
        throw ConfigError(msg.str());
    }
    Grid2D g{R, n, 0.0, 0.0};
    for (double frac : {0.0, 1.0 / 3, 1.0 / 7, 1.0 / 11}) {
        g.offset_x = g.offset_y = frac * g.h();
        bool clash = false;
        for (const auto& s : strings) clash = clash || hits_node(g, s);
        if (!clash) return g;
    }
    throw ConfigError("could not offset the grid away from the string points");
}

double Field2D::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double Field2D::max_abs_interior() const {
    double m = 0.0;
    for (int j = 1; j + 1 < grid.n; ++j)
        for (int i = 1; i + 1 < grid.n; ++i) m = std::max(m, std::abs(at(i, j)));
    return m;
}

double Field2D::interp(double x, double y) const {
    const double h = grid.h();
    const double fx = (x - grid.x(0)) / h;
    const double fy = (y - grid.y(0)) / h;
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, grid.n - 2);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, grid.n - 2);
    const double tx = fx - i, ty = fy - j;
    if (tx < -1e-9 || tx > 1 + 1e-9 || ty < -1e-9 || ty > 1 + 1e-9)
        throw RangeError("interpolation point outside the grid");
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
           (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

double Field2D::interp_cubic(double x, double y) const {
    const double h = grid.h();
    const double fx = (x - grid.x(0)) / h;
    const double fy = (y - grid.y(0)) / h;
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 1, grid.n - 3);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 1, grid.n - 3);
    const double tx = fx - i, ty = fy - j;
    if (tx < -1.5 || tx > 2.5 || ty < -1.5 || ty > 2.5)
        throw RangeError("interpolation point outside the grid");
    auto cat = [](double vm1, double v0, double v1, double v2, double t) {
        // Catmull-Rom in one variable.
        return v0 + 0.5 * t * (v1 - vm1 +
                               t * (2 * vm1 - 5 * v0 + 4 * v1 - v2 +
                                    t * (3 * (v0 - v1) + v2 - vm1)));
    };
    double col[4];
    for (int dj = -1; dj <= 2; ++dj)
        col[dj + 1] = cat(at(i - 1, j + dj), at(i, j + dj), at(i + 1, j + dj),
                          at(i + 2, j + dj), tx);
    return cat(col[0], col[1], col[2], col[3], ty);
}

void Field2D::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw RangeError("cannot open " + path + " for writing");
    std::string buf = "x,y,value\n";
    buf.reserve(static_cast<size_t>(grid.n) * grid.n * 24);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            format_double(buf, grid.x(i));
            buf.push_back(',');
            format_double(buf, grid.y(j));
            buf.push_back(',');
            format_double(buf, at(i, j));
            buf.push_back('\n');
        }
    out << buf;
}

Field2D Field2D::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RangeError("cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::vector<double> xs, ys, vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x, y, val;
        const char* ptr = line.c_str();
        const char* end = ptr + line.size();
        auto r1 = std::from_chars(ptr, end, x);
        auto r2 = std::from_chars(r1.ptr + 1, end, y);
        auto r3 = std::from_chars(r2.ptr + 1, end, val);
        if (r1.ec != std::errc{} || r2.ec != std::errc{} || r3.ec != std::errc{})
            throw RangeError("malformed row in " + path);
        xs.push_back(x);
        ys.push_back(y);
        vals.push_back(val);
    }
    const int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(vals.size()))));
    if (static_cast<size_t>(n) * n != vals.size() || n < 65)
        throw RangeError(path + " does not hold a square grid");
    Grid2D g;
    g.n = n;
    const double xmin = xs.front(), xmax = xs[static_cast<size_t>(n) - 1];
    g.R = (xmax - xmin) / 2.0;
    g.offset_x = xmin + g.R;
    g.offset_y = ys.front() + g.R;
    Field2D f(g);
    f.v = std::move(vals);
    return f;
}

void Field2D::write_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RangeError("cannot open " + path + " for writing");
    const int64_t n = grid.n;
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&grid.R), sizeof grid.R);
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

Field2D Field2D::read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RangeError("cannot open " + path);
    int64_t n = 0;
    double R = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&R), sizeof R);
    if (!in || n < 65 || n > 100000) throw RangeError(path + ": bad binary header");
    Grid2D g;
    g.n = static_cast<int>(n);
    g.R = R;
    Field2D f(g);
    in.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!in) throw RangeError(path + ": truncated binary payload");
    return f;
}

} // namespace wstring
