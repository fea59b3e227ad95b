// raster.hpp - desk-scale software rasterizer for emitted specs: bar, line
// and pie charts plus trajectory maps, straight to PNG bytes. No axes or
// labels, just the data shapes.
#ifndef TVL_RASTER_HPP
#define TVL_RASTER_HPP

#include <cmath>
#include <vector>

#include "tvl/png.hpp"
#include "tvl/visgen.hpp"

namespace tvl {

namespace raster {

struct Rgb {
    uint8_t r, g, b;
};

inline constexpr Rgb kPalette[] = {
    {66, 133, 244}, {219, 68, 55}, {244, 180, 0},  {15, 157, 88},
    {171, 71, 188}, {0, 172, 193}, {255, 112, 67}, {158, 157, 36},
};

class Canvas {
public:
    Canvas(size_t w, size_t h, Rgb bg = {255, 255, 255}) : w_(w), h_(h), px_(w * h * 3) {
        for (size_t i = 0; i < w * h; ++i) set_index(i, bg);
    }

    size_t width() const { return w_; }
    size_t height() const { return h_; }

    void set(long x, long y, Rgb c) {
        if (x < 0 || y < 0 || x >= static_cast<long>(w_) || y >= static_cast<long>(h_)) return;
        set_index(static_cast<size_t>(y) * w_ + static_cast<size_t>(x), c);
    }

    void fill_rect(long x0, long y0, long x1, long y1, Rgb c) {
        for (long y = std::min(y0, y1); y <= std::max(y0, y1); ++y)
            for (long x = std::min(x0, x1); x <= std::max(x0, x1); ++x) set(x, y, c);
    }

    void line(long x0, long y0, long x1, long y1, Rgb c) {
        long dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
        long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
        long err = dx + dy;
        while (true) {
            set(x0, y0, c);
            if (x0 == x1 && y0 == y1) break;
            long e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }

    std::vector<uint8_t> to_png() const { return encode_png(w_, h_, px_); }

private:
    size_t w_, h_;
    std::vector<uint8_t> px_;

    void set_index(size_t i, Rgb c) {
        px_[i * 3] = c.r;
        px_[i * 3 + 1] = c.g;
        px_[i * 3 + 2] = c.b;
    }
};

inline double json_number(const nlohmann::ordered_json& v) {
    if (v.is_number()) return v.get<double>();
    return 0.0;
}

inline void draw_bar(Canvas& cv, const nlohmann::ordered_json& doc) {
    const auto& values = doc.at("data").at("values");
    std::string y_field = doc.at("encoding").at("y").at("field").get<std::string>();
    size_t n = values.size();
    if (n == 0) return;
    double max_v = 1e-9;
    for (const auto& row : values) max_v = std::max(max_v, json_number(row.at(y_field)));
    const long margin = 20;
    double span = static_cast<double>(cv.width() - 2 * margin);
    double slot = span / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
        double v = json_number(values[i].at(y_field));
        long h = static_cast<long>(v / max_v * static_cast<double>(cv.height() - 2 * margin));
        long x0 = margin + static_cast<long>(static_cast<double>(i) * slot + slot * 0.1);
        long x1 = margin + static_cast<long>(static_cast<double>(i + 1) * slot - slot * 0.1);
        cv.fill_rect(x0, static_cast<long>(cv.height()) - margin - h,
                     x1, static_cast<long>(cv.height()) - margin, kPalette[i % 8]);
    }
}

inline void draw_line(Canvas& cv, const nlohmann::ordered_json& doc) {
    const auto& values = doc.at("data").at("values");
    std::string y_field = doc.at("encoding").at("y").at("field").get<std::string>();
    size_t n = values.size();
    if (n == 0) return;
    double lo = 0, hi = 1e-9;
    bool first = true;
    for (const auto& row : values) {
        if (row.at(y_field).is_null()) continue;
        double v = json_number(row.at(y_field));
        if (first || v < lo) lo = v;
        if (first || v > hi) hi = v;
        first = false;
    }
    if (hi <= lo) hi = lo + 1;
    const long margin = 20;
    double span_x = static_cast<double>(cv.width() - 2 * margin);
    double span_y = static_cast<double>(cv.height() - 2 * margin);
    long px = -1, py = -1;
    size_t denom = n > 1 ? n - 1 : 1;
    for (size_t i = 0; i < n; ++i) {
        if (values[i].at(y_field).is_null()) continue;
        double v = json_number(values[i].at(y_field));
        long x = margin + static_cast<long>(static_cast<double>(i) / static_cast<double>(denom) * span_x);
        long y = static_cast<long>(cv.height()) - margin -
                 static_cast<long>((v - lo) / (hi - lo) * span_y);
        if (px >= 0) cv.line(px, py, x, y, kPalette[0]);
        px = x;
        py = y;
    }
}

inline void draw_pie(Canvas& cv, const nlohmann::ordered_json& doc) {
    const auto& values = doc.at("data").at("values");
    std::string theta_field = doc.at("encoding").at("theta").at("field").get<std::string>();
    size_t n = values.size();
    if (n == 0) return;
    std::vector<double> cum{0};
    double total = 0;
    for (const auto& row : values) {
        total += std::max(0.0, json_number(row.at(theta_field)));
        cum.push_back(total);
    }
    if (total <= 0) return;
    double cx = static_cast<double>(cv.width()) / 2.0;
    double cy = static_cast<double>(cv.height()) / 2.0;
    double radius = std::min(cx, cy) * 0.85;
    for (long y = 0; y < static_cast<long>(cv.height()); ++y) {
        for (long x = 0; x < static_cast<long>(cv.width()); ++x) {
            double dx = static_cast<double>(x) - cx, dy = static_cast<double>(y) - cy;
            if (dx * dx + dy * dy > radius * radius) continue;
            double frac = (std::atan2(dy, dx) + M_PI) / (2 * M_PI);  // [0, 1)
            double target = frac * total;
            for (size_t i = 0; i < n; ++i) {
                if (target >= cum[i] && target < cum[i + 1]) {
                    cv.set(x, y, kPalette[i % 8]);
                    break;
                }
            }
        }
    }
}

inline void draw_map(Canvas& cv, const nlohmann::ordered_json& doc) {
    const auto& bbox = doc.at("bbox");
    double min_lon = bbox[0].get<double>(), min_lat = bbox[1].get<double>();
    double max_lon = bbox[2].get<double>(), max_lat = bbox[3].get<double>();
    double span_lon = std::max(max_lon - min_lon, 1e-9);
    double span_lat = std::max(max_lat - min_lat, 1e-9);
    const long margin = 20;
    auto to_px = [&](double lon, double lat) {
        long x = margin + static_cast<long>((lon - min_lon) / span_lon *
                                            static_cast<double>(cv.width() - 2 * margin));
        long y = margin + static_cast<long>((max_lat - lat) / span_lat *
                                            static_cast<double>(cv.height() - 2 * margin));
        return std::make_pair(x, y);
    };
    // area frame
    auto [fx0, fy0] = to_px(min_lon, max_lat);
    auto [fx1, fy1] = to_px(max_lon, min_lat);
    Rgb frame{200, 200, 200};
    cv.line(fx0, fy0, fx1, fy0, frame);
    cv.line(fx1, fy0, fx1, fy1, frame);
    cv.line(fx1, fy1, fx0, fy1, frame);
    cv.line(fx0, fy1, fx0, fy0, frame);

    size_t color = 0;
    for (const auto& feat : doc.at("features")) {
        Rgb c = kPalette[color++ % 8];
        const auto& coords = feat.at("coordinates");
        long px = -1, py = -1;
        for (const auto& vertex : coords) {
            auto [x, y] = to_px(vertex[0].get<double>(), vertex[1].get<double>());
            if (px >= 0)
                cv.line(px, py, x, y, c);
            else
                cv.set(x, y, c);
            px = x;
            py = y;
        }
    }
    // center cross
    const auto& center = doc.at("center");
    auto [cx, cy] = to_px(center[0].get<double>(), center[1].get<double>());
    Rgb mark{219, 68, 55};
    cv.line(cx - 4, cy, cx + 4, cy, mark);
    cv.line(cx, cy - 4, cx, cy + 4, mark);
}

}  // namespace raster

inline std::vector<uint8_t> render_png(const VisSpec& spec, size_t width = 640,
                                       size_t height = 480) {
    raster::Canvas cv(width, height);
    switch (spec.kind) {
        case VisType::Bar: raster::draw_bar(cv, spec.doc); break;
        case VisType::Line: raster::draw_line(cv, spec.doc); break;
        case VisType::Pie: raster::draw_pie(cv, spec.doc); break;
        case VisType::Map: raster::draw_map(cv, spec.doc); break;
    }
    return cv.to_png();
}

}  // namespace tvl

#endif  // TVL_RASTER_HPP
