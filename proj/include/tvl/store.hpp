// store.hpp - in-memory trajectory store: the point table plus the derived
// travel-mode label side table. Loads the delimited fixture format and
// GeoLife's native PLT layout.
#ifndef TVL_STORE_HPP
#define TVL_STORE_HPP

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "tvl/common.hpp"
#include "tvl/timestamp.hpp"

namespace tvl {

struct StoreError : TvlError {
    using TvlError::TvlError;
};

struct TrajPoint {
    int64_t user_id = 0;
    int64_t traj_id = 0;
    double latitude = 0;
    double longitude = 0;
    std::optional<double> altitude;       // meters
    Timestamp datetime;
    std::optional<std::string> travel_mode;
};

struct LabelRow {
    int64_t user_id = 0;
    int64_t traj_id = 0;
    std::string travel_mode;
};

class TrajStore {
public:
    void add(TrajPoint p) {
        check_point(p);
        points_.push_back(std::move(p));
        finalized_ = false;
    }

    // Validates cross-row invariants and rebuilds the label side table.
    void finalize() {
        std::set<std::tuple<int64_t, int64_t, int64_t>> seen;
        std::map<std::pair<int64_t, int64_t>, Timestamp> last_time;
        for (const auto& p : points_) {
            auto key = std::make_tuple(p.user_id, p.traj_id, p.datetime.sec);
            if (!seen.insert(key).second)
                throw StoreError("duplicate (user_id, traj_id, datetime): " +
                                 std::to_string(p.user_id) + "/" + std::to_string(p.traj_id) +
                                 "/" + format_timestamp(p.datetime));
            auto traj = std::make_pair(p.user_id, p.traj_id);
            auto it = last_time.find(traj);
            if (it != last_time.end() && p.datetime < it->second)
                throw StoreError("datetime decreases within trajectory " +
                                 std::to_string(p.user_id) + "/" + std::to_string(p.traj_id));
            last_time[traj] = p.datetime;
        }
        rebuild_labels();
        finalized_ = true;
    }

    const std::vector<TrajPoint>& points() const { return points_; }
    const std::vector<LabelRow>& labels() const { return labels_; }
    bool empty() const { return points_.empty(); }
    size_t size() const { return points_.size(); }

private:
    std::vector<TrajPoint> points_;
    std::vector<LabelRow> labels_;
    bool finalized_ = false;

    static void check_point(const TrajPoint& p) {
        if (p.latitude < -90.0 || p.latitude > 90.0)
            throw StoreError("latitude out of range: " + str::format_double(p.latitude));
        if (p.longitude < -180.0 || p.longitude > 180.0)
            throw StoreError("longitude out of range: " + str::format_double(p.longitude));
    }

    void rebuild_labels() {
        std::set<std::tuple<int64_t, int64_t, std::string>> uniq;
        for (const auto& p : points_)
            if (p.travel_mode) uniq.insert({p.user_id, p.traj_id, *p.travel_mode});
        labels_.clear();
        for (const auto& [u, t, m] : uniq) labels_.push_back(LabelRow{u, t, m});
    }
};

namespace detail {

inline std::vector<std::string> csv_fields(const std::string& line) {
    return str::split(line, ',');
}

inline double parse_num(const std::string& s, const char* what, size_t line_no) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw StoreError("line " + std::to_string(line_no) + ": bad " + what + " value '" + s + "'");
    }
}

inline int64_t parse_int(const std::string& s, const char* what, size_t line_no) {
    try {
        size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw StoreError("line " + std::to_string(line_no) + ": bad " + what + " value '" + s + "'");
    }
}

}  // namespace detail

// Delimited fixture format, header row required:
//   user_id,traj_id,latitude,longitude,altitude,datetime,travel_mode
// Empty altitude / travel_mode fields load as nulls.
inline TrajStore parse_store_csv(std::istream& in) {
    TrajStore store;
    std::string line;
    if (!std::getline(in, line)) throw StoreError("empty store file (header row required)");
    std::string header = str::trim(line);
    if (header != "user_id,traj_id,latitude,longitude,altitude,datetime,travel_mode")
        throw StoreError("unexpected header row: " + header);
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = str::trim(line);
        if (t.empty()) continue;
        auto f = detail::csv_fields(t);
        if (f.size() != 7)
            throw StoreError("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                             std::to_string(f.size()));
        TrajPoint p;
        p.user_id = detail::parse_int(f[0], "user_id", line_no);
        p.traj_id = detail::parse_int(f[1], "traj_id", line_no);
        p.latitude = detail::parse_num(f[2], "latitude", line_no);
        p.longitude = detail::parse_num(f[3], "longitude", line_no);
        if (!f[4].empty()) p.altitude = detail::parse_num(f[4], "altitude", line_no);
        auto ts = parse_timestamp(f[5]);
        if (!ts)
            throw StoreError("line " + std::to_string(line_no) + ": bad datetime '" + f[5] + "'");
        p.datetime = *ts;
        if (!f[6].empty()) p.travel_mode = f[6];
        store.add(std::move(p));
    }
    store.finalize();
    return store;
}

inline std::string render_store_csv(const TrajStore& store) {
    std::ostringstream out;
    out << "user_id,traj_id,latitude,longitude,altitude,datetime,travel_mode\n";
    for (const auto& p : store.points()) {
        out << p.user_id << ',' << p.traj_id << ',' << str::format_double(p.latitude) << ','
            << str::format_double(p.longitude) << ','
            << (p.altitude ? str::format_double(*p.altitude) : "") << ','
            << format_timestamp(p.datetime) << ',' << (p.travel_mode ? *p.travel_mode : "")
            << '\n';
    }
    return out.str();
}

// GeoLife PLT layout: 6 header lines, then
//   lat,lon,flag,altitude_feet,days,date,time
// Altitude converts feet -> meters; the GeoLife "-777" missing marker loads
// as null. User and trajectory ids come from the directory layout, so the
// caller supplies them.
inline void append_plt(TrajStore& store, std::istream& in, int64_t user_id, int64_t traj_id) {
    std::string line;
    for (int i = 0; i < 6; ++i)
        if (!std::getline(in, line)) throw StoreError("PLT file shorter than its 6 header lines");
    size_t line_no = 6;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = str::trim(line);
        if (t.empty()) continue;
        auto f = detail::csv_fields(t);
        if (f.size() != 7)
            throw StoreError("PLT line " + std::to_string(line_no) + ": expected 7 fields");
        TrajPoint p;
        p.user_id = user_id;
        p.traj_id = traj_id;
        p.latitude = detail::parse_num(f[0], "latitude", line_no);
        p.longitude = detail::parse_num(f[1], "longitude", line_no);
        double feet = detail::parse_num(f[3], "altitude", line_no);
        if (feet != -777.0) p.altitude = feet * 0.3048;
        auto ts = parse_timestamp(f[5] + " " + f[6]);
        if (!ts)
            throw StoreError("PLT line " + std::to_string(line_no) + ": bad date/time '" + f[5] +
                             " " + f[6] + "'");
        p.datetime = *ts;
        store.add(std::move(p));
    }
}

inline TrajStore load_store(const std::string& path, int64_t plt_user = 0, int64_t plt_traj = 0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("cannot open store file: " + path);
    if (path.size() >= 4 && str::iequals(path.substr(path.size() - 4), ".plt")) {
        TrajStore store;
        append_plt(store, in, plt_user, plt_traj);
        store.finalize();
        return store;
    }
    return parse_store_csv(in);
}

}  // namespace tvl

#endif  // TVL_STORE_HPP
