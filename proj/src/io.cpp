#include "nanboltz/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nanboltz/errors.hpp"

namespace nanboltz::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& path, size_t line_no) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw input_error(path + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
    }
}

}  // namespace

std::vector<Vec3> read_cloud_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open cloud file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw input_error("empty cloud file: " + path);

    auto header = split_csv_line(line);
    size_t first_col;
    if (header.size() == 3 && header[0] == "vx" && header[1] == "vy" && header[2] == "vz") {
        first_col = 0;
    } else if (header.size() == 4 && header[0] == "particle" && header[1] == "vx" &&
               header[2] == "vy" && header[3] == "vz") {
        first_col = 1;
    } else {
        throw input_error(path + ": expected header 'vx,vy,vz' or 'particle,vx,vy,vz'");
    }

    std::vector<Vec3> pts;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != first_col + 3)
            throw input_error(path + ":" + std::to_string(line_no) + ": wrong column count");
        pts.push_back({parse_double(cells[first_col], path, line_no),
                       parse_double(cells[first_col + 1], path, line_no),
                       parse_double(cells[first_col + 2], path, line_no)});
    }
    if (pts.empty()) throw input_error(path + ": no data rows");
    return pts;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_cloud_csv(const std::string& path, std::span<const Vec3> pts) {
    std::ostringstream out;
    out << "vx,vy,vz\n";
    for (const Vec3& p : pts)
        out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.z)
            << '\n';
    write_text_file(path, out.str());
}

void write_snapshot_csv(const std::string& path, std::span<const Vec3> pts) {
    std::ostringstream out;
    out << "particle,vx,vy,vz\n";
    for (size_t i = 0; i < pts.size(); ++i)
        out << i << ',' << format_double(pts[i].x) << ',' << format_double(pts[i].y) << ','
            << format_double(pts[i].z) << '\n';
    write_text_file(path, out.str());
}

uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path);
    out << content;
    if (!out) throw input_error("write failed: " + path);
}

}  // namespace nanboltz::io
