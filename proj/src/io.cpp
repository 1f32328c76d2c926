#include "stefan/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stefan {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << body;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_field_csv(const std::filesystem::path& path, const Field& f, const StefanGraph& g) {
    std::string body = "x,h,u\n";
    for (int b = 0; b < f.grid.n; ++b) {
        const double h = f.values[b];
        body += format17(f.grid.node(b));
        body += ',';
        body += format17(h);
        body += ',';
        body += format17(g.temperature(h));
        body += '\n';
    }
    write_text(path, body);
}

void write_profile_csv(const std::filesystem::path& path, const Profile& p) {
    std::string body = "xi,H,U\n";
    for (std::size_t i = 0; i < p.xi.size(); ++i) {
        body += format17(p.xi[i]);
        body += ',';
        body += format17(p.H[i]);
        body += ',';
        body += format17(p.U[i]);
        body += '\n';
    }
    write_text(path, body);
}

void write_oracle_csv(const std::filesystem::path& path, const std::vector<double>& x,
                      const std::vector<double>& u) {
    std::string body = "x,u_exact\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        body += format17(x[i]);
        body += ',';
        body += format17(u[i]);
        body += '\n';
    }
    write_text(path, body);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_stencil_dump(const std::filesystem::path& csv_path,
                        const std::filesystem::path& json_path, const Stencil& st) {
    std::string body = "gamma,omega\n";
    for (std::size_t g = 0; g < st.omega.size(); ++g) {
        body += std::to_string(g + 1);
        body += ',';
        body += format17(st.omega[g]);
        body += '\n';
    }
    write_text(csv_path, body);
    nlohmann::json j{{"s", st.s},
                     {"dx", st.dx},
                     {"R_cut", st.r_cut},
                     {"c1s", st.c1s},
                     {"row_sum", st.row_sum}};
    write_json(json_path, j);
}

void write_svg_lines(const std::filesystem::path& path, const std::string& title,
                     const std::vector<double>& x, const std::vector<SvgSeries>& series) {
    const int W = 720, H = 420, M = 50;
    double xmin = x.front(), xmax = x.back();
    double ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const SvgSeries& s : series)
        for (double v : *s.y) {
            if (first) {
                ymin = ymax = v;
                first = false;
            }
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax - ymin < 1e-12) {
        ymax += 0.5;
        ymin -= 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double v) { return M + (v - xmin) / (xmax - xmin) * (W - 2 * M); };
    auto py = [&](double v) { return H - M - (v - ymin) / (ymax - ymin) * (H - 2 * M); };

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    out << "<line x1='" << M << "' y1='" << H - M << "' x2='" << W - M << "' y2='" << H - M
        << "' stroke='black'/>\n";
    out << "<line x1='" << M << "' y1='" << M << "' x2='" << M << "' y2='" << H - M
        << "' stroke='black'/>\n";
    if (ymin < 0.0 && ymax > 0.0)
        out << "<line x1='" << M << "' y1='" << py(0.0) << "' x2='" << W - M << "' y2='"
            << py(0.0) << "' stroke='#cccccc'/>\n";
    out << "<text x='" << M << "' y='" << H - M + 16 << "' font-size='11'>" << xmin
        << "</text>\n<text x='" << W - M << "' y='" << H - M + 16
        << "' text-anchor='end' font-size='11'>" << xmax << "</text>\n";
    out << "<text x='" << M - 4 << "' y='" << py(ymin) << "' text-anchor='end' font-size='11'>"
        << ymin << "</text>\n<text x='" << M - 4 << "' y='" << py(ymax)
        << "' text-anchor='end' font-size='11'>" << ymax << "</text>\n";

    int k = 0;
    for (const SvgSeries& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.2' points='";
        const std::size_t stride = std::max<std::size_t>(1, x.size() / 2000);
        for (std::size_t i = 0; i < x.size(); i += stride)
            out << px(x[i]) << ',' << py((*s.y)[i]) << ' ';
        out << "'/>\n";
        out << "<text x='" << W - M - 4 << "' y='" << M + 14 * (k + 1)
            << "' text-anchor='end' font-size='12' fill='" << s.color << "'>" << s.label
            << "</text>\n";
        ++k;
    }
    out << "</svg>\n";
    write_text(path, out.str());
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for hashing: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return content_hash(ss.str());
}

void write_dir_manifest(const std::filesystem::path& dir, const nlohmann::json& inputs) {
    nlohmann::json hashes = nlohmann::json::object();
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (entry.path().filename() == "manifest.json") continue;
        if (ext == ".csv" || ext == ".svg" || ext == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) hashes[p.filename().string()] = file_hash(p);
    nlohmann::json manifest{{"inputs", inputs}, {"outputs", hashes}};
    write_json(dir / "manifest.json", manifest);
}

nlohmann::json interface_report_json(const InterfaceReport& rep) {
    return {{"xi_w", rep.xi_water},
            {"xi_i", rep.xi_ice},
            {"mushy_width", rep.mushy_width},
            {"tol_u", rep.tol_u},
            {"dx", rep.dx},
            {"coincident", rep.coincident}};
}

}  // namespace stefan
