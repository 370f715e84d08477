#include "gyro/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gyro {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& field, Eigen::Index n) {
    if (!j.contains(field))
        throw IoError("SchemaError", "missing field '" + field + "'");
    const json& arr = j.at(field);
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != n * n)
        throw IoError("SchemaError",
                      "field '" + field + "' must be an array of " + std::to_string(n * n) +
                          " numbers");
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) {
            const json& v = arr[static_cast<size_t>(i * n + k)];
            if (!v.is_number())
                throw IoError("SchemaError", "field '" + field + "' holds a non-number");
            m(i, k) = v.get<double>();
        }
    return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) arr.push_back(m(i, k));
    return arr;
}

ModeClass class_from_string(const std::string& s) {
    if (s == "HighLoss") return ModeClass::HighLoss;
    if (s == "LowLossLowQ") return ModeClass::LowLossLowQ;
    if (s == "LowLossHighQ") return ModeClass::LowLossHighQ;
    return ModeClass::Unclassified;
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("IoError", "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("IoError", "cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("IoError", "write to '" + path + "' failed");
}

std::string content_hash(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SystemFile load_system_file(const std::string& path) {
    const std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError("SchemaError", std::string("not valid JSON: ") + e.what());
    }
    if (!j.contains("n") || !j.at("n").is_number_integer())
        throw IoError("SchemaError", "missing integer field 'n'");
    const Eigen::Index n = j.at("n").get<Eigen::Index>();
    if (n < 1) throw IoError("SchemaError", "'n' must be >= 1");

    SystemFile file;
    file.system.alpha = matrix_from_json(j, "alpha", n);
    file.system.eta = matrix_from_json(j, "eta", n);
    file.system.theta = matrix_from_json(j, "theta", n);
    file.system.r = matrix_from_json(j, "r", n);
    if (j.contains("metadata")) {
        const json& md = j.at("metadata");
        if (md.contains("name")) file.name = md.at("name").get<std::string>();
        if (md.contains("description")) file.description = md.at("description").get<std::string>();
    }
    validate(file.system);
    return file;
}

LagrangianSystem load_system(const std::string& path) { return load_system_file(path).system; }

std::string system_to_json(const LagrangianSystem& sys, const std::optional<std::string>& name,
                           const std::optional<std::string>& description) {
    json j;
    j["n"] = sys.dof();
    j["alpha"] = matrix_to_json(sys.alpha);
    j["eta"] = matrix_to_json(sys.eta);
    j["theta"] = matrix_to_json(sys.theta);
    j["r"] = matrix_to_json(sys.r);
    if (name || description) {
        json md = json::object();
        if (name) md["name"] = *name;
        if (description) md["description"] = *description;
        j["metadata"] = md;
    }
    return j.dump(2) + "\n";
}

void save_system(const LagrangianSystem& sys, const std::string& path,
                 const std::optional<std::string>& name,
                 const std::optional<std::string>& description) {
    validate(sys);
    write_text_file(path, system_to_json(sys, name, description));
}

std::string write_sweep_csv(const std::vector<SweepRow>& rows) {
    std::vector<SweepRow> sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.beta != b.beta) return a.beta < b.beta;
        return a.branch < b.branch;
    });
    std::string out = "beta,branch,re_zeta,im_zeta,q_factor,class\n";
    for (const auto& r : sorted) {
        out += fmt17(r.beta) + "," + std::to_string(r.branch) + "," + fmt17(r.re_zeta) + "," +
               fmt17(r.im_zeta) + "," + fmt17(r.q_factor) + "," + to_string(r.klass) + "\n";
    }
    return out;
}

std::vector<SweepRow> read_sweep_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "beta,branch,re_zeta,im_zeta,q_factor,class")
        throw IoError("SchemaError", "bad sweep CSV header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 6) throw IoError("SchemaError", "bad sweep CSV row: " + line);
        SweepRow r;
        try {
            r.beta = parse_double(fields[0]);
            r.branch = std::stoi(fields[1]);
            r.re_zeta = parse_double(fields[2]);
            r.im_zeta = parse_double(fields[3]);
            r.q_factor = parse_double(fields[4]);
        } catch (const std::exception&) {
            throw IoError("SchemaError", "bad number in sweep CSV row: " + line);
        }
        r.klass = class_from_string(fields[5]);
        rows.push_back(r);
    }
    return rows;
}

namespace {

constexpr double kWidth = 960, kHeight = 600;
constexpr double kLeft = 70, kRight = 930, kTop = 40, kBottom = 560;

const char* kPalette[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad",
                          "#d35400", "#16a085", "#7f8c8d", "#2c3e50"};

std::string fmtc(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string fmt_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;
    double map(double v, double pix_lo, double pix_hi) const {
        double x = log ? std::log10(v) : v;
        double a = log ? std::log10(lo) : lo;
        double b = log ? std::log10(hi) : hi;
        if (b == a) b = a + 1;
        return pix_lo + (x - a) / (b - a) * (pix_hi - pix_lo);
    }
};

}  // namespace

std::string render_sweep_svg(const std::vector<SweepRow>& rows, const std::string& which,
                             const std::optional<PlotOverlay>& overlay,
                             const std::optional<PlotMarkers>& markers) {
    if (rows.empty()) throw IoError("EmptyCsv", "no sweep rows to plot");
    if (which != "damping" && which != "frequency" && which != "q")
        throw ValidationError("InvalidBeta", "plot kind must be damping|frequency|q");

    const bool log_y = which != "frequency";
    constexpr double kFloor = 1e-12;
    auto value_of = [&](const SweepRow& r) -> std::optional<double> {
        if (which == "damping") return std::max(-r.im_zeta, kFloor);
        if (which == "frequency") return r.re_zeta;
        if (std::isinf(r.q_factor)) return std::nullopt;
        return std::max(r.q_factor, kFloor);
    };

    Axis x, y;
    x.log = true;
    x.lo = rows.front().beta;
    x.hi = rows.front().beta;
    y.log = log_y;
    double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
    int max_branch = 0;
    for (const auto& r : rows) {
        x.lo = std::min(x.lo, r.beta);
        x.hi = std::max(x.hi, r.beta);
        max_branch = std::max(max_branch, r.branch);
        if (auto v = value_of(r)) {
            y_lo = std::min(y_lo, *v);
            y_hi = std::max(y_hi, *v);
        }
    }
    if (!std::isfinite(y_lo)) {
        y_lo = log_y ? kFloor : -1;
        y_hi = log_y ? 1.0 : 1;
    }
    if (y_lo == y_hi) {
        y_lo = log_y ? y_lo / 10 : y_lo - 1;
        y_hi = log_y ? y_hi * 10 : y_hi + 1;
    }
    y.lo = y_lo;
    y.hi = y_hi;

    auto px = [&](double beta) { return x.map(beta, kLeft, kRight); };
    auto py = [&](double v) { return y.map(v, kBottom, kTop); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_label(kWidth) +
           "\" height=\"" + fmt_label(kHeight) + "\" viewBox=\"0 0 960 600\">\n";
    svg += "<rect width=\"960\" height=\"600\" fill=\"white\"/>\n";
    svg += "<rect x=\"" + fmtc(kLeft) + "\" y=\"" + fmtc(kTop) + "\" width=\"" +
           fmtc(kRight - kLeft) + "\" height=\"" + fmtc(kBottom - kTop) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";

    // decade grid on the beta axis
    for (int e = static_cast<int>(std::ceil(std::log10(x.lo)));
         e <= static_cast<int>(std::floor(std::log10(x.hi))); ++e) {
        double b = std::pow(10.0, e);
        svg += "<line x1=\"" + fmtc(px(b)) + "\" y1=\"" + fmtc(kTop) + "\" x2=\"" + fmtc(px(b)) +
               "\" y2=\"" + fmtc(kBottom) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmtc(px(b)) + "\" y=\"" + fmtc(kBottom + 18) +
               "\" font-size=\"12\" text-anchor=\"middle\">1e" + std::to_string(e) + "</text>\n";
    }
    svg += "<text x=\"" + fmtc((kLeft + kRight) / 2) + "\" y=\"" + fmtc(kHeight - 8) +
           "\" font-size=\"13\" text-anchor=\"middle\">loss parameter beta</text>\n";
    const std::string y_name = which == "damping"   ? "damping factor"
                               : which == "frequency" ? "frequency"
                                                      : "quality factor";
    svg += "<text x=\"16\" y=\"" + fmtc((kTop + kBottom) / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fmtc((kTop + kBottom) / 2) + ")\">" + y_name + "</text>\n";

    // threshold markers
    if (markers) {
        auto mark = [&](std::optional<double> b, const char* name) {
            if (!b || *b < x.lo || *b > x.hi) return;
            svg += "<line x1=\"" + fmtc(px(*b)) + "\" y1=\"" + fmtc(kTop) + "\" x2=\"" +
                   fmtc(px(*b)) + "\" y2=\"" + fmtc(kBottom) +
                   "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
            svg += "<text x=\"" + fmtc(px(*b) + 3) + "\" y=\"" + fmtc(kTop + 12) +
                   "\" font-size=\"11\">" + name + "</text>\n";
        };
        mark(markers->beta0, "beta0");
        mark(markers->beta1, "beta1");
        mark(markers->beta2, "beta2");
    }

    // asymptote overlays
    if (overlay) {
        auto draw_curve = [&](auto f, const char* dash) {
            std::string pts;
            const int samples = 64;
            for (int i = 0; i <= samples; ++i) {
                double b = std::pow(10.0, std::log10(x.lo) +
                                              (std::log10(x.hi) - std::log10(x.lo)) * i / samples);
                double v = f(b);
                if (log_y && v <= 0) continue;
                if (log_y) v = std::max(v, kFloor);
                if (v < y.lo || v > y.hi) continue;
                pts += fmtc(px(b)) + "," + fmtc(py(v)) + " ";
            }
            if (!pts.empty())
                svg += "<polyline points=\"" + pts +
                       "\" fill=\"none\" stroke=\"#555555\" stroke-dasharray=\"" + dash +
                       "\"/>\n";
        };
        if (which == "damping") {
            for (double b : overlay->b_coeffs)
                draw_curve([b](double beta) { return b * beta; }, "6 3");
            for (double d : overlay->d_coeffs)
                if (d > 0) draw_curve([d](double beta) { return d / beta; }, "6 3");
            for (double s : overlay->dual_slopes)
                if (s > 0) draw_curve([s](double beta) { return s / beta; }, "2 3");
        } else if (which == "frequency") {
            for (double rho : overlay->rho)
                draw_curve([rho](double) { return rho; }, "6 3");
        }
    }

    // branch polylines (markers when a branch has a single point)
    for (int b = 0; b <= max_branch; ++b) {
        std::string pts;
        int count = 0;
        for (const auto& r : rows) {
            if (r.branch != b) continue;
            auto v = value_of(r);
            if (!v) continue;
            double vv = log_y ? std::max(*v, kFloor) : *v;
            pts += fmtc(px(r.beta)) + "," + fmtc(py(vv)) + " ";
            ++count;
        }
        const char* color = kPalette[b % 8];
        if (count >= 2) {
            svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\"/>\n";
        } else if (count == 1) {
            auto sep = pts.find(',');
            svg += "<circle cx=\"" + pts.substr(0, sep) + "\" cy=\"" +
                   pts.substr(sep + 1, pts.size() - sep - 2) + "\" r=\"3\" fill=\"" + color +
                   "\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace gyro
