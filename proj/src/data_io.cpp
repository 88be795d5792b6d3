#include "sparseproj/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "sparseproj/errors.hpp"
#include "sparseproj/random.hpp"

namespace sparseproj {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view token, std::size_t line) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
        throw ParseError("line " + std::to_string(line) + ": not a number: '" +
                             std::string(token) + "'",
                         line);
    }
    return value;
}

}  // namespace

SyntheticNmfInstance gen_synthetic_nmf(int m, int n, int r, std::uint64_t seed) {
    if (m < 1 || n < 1 || r < 1) {
        throw DomainError("gen_synthetic_nmf: m, n, r must be >= 1");
    }
    Rng rng(seed);
    SyntheticNmfInstance inst;
    inst.seed = seed;
    inst.X_true.resize(m, r);
    for (int k = 0; k < r; ++k) {
        do {
            for (int i = 0; i < m; ++i) {
                inst.X_true(i, k) = std::max(0.0, rng.normal());
            }
        } while (inst.X_true.col(k).maxCoeff() == 0.0);
    }
    inst.H_true = rng.uniform_matrix(r, n);
    inst.Y = inst.X_true * inst.H_true;
    if (m >= 2) {
        inst.true_sparsity = average_sparsity(VectorGroup::from_columns(inst.X_true));
    }
    return inst;
}

Vector radial_weights(int height, int width, double sigma) {
    if (height < 1 || width < 1) {
        throw DomainError("radial_weights: image dimensions must be >= 1");
    }
    if (!(sigma > 0.0)) {
        throw DomainError("radial_weights: sigma must be > 0");
    }
    const double ci = (height + 1) / 2.0;
    const double cj = (width + 1) / 2.0;
    Vector w(static_cast<Eigen::Index>(height) * width);
    for (int j = 1; j <= width; ++j) {
        for (int i = 1; i <= height; ++i) {
            const double d = std::hypot(i - ci, j - cj);
            w[static_cast<Eigen::Index>(j - 1) * height + (i - 1)] = std::exp(d / sigma);
        }
    }
    return w;
}

Matrix parse_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::size_t blank_run_start = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) {
            if (blank_run_start == 0) {
                blank_run_start = line_no;
            }
            continue;
        }
        if (blank_run_start != 0) {
            throw ParseError("line " + std::to_string(blank_run_start) + ": blank line", blank_run_start);
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = body.find(',', start);
            row.push_back(parse_number(body.substr(start, comma - start), line_no));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("line " + std::to_string(line_no) + ": row " +
                                 std::to_string(rows.size() + 1) + " has " +
                                 std::to_string(row.size()) + " columns, expected " +
                                 std::to_string(rows.front().size()),
                             line_no);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("empty matrix file", 1);
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

Matrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string(), 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix(buf.str());
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    char buf[32];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            const auto res = std::to_chars(buf, buf + sizeof(buf), m(i, j),
                                           std::chars_format::general, 17);
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

nlohmann::ordered_json to_json(const Report& report) {
    nlohmann::ordered_json j;
    j["schema"] = Report::kSchema;
    j["variant"] = report.variant;
    j["seed"] = report.seed;
    j["s"] = report.s;
    j["epsilon"] = report.epsilon;
    j["error_trace"] = report.error_trace;
    j["sparsity_trace"] = report.sparsity_trace;
    j["wall_ms"] = report.wall_ms ? nlohmann::ordered_json(*report.wall_ms) : nullptr;
    if (report.error) {
        j["error"] = *report.error;
    }
    for (const auto& [key, value] : report.extra.items()) {
        j[key] = value;
    }
    return j;
}

Report report_from_json(const nlohmann::ordered_json& j) {
    if (j.value("schema", std::string()) != Report::kSchema) {
        throw ParseError("report: unsupported schema", 0);
    }
    Report r;
    r.variant = j.at("variant").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.s = j.at("s").get<double>();
    r.epsilon = j.at("epsilon").get<double>();
    r.error_trace = j.at("error_trace").get<std::vector<double>>();
    r.sparsity_trace = j.at("sparsity_trace").get<std::vector<double>>();
    if (!j.at("wall_ms").is_null()) {
        r.wall_ms = j.at("wall_ms").get<double>();
    }
    if (j.contains("error")) {
        r.error = j.at("error").get<std::string>();
    }
    static constexpr const char* fixed[] = {"schema",     "variant",        "seed",
                                            "s",          "epsilon",        "error_trace",
                                            "sparsity_trace", "wall_ms",    "error"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(fixed), std::end(fixed), key) == std::end(fixed)) {
            r.extra[key] = value;
        }
    }
    return r;
}

void write_report(const Report& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write report " + path.string());
    }
    out << to_json(report).dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

Report read_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string(), 0);
    }
    try {
        return report_from_json(nlohmann::ordered_json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report: ") + e.what(), 0);
    }
}

}  // namespace sparseproj
