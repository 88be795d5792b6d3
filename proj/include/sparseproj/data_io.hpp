#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparseproj/sparsity.hpp"

namespace sparseproj {

/// Exact synthetic NMF instance Y = X_true * H_true.
struct SyntheticNmfInstance {
    Matrix Y;
    Matrix X_true;
    Matrix H_true;
    std::uint64_t seed = 0;
    /// Average spar over the columns of X_true.
    double true_sparsity = 0.0;
};

/// X_true ~ N(0,1) clipped at zero (about half the entries vanish), H_true
/// uniform on [0, 1]. A column of X_true that comes out all-zero is redrawn.
SyntheticNmfInstance gen_synthetic_nmf(int m, int n, int r, std::uint64_t seed);

/// exp(||(i, j) - c||_2 / sigma) for 1-based pixel (i, j) and center
/// c = ((height+1)/2, (width+1)/2), vectorized column-major.
Vector radial_weights(int height, int width, double sigma);

/// Comma-separated decimal matrix, one row per line. Throws ParseError.
Matrix load_matrix(const std::filesystem::path& path);
Matrix parse_matrix(const std::string& text);
/// Writes with 17 significant digits so values survive a round trip.
void save_matrix(const Matrix& m, const std::filesystem::path& path);

/// Run summary persisted as JSON.
struct Report {
    static constexpr const char* kSchema = "1";

    std::string variant;
    std::uint64_t seed = 0;
    double s = 0.0;
    double epsilon = 0.0;
    std::vector<double> error_trace;
    std::vector<double> sparsity_trace;
    /// Left null unless timing was requested, so reports stay reproducible.
    std::optional<double> wall_ms;
    /// Set for failed runs.
    std::optional<std::string> error;
    /// Command-specific fields, appended after the fixed keys.
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const Report& report);
Report report_from_json(const nlohmann::ordered_json& j);
void write_report(const Report& report, const std::filesystem::path& path);
Report read_report(const std::filesystem::path& path);

}  // namespace sparseproj
