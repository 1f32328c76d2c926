#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "stefan/nonlinearity.hpp"
#include "stefan/profile.hpp"
#include "stefan/stencil.hpp"

namespace stefan {

// 17-significant-digit decimal rendering; the round-trip-exact CSV format.
std::string format17(double v);

void write_text(const std::filesystem::path& path, const std::string& body);

// Field CSV: header `x,h,u`, one row per node.
void write_field_csv(const std::filesystem::path& path, const Field& f, const StefanGraph& g);

// Profile CSV: header `xi,H,U`.
void write_profile_csv(const std::filesystem::path& path, const Profile& p);

// Oracle table CSV: header `x,u_exact`.
void write_oracle_csv(const std::filesystem::path& path, const std::vector<double>& x,
                      const std::vector<double>& u);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Stencil debug dump: CSV `gamma,omega` plus a JSON header.
void write_stencil_dump(const std::filesystem::path& csv_path,
                        const std::filesystem::path& json_path, const Stencil& st);

// Minimal SVG line chart; each series is (label, y-values) over shared x.
struct SvgSeries {
    std::string label;
    const std::vector<double>* y = nullptr;
    std::string color = "#1f77b4";
};
void write_svg_lines(const std::filesystem::path& path, const std::string& title,
                     const std::vector<double>& x, const std::vector<SvgSeries>& series);

// FNV-1a 64-bit content hash, hex-encoded.
std::string content_hash(const std::string& bytes);
std::string file_hash(const std::filesystem::path& path);

// manifest.json for a result directory: echoes the inputs and hashes every
// csv/svg/json artifact already present.
void write_dir_manifest(const std::filesystem::path& dir, const nlohmann::json& inputs);

nlohmann::json interface_report_json(const InterfaceReport& rep);

}  // namespace stefan
