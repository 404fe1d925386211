#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "backscatter/born.hpp"
#include "backscatter/dispersion.hpp"
#include "backscatter/field.hpp"

namespace backscatter {

// RadialProfile CSV: header "rho,re,im", one row per node. Sampled only.
void write_profile_csv(const std::filesystem::path& path, const RadialProfile& profile);
RadialProfile read_profile_csv(const std::filesystem::path& path);

// Field binary: one text header line "bsfield dim=<n> extent=<L>
// points=<N>\n" followed by interleaved little-endian doubles (re, im).
void write_field(const std::filesystem::path& path, const Field& field);
Field read_field(const std::filesystem::path& path);

// DispersionSample CSV: eta_abs,r,re,im.
void write_dispersion_csv(const std::filesystem::path& path, const DispersionSample& sample);

// BornResult CSV: eta_abs,re_qhat,im_qhat,re_q2,im_q2[,re_q3,im_q3],
// re_qB,im_qB,re_res,im_res. Masked nodes are skipped.
void write_born_csv(const std::filesystem::path& path, const BornResult& result);

// Flat key=value config file; '#' starts a comment. Keys are validated by
// the caller against its known set.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

}  // namespace backscatter
