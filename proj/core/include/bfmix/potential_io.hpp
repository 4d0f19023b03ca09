#pragma once

#include <filesystem>
#include <string>

#include "bfmix/potentials.hpp"
#include "bfmix/radial.hpp"

namespace bfmix::io {

// {"type":"fourier","cutoff":L,"coeffs":[[kx,ky,kz,value],...]}
FourierPotential parse_fourier(const std::string& json_text);
// {"type":"radial","r_max":R,"samples":[...],"grid":"uniform"} or
// {"type":"radial","grid":"nodes","r":[...],"samples":[...]}
RadialPotential parse_radial(const std::string& json_text);

std::string fourier_to_json(const FourierPotential& V);
std::string radial_to_json(const RadialPotential& v);

std::string read_text(const std::filesystem::path& path);
FourierPotential load_fourier(const std::filesystem::path& path);
RadialPotential load_radial(const std::filesystem::path& path);

}  // namespace bfmix::io
