#pragma once

#include "wickito/process.hpp"

inline wickito::ProcessSettings with_modes(std::size_t k) {
    wickito::ProcessSettings s;
    s.modes = k;
    return s;
}
