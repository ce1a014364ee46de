#pragma once
/** @file grk.hpp
 *  @brief Umbrella header for the whole library except JSON I/O.
 */

#include "grk/errors.hpp"
#include "grk/grading.hpp"
#include "grk/field.hpp"
#include "grk/gralg.hpp"
#include "grk/k0gr.hpp"
#include "grk/fullsynth.hpp"
#include "grk/faithful.hpp"
#include "grk/ultra.hpp"
#include "grk/lpa.hpp"
