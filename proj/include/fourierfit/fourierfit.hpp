#pragma once

#include "fourierfit/common.hpp"
#include "fourierfit/encodings.hpp"
#include "fourierfit/experiments.hpp"
#include "fourierfit/generalization.hpp"
#include "fourierfit/interpolate.hpp"
#include "fourierfit/io.hpp"
#include "fourierfit/oracle.hpp"
#include "fourierfit/quantum.hpp"
#include "fourierfit/rng.hpp"
#include "fourierfit/spectra.hpp"
#include "fourierfit/version.hpp"
