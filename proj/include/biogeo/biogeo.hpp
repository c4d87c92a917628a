#pragma once

#include "biogeo/accuracy.hpp"
#include "biogeo/bbo.hpp"
#include "biogeo/classifier.hpp"
#include "biogeo/error.hpp"
#include "biogeo/netpbm.hpp"
#include "biogeo/random.hpp"
#include "biogeo/raster.hpp"
#include "biogeo/raster_io.hpp"
#include "biogeo/report.hpp"
#include "biogeo/roughset.hpp"
#include "biogeo/scene.hpp"
#include "biogeo/training.hpp"
