#pragma once

#include "sptok/analysis.hpp"
#include "sptok/baselines.hpp"
#include "sptok/columnar.hpp"
#include "sptok/embedding.hpp"
#include "sptok/error.hpp"
#include "sptok/event.hpp"
#include "sptok/event_io.hpp"
#include "sptok/generators.hpp"
#include "sptok/spiking_patches.hpp"
#include "sptok/token.hpp"
#include "sptok/token_io.hpp"
