#pragma once

#include "hsisteg/codec.hpp"
#include "hsisteg/colorspace.hpp"
#include "hsisteg/engine.hpp"
#include "hsisteg/error.hpp"
#include "hsisteg/image.hpp"
#include "hsisteg/imageio.hpp"
#include "hsisteg/metrics.hpp"
#include "hsisteg/workflow.hpp"
