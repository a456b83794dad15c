#pragma once

#include "tle/aggregate.hpp"
#include "tle/bilinear.hpp"
#include "tle/classify.hpp"
#include "tle/dataset.hpp"
#include "tle/fft.hpp"
#include "tle/gradcheck.hpp"
#include "tle/model.hpp"
#include "tle/model_io.hpp"
#include "tle/rng.hpp"
#include "tle/sketch.hpp"
#include "tle/tensor.hpp"
#include "tle/train.hpp"
