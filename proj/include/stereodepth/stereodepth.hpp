#pragma once

#include "depthmap.hpp"
#include "error.hpp"
#include "file_io.hpp"
#include "harness.hpp"
#include "image.hpp"
#include "matcher.hpp"
#include "netpbm.hpp"
