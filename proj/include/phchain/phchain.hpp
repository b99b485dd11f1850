#pragma once

#include "assignment.hpp"
#include "bisect.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "patterns.hpp"
#include "polynomial.hpp"
#include "spectral.hpp"
