#pragma once

#include "cmvlab/adops.hpp"
#include "cmvlab/band.hpp"
#include "cmvlab/bispectral.hpp"
#include "cmvlab/cmv.hpp"
#include "cmvlab/diffop.hpp"
#include "cmvlab/errors.hpp"
#include "cmvlab/laurent.hpp"
#include "cmvlab/rational.hpp"
#include "cmvlab/sampling.hpp"
#include "cmvlab/scalar.hpp"
#include "cmvlab/scenario.hpp"
#include "cmvlab/verblunsky.hpp"
