#pragma once

#include "specfit/altmin.hpp"
#include "specfit/block_sym_matrix.hpp"
#include "specfit/csv.hpp"
#include "specfit/dataset.hpp"
#include "specfit/errors.hpp"
#include "specfit/evalkit.hpp"
#include "specfit/generators.hpp"
#include "specfit/model_io.hpp"
#include "specfit/pencil.hpp"
#include "specfit/rng.hpp"
