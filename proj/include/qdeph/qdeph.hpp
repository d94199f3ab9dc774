#pragma once

#include "qdeph/errors.hpp"
#include "qdeph/quadrature.hpp"
#include "qdeph/bath.hpp"
#include "qdeph/dephasing.hpp"
#include "qdeph/qubit.hpp"
#include "qdeph/hermitian_eigen.hpp"
#include "qdeph/entanglement.hpp"
#include "qdeph/scenario.hpp"
