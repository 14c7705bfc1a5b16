#pragma once

#include "alphabet.hpp"
#include "determinant.hpp"
#include "entropy.hpp"
#include "io.hpp"
#include "number_theory.hpp"
#include "oracle.hpp"
#include "quiver.hpp"
#include "similarity.hpp"
#include "spin.hpp"
#include "synthetic.hpp"
