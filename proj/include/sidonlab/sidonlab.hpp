#pragma once

#include "sidonlab/counting.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/experiments.hpp"
#include "sidonlab/field.hpp"
#include "sidonlab/group.hpp"
#include "sidonlab/polynomial.hpp"
#include "sidonlab/rational.hpp"
#include "sidonlab/rng.hpp"
#include "sidonlab/serialization.hpp"
#include "sidonlab/sidon_set.hpp"
#include "sidonlab/version.hpp"
