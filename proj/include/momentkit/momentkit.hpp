///
/// \file momentkit.hpp
///
/// Umbrella header.
///
#ifndef MOMENTKIT_MOMENTKIT_HPP
#define MOMENTKIT_MOMENTKIT_HPP

#include <momentkit/analyze.hpp>
#include <momentkit/common.hpp>
#include <momentkit/inversion.hpp>
#include <momentkit/markov.hpp>
#include <momentkit/structure.hpp>
#include <momentkit/transform.hpp>
#include <momentkit/trig.hpp>

#endif /* MOMENTKIT_MOMENTKIT_HPP */
