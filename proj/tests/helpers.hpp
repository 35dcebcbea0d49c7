// Shared generators for the property suites.

#ifndef G2LAB_TESTS_HELPERS_HPP
#define G2LAB_TESTS_HELPERS_HPP

#include <g2lab/generators.hpp>

namespace testgen = g2lab::gen;

#endif
