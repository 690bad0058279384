#ifndef LOOPALG_LOOPALG_HPP
#define LOOPALG_LOOPALG_HPP

#include "loopalg/graph.hpp"
#include "loopalg/word.hpp"
#include "loopalg/tensor.hpp"
#include "loopalg/pairing.hpp"
#include "loopalg/fock.hpp"
#include "loopalg/calculus.hpp"
#include "loopalg/transport.hpp"
#include "loopalg/io.hpp"

#endif
