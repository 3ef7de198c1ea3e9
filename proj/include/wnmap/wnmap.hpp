#ifndef WNMAP_WNMAP_HPP
#define WNMAP_WNMAP_HPP

#include "wnmap/error.hpp"
#include "wnmap/ntriples.hpp"
#include "wnmap/wordnet.hpp"
#include "wnmap/text.hpp"
#include "wnmap/vocab.hpp"
#include "wnmap/mapper.hpp"
#include "wnmap/eval.hpp"

#endif  // WNMAP_WNMAP_HPP
