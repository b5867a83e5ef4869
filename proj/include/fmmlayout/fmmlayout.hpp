#ifndef FMMLAYOUT_FMMLAYOUT_HPP
#define FMMLAYOUT_FMMLAYOUT_HPP

#include "assembler.hpp"
#include "common.hpp"
#include "fmm.hpp"
#include "forceatlas2.hpp"
#include "graph.hpp"
#include "kamada_kawai.hpp"
#include "layout_io.hpp"
#include "shortest_paths.hpp"

#endif
