#pragma once

#include "conformist/aperiodicity.hpp"
#include "conformist/clause_solver.hpp"
#include "conformist/lamp_group.hpp"
#include "conformist/notation.hpp"
#include "conformist/pattern.hpp"
#include "conformist/random.hpp"
#include "conformist/search.hpp"
#include "conformist/serialization.hpp"
#include "conformist/sft_engine.hpp"
#include "conformist/subshift.hpp"
#include "conformist/union_find.hpp"
