#pragma once

#include "comb/error.hpp"
#include "comb/group.hpp"
#include "comb/models.hpp"
#include "comb/fsa.hpp"
#include "comb/gsm.hpp"
#include "comb/fsa_io.hpp"
#include "comb/difference_machine.hpp"
#include "comb/travel.hpp"
#include "comb/language.hpp"
#include "comb/verify.hpp"
#include "comb/constructions.hpp"
#include "comb/atlas.hpp"
#include "comb/wordproblem.hpp"
