#pragma once

#include "futura/enumerate.hpp"
#include "futura/error.hpp"
#include "futura/formula.hpp"
#include "futura/model.hpp"
#include "futura/oracle.hpp"
#include "futura/reduction.hpp"
#include "futura/sea_battle.hpp"
#include "futura/semantics.hpp"
#include "futura/serialize.hpp"
#include "futura/syntax.hpp"
