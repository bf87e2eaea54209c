// Umbrella header.
#pragma once

#include "analysis.hpp"
#include "corpus.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "grammar.hpp"
#include "lexc.hpp"
#include "rules.hpp"
#include "serialize.hpp"
#include "symbol_table.hpp"
#include "transducer.hpp"
#include "unicode.hpp"
