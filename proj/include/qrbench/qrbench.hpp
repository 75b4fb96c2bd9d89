#pragma once

#include "qrbench/arith.hpp"
#include "qrbench/bfile.hpp"
#include "qrbench/classfield.hpp"
#include "qrbench/congr.hpp"
#include "qrbench/conjectures.hpp"
#include "qrbench/cyclo.hpp"
#include "qrbench/determinant.hpp"
#include "qrbench/perms.hpp"
#include "qrbench/runner.hpp"
#include "qrbench/signed_log.hpp"
#include "qrbench/suites.hpp"
#include "qrbench/trigeval.hpp"
#include "qrbench/verdict.hpp"
